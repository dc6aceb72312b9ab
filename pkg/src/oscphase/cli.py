"""Command line front end.

Subcommands:
  verify          run the full identity suite, one PASS/FAIL line per check
  trajectory      export a phase/time trajectory as CSV
  spectrum        print shell energies, multiplicities and angular content
  unitarity-scan  defect norms of the phase exponential across truncations

Options may come from flags or from a config file of `key = value` lines
(`#` starts a comment). Flags win over the file. Exit codes: 0 success,
1 failed check or undefined phase, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from .checks import run_all_checks
from .evolution import PhaseUndefined, StateSpec, phase_trajectory
from .fock import OscParams, build_basis, cartesian_operators, op_norm_1
from .phase3d import build_phase_operators, doubled_identity
from .spherical import build_spherical, degeneracy_table

DEFAULT_STATE = "0,0,0,+ : 0.7071067811865476 ; 1,0,0,+ : 0.7071067811865476"

CSV_HEADER = "t,re_exp_plus,im_exp_plus,abs_exp_plus,phi_unwound,tau,j,sigma,branch"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n_max: int = 8
    mass: float = 1.0
    omega: float = 1.0
    mode: str = "open"
    state: str | None = None
    t_max: float = 10.0
    dt: float = 0.01
    out: str | None = None
    n_max_list: tuple[int, ...] = ()

    def validate(self) -> "RunConfig":
        if self.n_max < 0:
            raise ConfigError("n_max must be >= 0")
        if self.mass <= 0 or self.omega <= 0:
            raise ConfigError("mass and omega must be positive")
        if self.mode not in ("open", "cyclic"):
            raise ConfigError("mode must be 'open' or 'cyclic', got %r" % self.mode)
        if self.dt <= 0 or self.t_max < 0:
            raise ConfigError("need dt > 0 and t_max >= 0")
        return self


def _coerce(name: str, text: str):
    text = text.strip()
    if name == "n_max":
        return int(text)
    if name in ("mass", "omega", "t_max", "dt"):
        return float(text)
    if name == "n_max_list":
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    if name in ("mode", "state", "out"):
        return text
    raise KeyError(name)


def load_config(path: str) -> RunConfig:
    valid = {f.name for f in fields(RunConfig)}
    overrides = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc)) from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("%s:%d: expected 'key = value', got %r" % (path, lineno, raw.rstrip()))
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in valid:
            raise ConfigError("%s:%d: unknown key %r" % (path, lineno, key))
        try:
            overrides[key] = _coerce(key, value)
        except (ValueError, KeyError) as exc:
            raise ConfigError("%s:%d: bad value for %s: %s" % (path, lineno, key, exc)) from exc
    return replace(RunConfig(), **overrides)


def parse_state(text: str) -> StateSpec:
    """Parse 'n,l,m,sigma : amplitude ; ...' into a state description."""
    terms = []
    for piece in text.split(";"):
        piece = piece.strip()
        if not piece:
            continue
        if ":" not in piece:
            raise ConfigError("state term %r needs 'labels : amplitude'" % piece)
        labels, _, amp_text = piece.partition(":")
        toks = [tok.strip() for tok in labels.split(",")]
        if len(toks) != 4:
            raise ConfigError("state term %r needs n,l,m,sigma" % piece)
        try:
            n, l, m = int(toks[0]), int(toks[1]), int(toks[2])
        except ValueError as exc:
            raise ConfigError("state term %r: %s" % (piece, exc)) from exc
        sigma_tok = toks[3]
        if sigma_tok in ("+", "+1"):
            lam = +1
        elif sigma_tok in ("-", "-1"):
            lam = -1
        else:
            raise ConfigError("state term %r: branch must be one of + - +1 -1" % piece)
        try:
            amp = complex(amp_text.strip().replace(" ", ""))
        except ValueError as exc:
            raise ConfigError("state term %r: bad amplitude: %s" % (piece, exc)) from exc
        terms.append(((n, l, m), lam, amp))
    if not terms:
        raise ConfigError("state %r has no terms" % text)
    try:
        return StateSpec.of(terms)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(x: float) -> str:
    return format(float(x) + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0


def _open_out(cfg: RunConfig):
    if cfg.out is None:
        return sys.stdout, False
    return open(cfg.out, "w"), True


def cmd_verify(cfg: RunConfig) -> int:
    params = OscParams(cfg.mass, cfg.omega)
    reports = run_all_checks(cfg.n_max, params)
    stream, close = _open_out(cfg)
    failed = 0
    try:
        for rep in reports:
            status = "PASS" if rep.passed else "FAIL"
            failed += 0 if rep.passed else 1
            stream.write(
                '%s name=%s law="%s" mode=%s window=%d residual=%.3e tol=%.3e\n'
                % (status, rep.name, rep.law, rep.mode, rep.window, rep.residual, rep.tolerance)
            )
        stream.write(
            "# summary: checks=%d passed=%d failed=%d n_max=%d mass=%s omega=%s\n"
            % (len(reports), len(reports) - failed, failed, cfg.n_max, _fmt(cfg.mass), _fmt(cfg.omega))
        )
    finally:
        if close:
            stream.close()
    return 1 if failed else 0


def cmd_trajectory(cfg: RunConfig) -> int:
    params = OscParams(cfg.mass, cfg.omega)
    spec = parse_state(cfg.state if cfg.state is not None else DEFAULT_STATE)
    for (label, lam, amp) in spec.terms:
        if label.shell > cfg.n_max:
            raise ConfigError(
                "state label (%d,%d,%d) needs 2n+l <= n_max=%d" % (label.n, label.l, label.m, cfg.n_max)
            )
    basis = build_basis(cfg.n_max)
    ops = cartesian_operators(basis, params)
    sph = build_spherical(basis, params, ops)
    pset = build_phase_operators(sph, params, cfg.mode, ops)
    n_steps = int(round(cfg.t_max / cfg.dt))
    times = np.arange(n_steps + 1) * cfg.dt
    try:
        points = phase_trajectory(spec, times, params, pset)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    stream, close = _open_out(cfg)
    try:
        stream.write(CSV_HEADER + "\n")
        for pt in points:
            stream.write(
                "%s,%s,%s,%s,%s,%s,%d,%s,%s\n"
                % (
                    _fmt(pt.t),
                    _fmt(pt.exp_plus.real),
                    _fmt(pt.exp_plus.imag),
                    _fmt(abs(pt.exp_plus)),
                    _fmt(pt.phi_unwound),
                    _fmt(pt.tau),
                    pt.winding.j,
                    pt.winding.sigma,
                    pt.winding.branch,
                )
            )
    finally:
        if close:
            stream.close()
    return 0


def cmd_spectrum(cfg: RunConfig) -> int:
    basis = build_basis(cfg.n_max)
    params = OscParams(cfg.mass, cfg.omega)
    ops = cartesian_operators(basis, params)
    sph = build_spherical(basis, params, ops)
    stream, close = _open_out(cfg)
    try:
        for shell, e_over_w, mult, lvals in degeneracy_table(sph):
            stream.write(
                "N=%d E_over_omega=%s multiplicity=%d l=[%s]\n"
                % (shell, _fmt(e_over_w), mult, ",".join(str(l) for l in lvals))
            )
    finally:
        if close:
            stream.close()
    return 0


def cmd_unitarity_scan(cfg: RunConfig) -> int:
    sizes = cfg.n_max_list or (cfg.n_max,)
    rows = []
    for n_max in sizes:
        if n_max < 0:
            raise ConfigError("n_max_list entries must be >= 0")
        basis = build_basis(n_max)
        params = OscParams(cfg.mass, cfg.omega)
        ops = cartesian_operators(basis, params)
        sph = build_spherical(basis, params, ops)
        open_pset = build_phase_operators(sph, params, "open", ops)
        cyc_pset = build_phase_operators(sph, params, "cyclic", ops)
        ident = doubled_identity(open_pset.doubled)
        interior = open_pset.interior_projector()
        open_defect = op_norm_1(open_pset.exp_minus @ open_pset.exp_plus - ident)
        open_interior = op_norm_1(
            (open_pset.exp_minus @ open_pset.exp_plus - ident) @ interior
        )
        cyc_defect = op_norm_1(cyc_pset.exp_minus @ cyc_pset.exp_plus - ident)
        rows.append((n_max, open_defect, open_interior, cyc_defect))
    stream, close = _open_out(cfg)
    try:
        stream.write("n_max,open_defect,open_defect_interior,cyclic_defect\n")
        for n_max, a, b, c in rows:
            stream.write("%d,%s,%s,%s\n" % (n_max, _fmt(a), _fmt(b), _fmt(c)))
    finally:
        if close:
            stream.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscphase",
        description="Phase and time operator toolkit for the truncated isotropic oscillator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run every operator identity check"),
        ("trajectory", "export phase expectation trajectory as CSV"),
        ("spectrum", "print the shell degeneracy table"),
        ("unitarity-scan", "defect norms across truncation sizes"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="config file of key = value lines")
        p.add_argument("--n-max", type=int, dest="n_max", help="shell cutoff (default 8)")
        p.add_argument("--mass", type=float, help="oscillator mass (default 1.0)")
        p.add_argument("--omega", type=float, help="angular frequency (default 1.0)")
        p.add_argument("--mode", choices=("open", "cyclic"), help="chain closure mode")
        p.add_argument("--out", help="output path (default stdout)")
        if name == "trajectory":
            p.add_argument("--state", help="terms 'n,l,m,sigma : amplitude ; ...'")
            p.add_argument("--t-max", type=float, dest="t_max", help="final time (default 10)")
            p.add_argument("--dt", type=float, help="time step (default 0.01)")
        if name == "unitarity-scan":
            p.add_argument(
                "--n-max-list",
                dest="n_max_list",
                help="comma separated shell cutoffs, e.g. 2,4,8",
            )
    return parser


def _merge(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is None:
            continue
        if f.name == "n_max_list" and isinstance(value, str):
            value = _coerce("n_max_list", value)
        overrides[f.name] = value
    return replace(cfg, **overrides).validate()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "verify": cmd_verify,
        "trajectory": cmd_trajectory,
        "spectrum": cmd_spectrum,
        "unitarity-scan": cmd_unitarity_scan,
    }
    try:
        cfg = _merge(args)
        return handlers[args.command](cfg)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except PhaseUndefined as exc:
        print("phase undefined: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
