"""Verification suite: every operator identity as a reported check.

Each check measures a residual in the max-column-sum norm, restricted to
the validity window of the composite operator involved, and compares it
against a pinned tolerance. Relative residuals are taken against the
natural scale of the identity (the norm of its right-hand side).
Structural checks (label content, multiplicities) report the number of
mismatches as the residual with tolerance zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolution import (
    StateSpec,
    classify_winding,
    half_period_advance_check,
    phase_trajectory,
    tau_law_check,
    winding_interval,
)
from .fock import (
    AXES,
    OscParams,
    build_basis,
    cartesian_operators,
    commutator,
    identity,
    op_norm_1,
    residual_on_window,
)
from .phase1d import (
    Chain1D,
    NumberBasis1D,
    doubled_shift_1d,
    edge_projectors,
    hamiltonian_1d,
    number_shift_pair,
)
from .phase3d import (
    build_phase_operators,
    doubled_identity,
    dyadic_phase_exponential,
    inverse_shift_residuals,
    reconstruction_residuals,
)
from .spherical import build_spherical, degeneracy_table, to_spherical

TOL_REL_IDENTITY = 1e-12
TOL_EIGEN = 1e-10
TOL_SHIFT = 1e-10
TOL_UNITARY = 1e-12
TOL_RECONSTRUCTION = 1e-10
TOL_SANDWICH = 1e-11
TOL_ROTATION = 1e-10
TOL_SLOPE = 1e-9


@dataclass(frozen=True)
class CheckReport:
    name: str
    law: str
    mode: str
    window: int
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def _rel(value: float, scale: float) -> float:
    return value / max(scale, 1e-300)


def _comm_residual(a, b, expected=None, scale=None) -> tuple[float, int]:
    """Relative windowed residual of [a, b] - expected (expected may be None)."""
    c = commutator(a, b)
    if expected is not None:
        c = c - expected
        if scale is None:
            scale = op_norm_1(expected)
    if scale is None:
        scale = op_norm_1(a) * max(op_norm_1(b), 1.0)
    return _rel(residual_on_window(c), scale), c.window


class _Context:
    """Everything the checks need, built once per (n_max, params)."""

    def __init__(self, n_max: int, params: OscParams):
        self.n_max = n_max
        self.params = params
        self.basis = build_basis(n_max)
        self.ops = cartesian_operators(self.basis, params)
        self.sph = build_spherical(self.basis, params, self.ops)
        self.psets = {
            mode: build_phase_operators(self.sph, params, mode, self.ops)
            for mode in ("open", "cyclic")
        }
        self.h_sph = to_spherical(self.ops.h, self.sph)


def run_all_checks(n_max: int = 8, params: OscParams | None = None) -> list[CheckReport]:
    params = params or OscParams()
    ctx = _Context(n_max, params)
    reports: list[CheckReport] = []
    reports += _fock_checks(ctx)
    reports += _spherical_checks(ctx)
    reports += _phase1d_checks(ctx)
    for mode in ("open", "cyclic"):
        reports += _phase3d_checks(ctx, mode)
    reports += _evolution_checks(ctx)
    return reports


# -- fock ---------------------------------------------------------------------


def _fock_checks(ctx: _Context) -> list[CheckReport]:
    ops, params = ctx.ops, ctx.params
    w = params.omega
    out = []

    worst = 0.0
    for ax in AXES:
        r, win = _comm_residual(
            ops.a[ax], ops.adag[ax], identity(ctx.basis), scale=1.0
        )
        worst = max(worst, r)
    out.append(
        CheckReport("ladder_canonical", "[a_j, a_j+] = 1", "-", win, worst, TOL_REL_IDENTITY)
    )

    worst = 0.0
    for ax in AXES:
        for jx in AXES:
            expected = (1j if ax == jx else 0.0) * identity(ctx.basis)
            r, win = _comm_residual(ops.r[ax], ops.p[jx], expected, scale=1.0)
            worst = max(worst, r)
    out.append(
        CheckReport("position_momentum", "[r_j, p_k] = i delta_jk", "-", win, worst, TOL_REL_IDENTITY)
    )

    quad = None
    for ax in AXES:
        term = (1.0 / (2.0 * params.mass)) * (ops.p[ax] @ ops.p[ax]) + (
            0.5 * params.spring_constant
        ) * (ops.r[ax] @ ops.r[ax])
        quad = term if quad is None else quad + term
    diff = quad - ops.h
    out.append(
        CheckReport(
            "hamiltonian_quadratic",
            "H = p^2/2M + k r^2/2",
            "-",
            diff.window,
            _rel(residual_on_window(diff), op_norm_1(ops.h)),
            TOL_REL_IDENTITY,
        )
    )

    worst = 0.0
    for ax in AXES:
        r, win = _comm_residual(ops.h, ops.v[ax], (-w) * ops.v[ax])
        worst = max(worst, r)
    out.append(
        CheckReport("lowering_vector_commutator", "[H, V_j] = -w V_j", "-", win, worst, TOL_REL_IDENTITY)
    )

    worst = 0.0
    for ax in AXES:
        vd = ops.v[ax].adjoint()
        r, win = _comm_residual(ops.h, vd, w * vd)
        worst = max(worst, r)
    out.append(
        CheckReport("raising_vector_commutator", "[H, V_j+] = +w V_j+", "-", win, worst, TOL_REL_IDENTITY)
    )

    r, win = _comm_residual(ops.h, ops.v2, (-2.0 * w) * ops.v2)
    out.append(
        CheckReport("shell_square_commutator", "[H, V2] = -2w V2", "-", win, r, TOL_REL_IDENTITY)
    )
    v2d = ops.v2.adjoint()
    r, win = _comm_residual(ops.h, v2d, (2.0 * w) * v2d)
    out.append(
        CheckReport("shell_square_adjoint_commutator", "[H, V2+] = +2w V2+", "-", win, r, TOL_REL_IDENTITY)
    )

    eps = {("x", "y"): "z", ("y", "z"): "x", ("z", "x"): "y"}
    scale = max(op_norm_1(ops.v[ax]) for ax in AXES)
    worst = 0.0
    for k in AXES:
        for l in AXES:
            if k == l:
                expected = 0.0 * ops.v[l]
            elif (k, l) in eps:
                expected = 1j * ops.v[eps[(k, l)]]
            else:
                expected = -1j * ops.v[eps[(l, k)]]
            c = commutator(ops.l[k], ops.v[l]) - expected
            worst = max(worst, _rel(residual_on_window(c), scale))
            win = c.window
    out.append(
        CheckReport(
            "angular_vector_commutator", "[L_k, V_l] = i eps_klm V_m", "-", win, worst, TOL_REL_IDENTITY
        )
    )

    worst = 0.0
    for k in AXES:
        c = commutator(ops.l[k], ops.v2)
        worst = max(worst, _rel(residual_on_window(c), op_norm_1(ops.v2)))
        win = c.window
    out.append(
        CheckReport("angular_shell_square", "[L_k, V2] = 0", "-", win, worst, TOL_REL_IDENTITY)
    )

    worst = 0.0
    for op in [*(ops.l[ax] for ax in AXES), ops.l2]:
        c = commutator(ops.h, op)
        worst = max(worst, _rel(residual_on_window(c), max(op_norm_1(op), 1.0) * op_norm_1(ops.h)))
        win = c.window
    c = commutator(ops.l2, ops.l["z"])
    worst = max(worst, _rel(residual_on_window(c), max(op_norm_1(ops.l2), 1.0) * max(op_norm_1(ops.l["z"]), 1.0)))
    out.append(
        CheckReport("shell_preserving_commutants", "[H, L_k] = [H, L2] = [L2, L_z] = 0", "-", win, worst, TOL_REL_IDENTITY)
    )

    route = None
    for ax in AXES:
        comp = ops.p[ax] - (1j * params.mass * w) * ops.r[ax]
        term = comp @ comp
        route = term if route is None else route + term
    scale = max(op_norm_1(ops.v2), params.mass * w)
    out.append(
        CheckReport(
            "shell_square_route",
            "sum_j (p_j - iMw r_j)^2 = -2Mw sum_j a_j a_j (entrywise)",
            "-",
            ctx.n_max,
            _rel(op_norm_1(ops.v2 - route), scale),
            TOL_REL_IDENTITY,
        )
    )

    alt = cartesian_operators(ctx.basis, OscParams(2.0 * params.mass, 0.5 * params.omega))
    h_res = _rel(op_norm_1(2.0 * alt.h - ops.h), op_norm_1(ops.h))
    v2_res = _rel(op_norm_1(alt.v2 - ops.v2), op_norm_1(ops.v2)) if ops.v2.nnz else 0.0
    out.append(
        CheckReport(
            "parameter_scaling",
            "H linear in w, M-free; V2 proportional to Mw",
            "-",
            ctx.n_max,
            max(h_res, v2_res),
            TOL_REL_IDENTITY,
        )
    )
    return out


# -- spherical ----------------------------------------------------------------


def _spherical_checks(ctx: _Context) -> list[CheckReport]:
    sph, ops, params = ctx.sph, ctx.ops, ctx.params
    out = []

    gram = sph.U.conj().T @ sph.U
    out.append(
        CheckReport(
            "column_map_unitary",
            "U+ U = 1",
            "-",
            ctx.n_max,
            float(np.abs(gram - np.eye(sph.dim)).max()),
            TOL_UNITARY,
        )
    )

    energies = params.omega * (sph.shells + 1.5)
    resid = np.abs(ops.h.matrix @ sph.U - sph.U * energies[None, :]).max()
    lsq = np.array([lab.l * (lab.l + 1) for lab in sph.labels], dtype=float)
    resid = max(resid, np.abs(ops.l2.matrix @ sph.U - sph.U * lsq[None, :]).max())
    mv = np.array([lab.m for lab in sph.labels], dtype=float)
    resid = max(resid, np.abs(ops.l["z"].matrix @ sph.U - sph.U * mv[None, :]).max())
    out.append(
        CheckReport(
            "simultaneous_eigenvectors",
            "H|nlm> = w(2n+l+3/2)|nlm>, L2|nlm> = l(l+1)|nlm>, Lz|nlm> = m|nlm>",
            "-",
            ctx.n_max,
            float(resid),
            TOL_EIGEN,
        )
    )

    mismatches = 0
    for shell, e_over_w, mult, lvals in degeneracy_table(sph):
        if mult != (shell + 1) * (shell + 2) // 2:
            mismatches += 1
        if lvals != list(range(shell % 2, shell + 1, 2)):
            mismatches += 1
        if e_over_w != shell + 1.5:
            mismatches += 1
    out.append(
        CheckReport(
            "shell_content",
            "multiplicity (N+1)(N+2)/2 with l in {N, N-2, ...}",
            "-",
            ctx.n_max,
            float(mismatches),
            0.0,
        )
    )

    v2s = to_spherical(ops.v2, sph).toarray()
    allowed = np.zeros_like(v2s, dtype=bool)
    scale = max(op_norm_1(ops.v2), 1.0)
    elem_worst = 0.0
    for (l, m), idxs in sph.chains.items():
        for n in range(1, len(idxs)):
            i, j = idxs[n - 1], idxs[n]
            allowed[i, j] = True
            want = 2.0 * params.mass * params.omega * np.sqrt(2.0 * n * (2.0 * n + 2 * l + 1))
            elem_worst = max(elem_worst, abs(abs(v2s[i, j]) - want) / want)
            # chain phase convention makes the element real positive
            elem_worst = max(elem_worst, abs(np.imag(v2s[i, j])) / want)
            elem_worst = max(elem_worst, max(0.0, -np.real(v2s[i, j])) / want)
    stray = np.abs(np.where(allowed, 0.0, v2s)).max() if v2s.size else 0.0
    out.append(
        CheckReport(
            "partial_wave_preservation",
            "V2 maps (n,l,m) only to (n-1,l,m)",
            "-",
            ctx.n_max,
            _rel(float(stray), scale),
            TOL_REL_IDENTITY,
        )
    )
    out.append(
        CheckReport(
            "shell_square_normalization",
            "<n-1,l,m|V2|n,l,m> = 2Mw sqrt(2n(2n+2l+1)), real positive",
            "-",
            ctx.n_max,
            elem_worst,
            TOL_EIGEN,
        )
    )
    return out


# -- 1d -----------------------------------------------------------------------


def _phase1d_checks(ctx: _Context) -> list[CheckReport]:
    out = []
    nb = NumberBasis1D(ctx.n_max)
    down, up = number_shift_pair(nb)
    ident = identity(nb)
    dd = down @ up - ident
    out.append(
        CheckReport(
            "shift_isometry_1d",
            "E E+ = 1 (windowed); E+ E = 1 - |0><0|",
            "-",
            dd.window,
            max(
                residual_on_window(dd),
                op_norm_1((up @ down - ident).matrix + _vacuum_1d(nb)),
            ),
            TOL_UNITARY,
        )
    )

    for mode in ("open", "cyclic"):
        chain = Chain1D(ctx.n_max, mode)
        shift = doubled_shift_1d(chain)
        ident = identity(chain)
        p_left, p_right = edge_projectors(chain)
        if mode == "open":
            resid = max(
                op_norm_1(shift.adjoint() @ shift - ident + p_left),
                op_norm_1(shift @ shift.adjoint() - ident + p_right),
            )
            law = "E+ E = 1 - P_edge, E E+ = 1 - P_edge' (edges only)"
        else:
            resid = max(
                op_norm_1(shift.adjoint() @ shift - ident),
                op_norm_1(shift @ shift.adjoint() - ident),
            )
            law = "E unitary on the closed chain"
        out.append(CheckReport("doubled_chain_1d", law, mode, chain.n_max, resid, TOL_UNITARY))

        h = hamiltonian_1d(chain, ctx.params.omega)
        plus = np.zeros(chain.dim)
        for n in range(chain.n_max + 1):
            plus[chain.position_of(n, +1)] = 1.0
        p_plus = _diag_projector(chain, plus)
        law_op = p_plus @ (commutator(h, shift) + ctx.params.omega * shift) @ p_plus
        out.append(
            CheckReport(
                "commutator_law_1d",
                "<chi+|[H,E]|psi+> = -w <chi+|E|psi+>",
                mode,
                chain.n_max,
                _rel(op_norm_1(law_op), ctx.params.omega * max(op_norm_1(shift), 1.0)),
                TOL_SANDWICH,
            )
        )
    return out


def _vacuum_1d(nb: NumberBasis1D):
    from scipy import sparse

    return sparse.coo_matrix(([1.0], ([0], [0])), shape=(nb.dim, nb.dim)).tocsr()


def _diag_projector(basis, diag):
    from scipy import sparse

    from .fock import OperatorMatrix

    return OperatorMatrix(
        sparse.diags(np.asarray(diag, dtype=np.complex128)), basis, basis.n_max, 0, 0
    )


# -- 3d phase -----------------------------------------------------------------


def _phase3d_checks(ctx: _Context, mode: str) -> list[CheckReport]:
    pset = ctx.psets[mode]
    params = ctx.params
    sph = ctx.sph
    d = pset.doubled
    out = []

    if mode == "open":
        s = pset.down_single
        dense = s.toarray()
        worst = 0.0
        for (l, m), idxs in sph.chains.items():
            col = dense[:, idxs[0]]
            worst = max(worst, float(np.abs(col).max()))
            for n in range(1, len(idxs)):
                col = dense[:, idxs[n]].copy()
                worst = max(worst, abs(col[idxs[n - 1]] - 1.0))
                col[idxs[n - 1]] = 0.0
                worst = max(worst, float(np.abs(col).max()))
        out.append(
            CheckReport(
                "radial_shift_action",
                "S|n,l,m> = |n-1,l,m>, S|0,l,m> = 0",
                "-",
                s.window,
                worst,
                TOL_SHIFT,
            )
        )

        ident_s = identity(sph)
        vac = _diag_projector(sph, np.array([1.0 if lab.n == 0 else 0.0 for lab in sph.labels]))
        top = _diag_projector(sph, _chain_top_indicator(sph))
        s_up = pset.up_single
        resid = max(
            op_norm_1(s_up @ s - ident_s + vac),
            op_norm_1(s @ s_up - ident_s + top),
        )
        out.append(
            CheckReport(
                "radial_shift_isometry",
                "S+ S = 1 - P_{n=0}; S S+ = 1 - P_top",
                "-",
                ctx.n_max,
                resid,
                TOL_UNITARY,
            )
        )

        w = params.omega
        r1, win1 = _comm_residual(ctx.h_sph, s, (-2.0 * w) * s)
        s_adj = s.adjoint()
        r2, win2 = _comm_residual(ctx.h_sph, s_adj, (2.0 * w) * s_adj)
        out.append(
            CheckReport(
                "radial_shift_commutator",
                "[H, S] = -2w S and [H, S+] = +2w S+",
                "-",
                min(win1, win2),
                max(r1, r2),
                TOL_REL_IDENTITY,
            )
        )

    e2 = pset.exp_plus
    dy = dyadic_phase_exponential(pset)
    out.append(
        CheckReport(
            "phase_exponential_form",
            "projector formula matches the chain dyadic expansion entrywise",
            mode,
            e2.window,
            float(np.abs((e2.matrix - dy)).max()) if d.dim else 0.0,
            TOL_UNITARY,
        )
    )

    ident = doubled_identity(d)
    if mode == "open":
        ends_minus = pset.chain_end_projector(-1)
        ends_plus = pset.chain_end_projector(+1)
        resid = max(
            op_norm_1(pset.exp_minus @ e2 - ident + ends_minus),
            op_norm_1(e2 @ pset.exp_minus - ident + ends_plus),
        )
        law = "E+ E = 1 - P_ends(-), E E+ = 1 - P_ends(+)"
    else:
        resid = max(
            op_norm_1(pset.exp_minus @ e2 - ident),
            op_norm_1(e2 @ pset.exp_minus - ident),
        )
        law = "E+ E = E E+ = 1 (cyclic closure)"
    out.append(CheckReport("phase_exponential_unitarity", law, mode, d.n_max, resid, TOL_UNITARY))

    if mode == "cyclic":
        dense = np.abs(e2.toarray())
        dev = np.minimum(dense, np.abs(dense - 1.0)).max() if dense.size else 0.0
        dev = max(
            dev,
            float(np.abs(dense.sum(axis=0) - 1.0).max()),
            float(np.abs(dense.sum(axis=1) - 1.0).max()),
        )
        out.append(
            CheckReport(
                "cyclic_permutation",
                "cyclic exponential is a permutation matrix",
                mode,
                d.n_max,
                float(dev),
                TOL_UNITARY,
            )
        )

    inv = inverse_shift_residuals(pset)
    out.append(
        CheckReport(
            "shift_from_exponential",
            "S = (1+I)/2 E + (1-I)/2 E+; S+ = E+ (1+I)/2 + E (1-I)/2",
            mode,
            d.n_max - 2,
            max(inv["down"], inv["up"]),
            TOL_UNITARY,
        )
    )

    herm = max(
        op_norm_1(pset.cos2 - pset.cos2.adjoint()),
        op_norm_1(pset.sin2 - pset.sin2.adjoint()),
    )
    pyth = pset.cos2 @ pset.cos2 + pset.sin2 @ pset.sin2 - ident
    if mode == "cyclic":
        pyth_res = op_norm_1(pyth)
    else:
        pyth_res = op_norm_1(pyth @ (ident - pset.chain_end_projector(+1) - pset.chain_end_projector(-1)))
    out.append(
        CheckReport(
            "trig_pair",
            "cos, sin Hermitian; cos^2 + sin^2 = 1 away from open ends",
            mode,
            d.n_max,
            max(herm, pyth_res),
            TOL_UNITARY,
        )
    )

    cos_dense = pset.cos2.matrix
    worst = 0.0
    count = 0
    for (l, m), idxs in sph.chains.items():
        if mode == "cyclic" and len(idxs) < 2:
            continue
        i = idxs[0]
        worst = max(worst, abs(cos_dense[i, i + d.dim_single] - 0.5))
        count += 1
    out.append(
        CheckReport(
            "vacuum_link_element",
            "<0,l,m,+|cos|0,l,m,-> = 1/2",
            mode,
            d.n_max,
            worst if count else 0.0,
            TOL_UNITARY,
        )
    )

    rec = reconstruction_residuals(pset, ctx.ops)
    out.append(
        CheckReport(
            "reconstruction_lowering",
            "V2 = 2M B^(1/2) (cos + i I sin), prefactor left",
            mode,
            d.n_max - 2,
            rec["lowering"],
            TOL_RECONSTRUCTION,
        )
    )
    out.append(
        CheckReport(
            "reconstruction_raising",
            "V2+ = (cos - i sin I) 2M B^(1/2), prefactor right",
            mode,
            d.n_max - 2,
            rec["raising"],
            TOL_RECONSTRUCTION,
        )
    )
    out.append(
        CheckReport(
            "reconstruction_sign_left",
            "V2+ = (cos - i I sin) 2M B^(1/2) away from the vacuum link",
            mode,
            d.n_max - 2,
            rec["raising_sign_left_no_vacuum"],
            TOL_RECONSTRUCTION,
        )
    )

    h_d = d.embed(ctx.h_sph)
    w = params.omega
    p_plus = pset.branch_projector(+1)
    p_minus = pset.branch_projector(-1)
    scale = 2.0 * w * max(op_norm_1(e2), 1.0)
    resid = max(
        _rel(op_norm_1(p_plus @ (commutator(h_d, e2) + (2.0 * w) * e2) @ p_plus), scale),
        _rel(op_norm_1(p_plus @ (commutator(h_d, pset.exp_minus) - (2.0 * w) * pset.exp_minus) @ p_plus), scale),
    )
    out.append(
        CheckReport(
            "commutator_law_plus",
            "<chi+|[H,E]|psi+> = -2w <chi+|E|psi+> (and +2w for E+)",
            mode,
            d.n_max,
            resid,
            TOL_SANDWICH,
        )
    )
    resid = max(
        _rel(op_norm_1(p_minus @ (commutator(h_d, e2) - (2.0 * w) * e2) @ p_minus), scale),
        _rel(op_norm_1(p_minus @ (commutator(h_d, pset.exp_minus) + (2.0 * w) * pset.exp_minus) @ p_minus), scale),
    )
    out.append(
        CheckReport(
            "commutator_law_minus",
            "sign-flipped commutator law on H_-",
            mode,
            d.n_max,
            resid,
            TOL_SANDWICH,
        )
    )

    sign, exch = pset.sign, pset.exchange
    resid = max(
        op_norm_1(commutator(sign, h_d)),
        op_norm_1(commutator(sign, pset.down)),
        op_norm_1(exch @ exch - ident),
        op_norm_1(exch @ sign + sign @ exch),
    )
    resid = max(resid, abs(op_norm_1(commutator(sign, e2)) - 2.0))
    out.append(
        CheckReport(
            "superselection_structure",
            "[I,H] = [I,S] = 0, X^2 = 1, XI = -IX, |[I,E]| = 2 (vacuum link)",
            mode,
            d.n_max,
            resid,
            TOL_UNITARY,
        )
    )
    return out


def _chain_top_indicator(sph):
    diag = np.zeros(sph.dim)
    for (l, m), idxs in sph.chains.items():
        diag[idxs[-1]] = 1.0
    return diag


# -- evolution ----------------------------------------------------------------


def _evolution_checks(ctx: _Context) -> list[CheckReport]:
    out = []
    phis = np.concatenate(
        [
            np.arange(-4.0 * np.pi, 4.0 * np.pi, 0.37),
            np.array([0.0, np.pi, -np.pi, 0.5, -0.5, 0.5 - 2 * np.pi]),
            np.pi * np.arange(-3, 4) + 1e-9,
            np.pi * np.arange(-3, 4) - 1e-9,
        ]
    )
    mismatch = 0
    for branch in ("(+)", "(-)"):
        for phi in phis:
            ws = classify_winding(float(phi), branch)
            lo, hi = winding_interval(ws.j, ws.sigma, branch)
            if not (lo < phi <= hi):
                mismatch += 1
            hits = 0
            for j in range(ws.j - 2, ws.j + 3):
                for sigma in ("-", "+"):
                    lo, hi = winding_interval(j, sigma, branch)
                    if lo < phi <= hi:
                        hits += 1
            if hits != 1:
                mismatch += 1
    out.append(
        CheckReport(
            "winding_cells_tile",
            "pi-wide half-open cells tile the real line, one label per phi",
            "-",
            ctx.n_max,
            float(mismatch),
            0.0,
        )
    )

    if ctx.n_max < 4:
        return out

    params = ctx.params
    w = params.omega
    pset = ctx.psets["open"]
    t_grid = np.linspace(0.0, 2.0 * np.pi / w, 129)

    for lam, sign, tag in ((+1, +1.0, "plus"), (-1, -1.0, "minus")):
        spec = StateSpec.of(
            [((0, 0, 0), lam, 1 / np.sqrt(2)), ((1, 0, 0), lam, 1 / np.sqrt(2))]
        )
        points = phase_trajectory(spec, t_grid, params, pset)
        vals = np.array([p.exp_plus for p in points])
        rot = vals * np.exp(sign * 2j * w * t_grid)
        out.append(
            CheckReport(
                "expectation_rotation_" + tag,
                "<E>(t) = <E>(0) exp(-2iwt) on H_+ (conjugate rate on H_-)",
                "open",
                pset.exp_plus.window,
                float(np.abs(rot - vals[0]).max()),
                TOL_ROTATION,
            )
        )
        fit = tau_law_check(points)
        out.append(
            CheckReport(
                "time_expectation_slope_" + tag,
                "tau(t) = tau(0) + t on H_+ (tau(0) - t on H_-)",
                "open",
                pset.exp_plus.window,
                max(abs(fit.slope - sign), fit.max_residual),
                TOL_SLOPE,
            )
        )

    # phase-offset amplitude puts phi(0) = 0.5, safely inside its cell;
    # a real pair would start exactly on a cell boundary
    spec = StateSpec.of(
        [((0, 0, 0), +1, 1 / np.sqrt(2)), ((1, 0, 0), +1, np.exp(1j) / np.sqrt(2))]
    )
    report = half_period_advance_check(spec, params, pset, periods=2)
    out.append(
        CheckReport(
            "half_period_advance",
            "(j,-) -> (j,+) -> (j+1,-) every half period",
            "open",
            pset.exp_plus.window,
            0.0 if report.ok else 1.0,
            0.0,
        )
    )

    doubled = pset.doubled
    from .evolution import energies as _energies

    phases = np.exp(-1j * _energies(doubled, params) * (2.0 * np.pi / w))
    out.append(
        CheckReport(
            "propagator_period",
            "U(2 pi / w) = -1 on every doubled label",
            "-",
            ctx.n_max,
            float(np.abs(phases + 1.0).max()),
            TOL_ROTATION,
        )
    )
    return out
