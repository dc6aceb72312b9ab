"""Time evolution and phase-expectation trajectories on the doubled space.

The Hamiltonian is diagonal over the doubled spherical labels with
eigenvalue w (2n + l + 3/2) on both copies, so propagation is a diagonal
phase multiplication. For a state supported on a single copy the
expectation of the phase exponential rotates rigidly,

    <exp(2i phase)>(t) = <exp(2i phase)>(0) exp(-2 i w t)   on H_+,

with the opposite rotation on H_-. Half the continuous argument of that
expectation is the unwound phase phi(t); tau = -phi / w then advances
with slope +1 (H_+) or -1 (H_-). The winding bookkeeping (j, sigma)
labels which pi-wide cell of the real line phi currently occupies; the
cells tile the line exactly, one full period stepping j by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import OscParams
from .kernels import trajectory_expectations
from .phase3d import DoubledBasis, PhaseOperatorSet
from .spherical import SphericalLabel

PHASE_MODULUS_TOL = 1e-8
MAX_RAW_STEP = np.pi / 2


class PhaseUndefined(Exception):
    """Phase expectation too small to carry a well-defined argument."""


class UnwrapAmbiguity(Exception):
    """The sampling grid cannot support unambiguous phase unwrapping."""


@dataclass(frozen=True)
class StateSpec:
    """Superposition given as ((label, lam, amplitude), ...) terms.

    lam = +1 places the term in H_+, lam = -1 in H_-. Amplitudes are
    normalized at assembly time.
    """

    terms: tuple

    @classmethod
    def of(cls, terms) -> "StateSpec":
        out = []
        for label, lam, amp in terms:
            if not isinstance(label, SphericalLabel):
                label = SphericalLabel(*label)
            if lam not in (+1, -1):
                raise ValueError("lam must be +1 or -1")
            out.append((label, int(lam), complex(amp)))
        return cls(tuple(out))

    def branch_lambda(self) -> int:
        lams = {lam for _, lam, amp in self.terms if amp != 0}
        if len(lams) != 1:
            raise ValueError("state must live in a single copy for phase trajectories")
        return lams.pop()

    @property
    def branch(self) -> str:
        return "(+)" if self.branch_lambda() > 0 else "(-)"


@dataclass(frozen=True)
class WindingState:
    j: int
    sigma: str
    branch: str


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    exp_plus: complex
    exp_minus: complex
    phi_unwound: float
    tau: float
    winding: WindingState


def energies(doubled: DoubledBasis, params: OscParams) -> np.ndarray:
    """Diagonal Hamiltonian over the doubled labels, identical on both copies."""
    single = params.omega * (doubled.spherical.shells + 1.5)
    return np.concatenate([single, single])


def state_vector(spec: StateSpec, doubled: DoubledBasis) -> np.ndarray:
    vec = np.zeros(doubled.dim, dtype=np.complex128)
    for label, lam, amp in spec.terms:
        if label not in doubled.spherical.index:
            raise ValueError(f"label {label} is not in the truncated basis")
        vec[doubled.index(label, lam)] += amp
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise ValueError("state has zero norm")
    return vec / norm


def propagate(spec: StateSpec, t: float, params: OscParams, doubled: DoubledBasis) -> np.ndarray:
    """State vector at time t under the diagonal propagator exp(-i E t)."""
    vec = state_vector(spec, doubled)
    return vec * np.exp(-1j * energies(doubled, params) * t)


def _wrap_pi(x: float) -> float:
    return (x + np.pi) % (2.0 * np.pi) - np.pi


def _winding_from_cell(k: int, branch: str) -> WindingState:
    if branch == "(+)":
        if k % 2 == 0:
            return WindingState(j=-k // 2, sigma="-", branch=branch)
        return WindingState(j=-(k + 1) // 2, sigma="+", branch=branch)
    if k % 2 == 0:
        return WindingState(j=k // 2, sigma="+", branch=branch)
    return WindingState(j=(k + 1) // 2, sigma="-", branch=branch)


def _cell_from_winding(j: int, sigma: str, branch: str) -> int:
    if branch == "(+)":
        return -2 * j if sigma == "-" else -2 * j - 1
    return 2 * j if sigma == "+" else 2 * j - 1


def classify_winding(phi: float, branch: str) -> WindingState:
    """Locate phi in the pi-wide half-open winding cells of one branch.

    Branch (+): cell (j, -) is -2j pi < phi <= pi - 2j pi and cell (j, +)
    is -pi - 2j pi < phi <= -2j pi. Branch (-) mirrors the layout with
    cells advancing toward positive phi. The cells tile the real line.
    """
    if branch not in ("(+)", "(-)"):
        raise ValueError("branch must be '(+)' or '(-)'")
    k = math.ceil(phi / math.pi) - 1  # unique k with k pi < phi <= (k+1) pi
    # the division can misplace phi by one cell right at a boundary
    # (a subnormal phi underflows the quotient to zero, for instance);
    # snap k against the same products winding_interval uses
    if phi <= k * math.pi:
        k -= 1
    elif phi > (k + 1) * math.pi:
        k += 1
    return _winding_from_cell(k, branch)


def winding_interval(j: int, sigma: str, branch: str) -> tuple[float, float]:
    """Half-open cell (low, high] for the given winding label.

    Adjacent cells share the exact float boundary k * math.pi, so the
    cells tile the line with no gaps or overlaps at the float level.
    """
    k = _cell_from_winding(j, sigma, branch)
    return (k * math.pi, (k + 1) * math.pi)


def phase_trajectory(
    spec: StateSpec, t_grid, params: OscParams, pset: PhaseOperatorSet
) -> list[TrajectoryPoint]:
    """Expectation of the phase exponential along a time grid.

    The state must live in one copy and inside the trajectory window
    (every supported label needs 2n + l <= n_max - 2, where the phase
    exponential is exact). The argument of exp_plus is unwound by
    nearest-branch continuation with phi(0) in (-pi, pi].
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ValueError("t_grid must be a nonempty 1D array")
    lam = spec.branch_lambda()
    branch = spec.branch
    doubled = pset.doubled
    for label, _lam, amp in spec.terms:
        if amp != 0 and label.shell > doubled.n_max - 2:
            raise ValueError(
                f"label {label} sits outside the trajectory window (2n+l <= n_max-2)"
            )
    vec = state_vector(spec, doubled)
    evals = energies(doubled, params)
    exp_plus = trajectory_expectations(evals, vec, pset.exp_plus.matrix, t_grid)

    if abs(exp_plus[0]) < PHASE_MODULUS_TOL:
        raise PhaseUndefined(
            f"|<exp(2i phase)>(0)| = {abs(exp_plus[0]):.3e} for state {spec.terms!r}"
        )
    raw = np.angle(exp_plus)
    theta = np.empty_like(raw)
    theta[0] = raw[0]
    for k in range(1, raw.size):
        theta[k] = theta[k - 1] + _wrap_pi(raw[k] - raw[k - 1])
    phi = 0.5 * theta
    tau = -phi / params.omega

    points = []
    for k, t in enumerate(t_grid):
        points.append(
            TrajectoryPoint(
                t=float(t),
                exp_plus=complex(exp_plus[k]),
                exp_minus=complex(np.conj(exp_plus[k])),
                phi_unwound=float(phi[k]),
                tau=float(tau[k]),
                winding=classify_winding(float(phi[k]), branch),
            )
        )
    return points


@dataclass(frozen=True)
class TauFit:
    slope: float
    intercept: float
    max_residual: float


def tau_law_check(points: list[TrajectoryPoint]) -> TauFit:
    """Least-squares line through tau(t); raises on unusable grids.

    A single point leaves the slope undefined, and any step that moves
    the raw argument of exp_plus by pi/2 or more makes the unwrapping
    ambiguous; both raise UnwrapAmbiguity.
    """
    if len(points) < 2:
        raise UnwrapAmbiguity("at least two grid points are needed for a slope")
    raw = np.angle([p.exp_plus for p in points])
    steps = np.abs([_wrap_pi(b - a) for a, b in zip(raw[:-1], raw[1:])])
    if np.any(steps >= MAX_RAW_STEP):
        raise UnwrapAmbiguity(
            f"raw argument step {steps.max():.3f} rad >= pi/2; refine the grid"
        )
    ts = np.array([p.t for p in points])
    taus = np.array([p.tau for p in points])
    slope, intercept = np.polyfit(ts, taus, 1)
    resid = np.abs(taus - (slope * ts + intercept)).max()
    return TauFit(slope=float(slope), intercept=float(intercept), max_residual=float(resid))


@dataclass(frozen=True)
class HalfPeriodReport:
    entries: tuple
    ok: bool


def half_period_advance_check(
    spec: StateSpec, params: OscParams, pset: PhaseOperatorSet, periods: int = 4
) -> HalfPeriodReport:
    """Track winding labels across half periods of T0 = 2 pi / w.

    Every half period sigma flips, and j steps by one whenever sigma
    returns to '-': (j,-) -> (j,+) -> (j+1,-). The same pattern holds on
    both branches. Entries are (t, phi, observed, expected) with expected
    None on the starting row.
    """
    steps_per_half = 32
    t0 = 2.0 * np.pi / params.omega
    dt = 0.5 * t0 / steps_per_half
    n_half = 2 * periods
    grid = np.arange(n_half * steps_per_half + 1) * dt
    points = phase_trajectory(spec, grid, params, pset)
    entries = []
    ok = True
    prev = None
    for h in range(n_half + 1):
        p = points[h * steps_per_half]
        observed = p.winding
        if prev is None:
            expected = None
        elif prev.sigma == "-":
            expected = WindingState(j=prev.j, sigma="+", branch=prev.branch)
        else:
            expected = WindingState(j=prev.j + 1, sigma="-", branch=prev.branch)
        if expected is not None and observed != expected:
            ok = False
        entries.append((p.t, p.phi_unwound, observed, expected))
        prev = observed
    return HalfPeriodReport(entries=tuple(entries), ok=ok)
