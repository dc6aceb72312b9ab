"""Truncated Fock space of the 3D isotropic harmonic oscillator.

The basis is the set of Cartesian number states |nx, ny, nz> with
nx + ny + nz <= n_max, ordered graded-lexicographically: first by total
quanta N = nx + ny + nz, then by the tuple (nx, ny, nz). Units use
hbar = 1 throughout.

Every operator is stored as a sparse complex matrix together with a
validity window: the largest shell W such that the truncated matrix,
applied to any vector supported on shells N <= W, acts exactly like the
untruncated operator. Compositions propagate the window automatically,
so derived identities always know on which block they are trustworthy.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy import sparse

HBAR = 1.0


@dataclass(frozen=True)
class OscParams:
    """Oscillator mass and angular frequency (hbar = 1)."""

    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0.0 and self.omega > 0.0):
            raise ValueError("mass and omega must be positive")

    @property
    def spring_constant(self) -> float:
        return self.mass * self.omega**2


class Basis3D:
    """Ordered Cartesian basis {|nx,ny,nz> : nx+ny+nz <= n_max}.

    Attributes
    ----------
    states : list of (nx, ny, nz) tuples in graded-lexicographic order.
    index : dict mapping state tuple to its position.
    shells : int array, total quanta of each basis state.
    """

    def __init__(self, n_max: int):
        if n_max < 0:
            raise ValueError("n_max must be >= 0")
        self.n_max = int(n_max)
        states = [
            (nx, ny, nz)
            for nx in range(n_max + 1)
            for ny in range(n_max + 1 - nx)
            for nz in range(n_max + 1 - nx - ny)
        ]
        states.sort(key=lambda s: (sum(s), s))
        self.states = states
        self.index = {s: i for i, s in enumerate(states)}
        self.shells = np.array([sum(s) for s in states], dtype=np.int64)
        self.dim = len(states)
        self.key = _hash_key(f"cart3d/v1/n_max={self.n_max}/graded-lex")

    def __repr__(self):
        return f"Basis3D(n_max={self.n_max}, dim={self.dim})"


def _hash_key(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def build_basis(n_max: int) -> Basis3D:
    """Enumerate the truncated basis. dim = (N+1)(N+2)(N+3)/6 for N = n_max."""
    return Basis3D(n_max)


class OperatorMatrix:
    """Sparse complex operator with truncation metadata.

    window : largest shell W such that action on any vector supported on
        shells N <= W equals the untruncated action. A negative window
        means no shell is certified.
    lo, hi : bounds on the shell displacement of the untruncated operator
        (for the annihilation operator lo = hi = -1, for position -1, +1).

    Composition rules (B applied first in A @ B):
        window(A @ B) = min(window(B), window(A) - hi(B))
        window(A + B) = min(window(A), window(B))
        window(A†)    = min(window(A) + lo(A), n_max + lo(A))
    The adjoint rule can be conservative for composite operators; callers
    that know better (for example when the matrix has been verified to be
    a pure shift) may promote via :meth:`with_window`.
    """

    __slots__ = ("matrix", "basis", "window", "lo", "hi")

    def __init__(self, matrix, basis, window: int, lo: int = 0, hi: int = 0):
        m = sparse.csr_matrix(matrix, dtype=np.complex128)
        if m.shape != (basis.dim, basis.dim):
            raise ValueError(f"matrix shape {m.shape} does not match basis dim {basis.dim}")
        m.sum_duplicates()
        m.sort_indices()
        self.matrix = m
        self.basis = basis
        self.window = min(int(window), basis.n_max)
        self.lo = int(lo)
        self.hi = int(hi)

    # -- algebra -----------------------------------------------------------

    def _check_compat(self, other: "OperatorMatrix"):
        if self.basis.key != other.basis.key:
            raise ValueError("operator bases differ")

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            self._check_compat(other)
            w = min(other.window, self.window - other.hi)
            return OperatorMatrix(
                self.matrix @ other.matrix,
                self.basis,
                window=w,
                lo=self.lo + other.lo,
                hi=self.hi + other.hi,
            )
        return self.matrix @ other

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_compat(other)
        return OperatorMatrix(
            self.matrix + other.matrix,
            self.basis,
            window=min(self.window, other.window),
            lo=min(self.lo, other.lo),
            hi=max(self.hi, other.hi),
        )

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self + (-1.0) * other

    def __mul__(self, alpha) -> "OperatorMatrix":
        return OperatorMatrix(self.matrix * alpha, self.basis, self.window, self.lo, self.hi)

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorMatrix":
        return (-1.0) * self

    def adjoint(self) -> "OperatorMatrix":
        n_max = self.basis.n_max
        w = min(self.window + self.lo, n_max + self.lo, n_max)
        return OperatorMatrix(
            self.matrix.conj().T.tocsr(), self.basis, window=w, lo=-self.hi, hi=-self.lo
        )

    def with_window(self, window: int, lo: int, hi: int) -> "OperatorMatrix":
        """Re-declare metadata after an external verification justified it."""
        return OperatorMatrix(self.matrix, self.basis, window, lo, hi)

    # -- convenience -------------------------------------------------------

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def restricted(self, window: int | None = None):
        """Matrix times the projector onto shells <= window (defaults to own window)."""
        w = self.window if window is None else window
        return self.matrix @ shell_projector(self.basis, w)

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def __repr__(self):
        return (
            f"OperatorMatrix(dim={self.basis.dim}, nnz={self.nnz}, "
            f"window={self.window}, lo={self.lo}, hi={self.hi})"
        )


def identity(basis) -> OperatorMatrix:
    return OperatorMatrix(sparse.identity(basis.dim, format="csr"), basis, basis.n_max, 0, 0)


def shell_projector(basis, window: int):
    """Sparse projector onto basis states with total quanta <= window."""
    keep = (basis.shells <= window).astype(np.complex128)
    return sparse.diags(keep, format="csr")


def op_norm_1(a) -> float:
    """Operator norm induced by the vector 1-norm: max column abs sum."""
    if isinstance(a, OperatorMatrix):
        a = a.matrix
    if sparse.issparse(a):
        if a.nnz == 0:
            return 0.0
        return float(abs(a).sum(axis=0).max())
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.abs(a).sum(axis=0).max())


def residual_on_window(op: OperatorMatrix, window: int | None = None) -> float:
    """1-norm of the operator restricted to inputs on shells <= window."""
    return op_norm_1(op.restricted(window))


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a @ b - b @ a


# -- elementary operators ---------------------------------------------------

AXES = ("x", "y", "z")
_AXIS_NUM = {"x": 0, "y": 1, "z": 2}


def ladder(basis: Basis3D, axis: str) -> OperatorMatrix:
    """Annihilation operator for one Cartesian axis: a|..n..> = sqrt(n)|..n-1..>.

    Pure lowering, so the truncated matrix is exact on every shell.
    """
    ax = _AXIS_NUM[axis]
    rows, cols, vals = [], [], []
    for j, s in enumerate(basis.states):
        n = s[ax]
        if n == 0:
            continue
        t = list(s)
        t[ax] = n - 1
        rows.append(basis.index[tuple(t)])
        cols.append(j)
        vals.append(np.sqrt(n))
    m = sparse.coo_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim))
    return OperatorMatrix(m, basis, window=basis.n_max, lo=-1, hi=-1)


def raising(basis: Basis3D, axis: str) -> OperatorMatrix:
    """Creation operator, exact on shells N <= n_max - 1."""
    return ladder(basis, axis).adjoint()


def position(basis: Basis3D, axis: str, params: OscParams) -> OperatorMatrix:
    """r_j = (a_j + a_j†) / sqrt(2 M w)."""
    a = ladder(basis, axis)
    return (a + a.adjoint()) * (1.0 / np.sqrt(2.0 * params.mass * params.omega))


def momentum(basis: Basis3D, axis: str, params: OscParams) -> OperatorMatrix:
    """p_j = i sqrt(M w / 2) (a_j† - a_j)."""
    a = ladder(basis, axis)
    return (a.adjoint() - a) * (1j * np.sqrt(params.mass * params.omega / 2.0))


def hamiltonian(basis: Basis3D, params: OscParams) -> OperatorMatrix:
    """H = w (N + 3/2), diagonal in the number basis, exact on every shell."""
    diag = params.omega * (basis.shells + 1.5)
    return OperatorMatrix(sparse.diags(diag.astype(np.complex128)), basis, basis.n_max, 0, 0)


def angular_momentum(basis: Basis3D, axis: str) -> OperatorMatrix:
    """L_k = eps_kij r_i p_j in its normal-ordered ladder form.

    L_x = i(a_z† a_y - a_y† a_z) and cyclic. This form is the exact
    truncation (window n_max); multiplying truncated r and p matrices
    instead is exact only one shell lower.
    """
    k = _AXIS_NUM[axis]
    i_ax, j_ax = AXES[(k + 1) % 3], AXES[(k + 2) % 3]
    ai, aj = ladder(basis, i_ax), ladder(basis, j_ax)
    return 1j * (aj.adjoint() @ ai - ai.adjoint() @ aj)


def l_squared(basis: Basis3D) -> OperatorMatrix:
    ops = [angular_momentum(basis, ax) for ax in AXES]
    total = ops[0] @ ops[0]
    for lk in ops[1:]:
        total = total + lk @ lk
    return total


def vector_ladder(basis: Basis3D, axis: str, params: OscParams) -> OperatorMatrix:
    """The combination p_j - i M w r_j, built from the p and r matrices.

    Algebraically this equals -i sqrt(2 M w) a_j, a pure lowering operator.
    The construction verifies that entrywise, then returns the verified
    lowering form so the raising parts cancel exactly rather than to
    roundoff; the window promotion to the full n_max is never assumed.
    """
    m = momentum(basis, axis, params) - (1j * params.mass * params.omega) * position(
        basis, axis, params
    )
    ref = (-1j * np.sqrt(2.0 * params.mass * params.omega)) * ladder(basis, axis)
    scale = max(op_norm_1(ref), 1.0)
    if op_norm_1(m - ref) > 1e-13 * scale:
        raise AssertionError("p - i M w r does not reduce to the scaled lowering operator")
    return ref.with_window(basis.n_max, -1, -1)


def vector_ladder_squared(basis: Basis3D, params: OscParams) -> OperatorMatrix:
    """Dot square of the vector ladder; lowers total quanta by exactly 2.

    Commutes with every L_k, so it preserves (l, m) and steps the radial
    quantum number down by one inside each partial wave.
    """
    comps = [vector_ladder(basis, ax, params) for ax in AXES]
    total = comps[0] @ comps[0]
    for v in comps[1:]:
        total = total + v @ v
    return total


class CartesianOperators:
    """Bundle of the elementary operators over one basis and parameter set."""

    def __init__(self, basis: Basis3D, params: OscParams):
        self.basis = basis
        self.params = params
        self.a = {ax: ladder(basis, ax) for ax in AXES}
        self.adag = {ax: self.a[ax].adjoint() for ax in AXES}
        self.r = {ax: position(basis, ax, params) for ax in AXES}
        self.p = {ax: momentum(basis, ax, params) for ax in AXES}
        self.h = hamiltonian(basis, params)
        self.l = {ax: angular_momentum(basis, ax) for ax in AXES}
        self.l2 = l_squared(basis)
        self.v = {ax: vector_ladder(basis, ax, params) for ax in AXES}
        self.v2 = vector_ladder_squared(basis, params)


def cartesian_operators(basis: Basis3D, params: OscParams) -> CartesianOperators:
    return CartesianOperators(basis, params)
