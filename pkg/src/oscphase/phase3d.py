"""Unitary phase exponential for the 3D oscillator on a doubled space.

The radial shift S steps |n, l, m> down to |n-1, l, m> with coefficient
exactly one. It is an isometry whose defect lives on the radial ground
states, so, as in 1D, the space is doubled into H = H_+ (+) H_- and the
two copies are glued at their n = 0 states. Per partial wave (l, m) the
doubled states form one chain

    ... |1,lm,-> <- |0,lm,-> <- |0,lm,+> <- |1,lm,+> <- ...

and the phase exponential shifts it one step left. All operators here
are exactly block diagonal in (l, m) by construction.

The shift normalization divides the shell-lowering square V2 by the
square root of

    B = (H + w)^2 - w^2 (L^2 + 1/4),

whose eigenvalue on |n, l, m> is w^2 (2n+2) (2n+2l+3) > 0. B is
evaluated in the spherical basis, where it is diagonal; positivity is
asserted before taking roots.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .fock import OperatorMatrix, OscParams, _hash_key, op_norm_1
from .spherical import DegenerateSplitFailure, SphericalBasis, to_spherical

NORM_OFFDIAG_TOL = 1e-10


class SingularNormalization(Exception):
    """The shift normalization operator lost positivity."""


class DoubledBasis:
    """H_+ (+) H_- over the spherical labels.

    Index i < dim_single is (labels[i], +1); index i + dim_single is
    (labels[i], -1). Chains list, per (l, m), the doubled indices of the
    plus and minus branches ordered by increasing n.
    """

    def __init__(self, sph: SphericalBasis):
        self.spherical = sph
        self.dim_single = sph.dim
        self.dim = 2 * sph.dim
        self.n_max = sph.n_max
        self.shells = np.concatenate([sph.shells, sph.shells])
        self.key = _hash_key(f"doubled/v1/{sph.key}")

    def index(self, label, lam: int) -> int:
        base = self.spherical.index[label]
        return base if lam > 0 else base + self.dim_single

    def branch_slice(self, lam: int) -> slice:
        return slice(0, self.dim_single) if lam > 0 else slice(self.dim_single, self.dim)

    def embed(self, op: OperatorMatrix) -> OperatorMatrix:
        """Block-diagonal action of a single-copy operator on both copies."""
        if op.basis.key != self.spherical.key:
            raise ValueError("operator is not over the underlying spherical basis")
        m = sparse.block_diag((op.matrix, op.matrix), format="csr")
        return OperatorMatrix(m, self, window=op.window, lo=op.lo, hi=op.hi)

    def chain(self, l: int, m: int):
        idxs = self.spherical.chains[(l, m)]
        plus = [i for i in idxs]
        minus = [i + self.dim_single for i in idxs]
        return plus, minus


def sign_operator(doubled: DoubledBasis) -> OperatorMatrix:
    """Diagonal +1 on H_+, -1 on H_-."""
    diag = np.concatenate(
        [np.ones(doubled.dim_single), -np.ones(doubled.dim_single)]
    ).astype(np.complex128)
    return OperatorMatrix(sparse.diags(diag), doubled, doubled.n_max, 0, 0)


def exchange_operator(doubled: DoubledBasis) -> OperatorMatrix:
    """Swap of the two copies; squares to the identity, anticommutes with the sign."""
    d = doubled.dim_single
    rows = list(range(d, 2 * d)) + list(range(d))
    cols = list(range(d)) + list(range(d, 2 * d))
    m = sparse.coo_matrix(([1.0] * (2 * d), (rows, cols)), shape=(doubled.dim, doubled.dim))
    return OperatorMatrix(m, doubled, doubled.n_max, 0, 0)


def doubled_identity(doubled: DoubledBasis) -> OperatorMatrix:
    return OperatorMatrix(
        sparse.identity(doubled.dim, format="csr"), doubled, doubled.n_max, 0, 0
    )


def normalization_bracket(sph: SphericalBasis, params: OscParams, ops) -> np.ndarray:
    """Diagonal of (H + w)^2 - w^2 (L^2 + 1/4) in the spherical basis.

    Validates that the transformed matrix really is diagonal (relative
    off-diagonal below 1e-10) and strictly positive.
    """
    from .fock import identity as cart_identity

    w = params.omega
    h_shift = ops.h + w * cart_identity(sph.cart)
    bracket = h_shift @ h_shift - (w * w) * (ops.l2 + 0.25 * cart_identity(sph.cart))
    b_sph = to_spherical(bracket, sph)
    dense = b_sph.toarray()
    diag = np.real(np.diag(dense)).copy()
    off = dense - np.diag(np.diag(dense))
    scale = max(np.abs(diag).max(), 1.0)
    if op_norm_1(off) > NORM_OFFDIAG_TOL * scale:
        raise DegenerateSplitFailure("normalization bracket is not diagonal in this basis")
    if np.any(diag <= 0.0):
        raise SingularNormalization(
            f"nonpositive normalization eigenvalue {diag.min()!r}"
        )
    return diag


def radial_shift_pair(sph: SphericalBasis, params: OscParams, ops=None):
    """Normalized radial shift S = (1/2M) B^(-1/2) V2 and its adjoint.

    Built chain by chain, so matrix elements between different (l, m)
    are exact zeros. S|n,l,m> = |n-1,l,m> with coefficient one (up to
    roundoff) and S|0,l,m> = 0.
    """
    from .fock import cartesian_operators

    if ops is None:
        ops = cartesian_operators(sph.cart, params)
    diag = normalization_bracket(sph, params, ops)
    v2s = to_spherical(ops.v2, sph).toarray()
    rows, cols, vals = [], [], []
    for (l, m), idxs in sph.chains.items():
        for n in range(1, len(idxs)):
            i, j = idxs[n - 1], idxs[n]
            rows.append(i)
            cols.append(j)
            vals.append(v2s[i, j] / (2.0 * params.mass * np.sqrt(diag[i])))
    mat = sparse.coo_matrix((vals, (rows, cols)), shape=(sph.dim, sph.dim))
    down = OperatorMatrix(mat, sph, window=sph.n_max, lo=-2, hi=-2)
    return down, down.adjoint()


class PhaseOperatorSet:
    """Doubled-space phase operators for one truncation and edge mode.

    Fields: down/up (radial shift pair embedded on both copies), sign,
    exchange, exp_plus/exp_minus (the unitary phase exponential and its
    adjoint), cos2/sin2, and sqrt_norm (B^(1/2) over the single copy).
    Instances are immutable; share them freely across threads.
    """

    def __init__(self, sph: SphericalBasis, params: OscParams, mode: str, ops=None):
        if mode not in ("open", "cyclic"):
            raise ValueError("mode must be 'open' or 'cyclic'")
        from .fock import cartesian_operators

        if ops is None:
            ops = cartesian_operators(sph.cart, params)
        self.spherical = sph
        self.params = params
        self.mode = mode
        self.doubled = DoubledBasis(sph)
        d = self.doubled

        s_down, s_up = radial_shift_pair(sph, params, ops)
        self.down_single, self.up_single = s_down, s_up
        self.down = d.embed(s_down)
        self.up = d.embed(s_up)
        diag = normalization_bracket(sph, params, ops)
        self.norm_diag = diag
        self.sqrt_norm = OperatorMatrix(
            sparse.diags(np.sqrt(diag).astype(np.complex128)), sph, sph.n_max, 0, 0
        )
        self.sign = sign_operator(d)
        self.exchange = exchange_operator(d)

        ident = doubled_identity(d)
        p_plus = 0.5 * (ident + self.sign)
        vac = ident - self.up @ self.down
        e2 = p_plus @ self.down + (0.5 * (ident - self.sign)) @ self.up + (
            self.exchange @ vac @ p_plus
        )
        if mode == "cyclic":
            rows, cols = [], []
            for (l, m), idxs in sph.chains.items():
                top = idxs[-1]
                rows.append(top)
                cols.append(top + d.dim_single)
            wrap = sparse.coo_matrix(
                ([1.0] * len(rows), (rows, cols)), shape=(d.dim, d.dim)
            )
            e2 = e2 + OperatorMatrix(wrap, d, window=d.n_max - 2, lo=0, hi=0)
        self.exp_plus = e2
        # The adjoint rule is conservative for this composite; the defect
        # columns of the adjoint sit on the plus-branch chain tops, shells
        # >= n_max - 1, so the mirror window n_max - 2 is justified.
        self.exp_minus = e2.adjoint().with_window(d.n_max - 2, -2, 2)
        self.cos2 = 0.5 * (self.exp_plus + self.exp_minus)
        self.sin2 = (-0.5j) * (self.exp_plus - self.exp_minus)

    # -- projectors ----------------------------------------------------------

    def vacuum_projector(self) -> OperatorMatrix:
        """Projector onto the n = 0 states of both copies."""
        d = self.doubled
        idx = [d.index(lab, lam) for lab in d.spherical.labels if lab.n == 0 for lam in (+1, -1)]
        m = sparse.coo_matrix(
            ([1.0] * len(idx), (idx, idx)), shape=(d.dim, d.dim)
        )
        return OperatorMatrix(m, d, d.n_max, 0, 0)

    def chain_end_projector(self, lam: int) -> OperatorMatrix:
        """Projector onto the chain-top states of one branch."""
        d = self.doubled
        idx = []
        for (l, m), idxs in self.spherical.chains.items():
            top = idxs[-1]
            idx.append(top if lam > 0 else top + d.dim_single)
        mat = sparse.coo_matrix(([1.0] * len(idx), (idx, idx)), shape=(d.dim, d.dim))
        return OperatorMatrix(mat, d, d.n_max, 0, 0)

    def interior_projector(self) -> OperatorMatrix:
        """Projector onto doubled states with shell 2n + l <= n_max - 2."""
        d = self.doubled
        keep = (d.shells <= d.n_max - 2).astype(np.complex128)
        return OperatorMatrix(sparse.diags(keep), d, d.n_max, 0, 0)

    def branch_projector(self, lam: int) -> OperatorMatrix:
        d = self.doubled
        diag = np.zeros(d.dim, dtype=np.complex128)
        diag[d.branch_slice(lam)] = 1.0
        return OperatorMatrix(sparse.diags(diag), d, d.n_max, 0, 0)

    # -- explicit phase (cyclic only) ----------------------------------------

    def hermitian_phase(self) -> np.ndarray:
        """Hermitian phase matrix with exp(2i phase) equal to the exponential.

        Only the cyclic closure makes the exponential unitary, so only
        there does a Hermitian phase exist. Eigenphases take the branch
        arg in (-pi, pi].
        """
        if self.mode != "cyclic":
            raise ValueError("a Hermitian phase exists only in cyclic mode")
        from scipy.linalg import schur

        t, q = schur(self.exp_plus.toarray(), output="complex")
        half_args = 0.5 * np.angle(np.diag(t))
        return (q * half_args[None, :]) @ q.conj().T

    def time_operator(self) -> np.ndarray:
        """T = -phase / w, cyclic mode only."""
        return -self.hermitian_phase() / self.params.omega


def build_phase_operators(
    sph: SphericalBasis, params: OscParams, mode: str = "open", ops=None
) -> PhaseOperatorSet:
    return PhaseOperatorSet(sph, params, mode, ops)


def dyadic_phase_exponential(pset: PhaseOperatorSet) -> sparse.csr_matrix:
    """Independent chain-enumeration form of the phase exponential.

    Sum over chains of |n,lm,+><n+1,lm,+| + |0,lm,-><0,lm,+| +
    |n+1,lm,-><n,lm,-|, plus the wrap term in cyclic mode. Used to
    cross-check the projector formula entry for entry.
    """
    d = pset.doubled
    rows, cols, vals = [], [], []
    for (l, m), idxs in pset.spherical.chains.items():
        plus, minus = d.chain(l, m)
        for n in range(1, len(idxs)):
            rows.append(plus[n - 1])
            cols.append(plus[n])
            vals.append(1.0)
            rows.append(minus[n])
            cols.append(minus[n - 1])
            vals.append(1.0)
        rows.append(minus[0])
        cols.append(plus[0])
        vals.append(1.0)
        if pset.mode == "cyclic":
            rows.append(plus[-1])
            cols.append(minus[-1])
            vals.append(1.0)
    return sparse.coo_matrix((vals, (rows, cols)), shape=(d.dim, d.dim)).tocsr()


def inverse_shift_residuals(pset: PhaseOperatorSet) -> dict:
    """Residuals of recovering the shift pair from the phase exponential.

    down = (1+I)/2 E + (1-I)/2 E† and up = E† (1+I)/2 + E (1-I)/2 hold
    exactly away from the truncated chain tops, so the residuals are
    measured on the interior window.
    """
    ident = doubled_identity(pset.doubled)
    p_plus = 0.5 * (ident + pset.sign)
    p_minus = 0.5 * (ident - pset.sign)
    down_rhs = p_plus @ pset.exp_plus + p_minus @ pset.exp_minus
    up_rhs = pset.exp_minus @ p_plus + pset.exp_plus @ p_minus
    interior = pset.interior_projector()
    scale = max(op_norm_1(pset.down), 1.0)
    return {
        "down": op_norm_1((pset.down - down_rhs) @ interior) / scale,
        "up": op_norm_1((pset.up - up_rhs) @ interior) / scale,
    }


def reconstruction_residuals(pset: PhaseOperatorSet, ops=None) -> dict:
    """Residuals of rebuilding (p -+ i M w r)^2 from the phase operators.

    First line: V2 = 2M B^(1/2) (cos + i I sin), prefactor on the left.
    Second line: V2† = (cos - i sin I) 2M B^(1/2), prefactor on the
    right; this is the exact adjoint of the first line, in which the sign
    operator sits to the right of the sine. Placing the sign to the left
    of the sine in the second line fails on the vacuum-link states, so
    that variant is reported separately with the vacuum excluded.
    All residuals are relative and restricted to the interior window.
    """
    from .fock import cartesian_operators

    sph = pset.spherical
    params = pset.params
    if ops is None:
        ops = cartesian_operators(sph.cart, params)
    d = pset.doubled
    v2_d = d.embed(to_spherical(ops.v2, sph))
    sqrt_b = d.embed(pset.sqrt_norm)
    two_m = 2.0 * params.mass

    lhs1 = v2_d
    rhs1 = two_m * (sqrt_b @ (pset.cos2 + 1j * (pset.sign @ pset.sin2)))
    lhs2 = v2_d.adjoint()
    rhs2 = (pset.cos2 - 1j * (pset.sin2 @ pset.sign)) @ (two_m * sqrt_b)
    rhs2_literal = (pset.cos2 - 1j * (pset.sign @ pset.sin2)) @ (two_m * sqrt_b)

    interior = pset.interior_projector()
    ident = doubled_identity(d)
    away_from_vacuum = interior @ (ident - pset.vacuum_projector())
    scale = max(op_norm_1(v2_d), 1.0)
    return {
        "lowering": op_norm_1((lhs1 - rhs1) @ interior) / scale,
        "raising": op_norm_1((lhs2 - rhs2) @ interior) / scale,
        "raising_sign_left_no_vacuum": op_norm_1((lhs2 - rhs2_literal) @ away_from_vacuum)
        / scale,
    }
