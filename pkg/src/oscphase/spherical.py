"""Spherical relabeling |n, l, m> of the truncated oscillator basis.

Within each energy shell N the angular momentum operators are block
diagonal, so L^2 and L_z are diagonalized shell by shell. A shell N
contains exactly the orbital sectors l = N, N-2, ..., 1 or 0. Only the
l = N vectors of each shell are radial ground states (n = 0); states
with n >= 1 are generated by the adjoint of the shell-lowering square,

    |n, l, m>  :=  V2† |n-1, l, m> / || V2† |n-1, l, m> ||,

which fixes every phase once the n = 0 vector's phase is fixed. The
n = 0 convention makes the largest-magnitude Cartesian coefficient real
positive (ties broken by the lowest basis index among coefficients
within 1e-9 of the maximum). Under this convention the shift operators
built downstream act with coefficient exactly +1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import (
    Basis3D,
    CartesianOperators,
    OperatorMatrix,
    OscParams,
    _hash_key,
    cartesian_operators,
)

CLUSTER_TOL = 1e-8
EIGEN_RESIDUAL_TOL = 1e-10
PHASE_TIE_TOL = 1e-9


class DegenerateSplitFailure(Exception):
    """Numerically pathological shell diagonalization or label assignment."""


@dataclass(frozen=True, order=True)
class SphericalLabel:
    n: int
    l: int
    m: int

    @property
    def shell(self) -> int:
        return 2 * self.n + self.l


class SphericalBasis:
    """Label table plus the unitary column map U from spherical to Cartesian.

    Column i of U is the Cartesian coefficient vector of labels[i]. Labels
    are ordered graded-lexicographically by (shell, l, m). chains maps each
    (l, m) to the label positions ordered by increasing n.
    """

    def __init__(self, cart: Basis3D, labels, U: np.ndarray):
        self.cart = cart
        self.labels = list(labels)
        self.U = U
        self.dim = len(self.labels)
        self.n_max = cart.n_max
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.shells = np.array([lab.shell for lab in self.labels], dtype=np.int64)
        chains: dict[tuple[int, int], list[int]] = {}
        for i, lab in enumerate(self.labels):
            chains.setdefault((lab.l, lab.m), []).append(i)
        for idxs in chains.values():
            idxs.sort(key=lambda i: self.labels[i].n)
        self.chains = chains
        self.key = _hash_key(
            f"spherical/v1/{cart.key}/" + ",".join(f"{la.n}:{la.l}:{la.m}" for la in self.labels)
        )

    def __repr__(self):
        return f"SphericalBasis(n_max={self.n_max}, dim={self.dim})"


def _admissible_l(shell: int):
    return list(range(shell % 2, shell + 1, 2))


def _nearest_int(x: float):
    k = int(round(x))
    return k, abs(x - k)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    mags = np.abs(vec)
    top = mags.max()
    candidates = np.nonzero(mags >= top - PHASE_TIE_TOL)[0]
    pick = int(candidates.min())
    phase = vec[pick] / mags[pick]
    return vec * np.conj(phase)


def build_spherical(
    basis: Basis3D, params: OscParams, ops: CartesianOperators | None = None
) -> SphericalBasis:
    """Diagonalize (H, L^2, L_z) and assemble the chain-phased label map.

    Raises DegenerateSplitFailure when an eigenvalue fails to sit within
    1e-8 of an admissible integer pattern, or when a finished column fails
    its eigenvector residual check at 1e-10.
    """
    if ops is None:
        ops = cartesian_operators(basis, params)
    l2 = ops.l2.matrix
    lz = ops.l["z"].matrix

    seeds: dict[tuple[int, int], np.ndarray] = {}
    for shell in range(basis.n_max + 1):
        sel = np.nonzero(basis.shells == shell)[0]
        block = l2[np.ix_(sel, sel)].toarray()
        evals, evecs = np.linalg.eigh(block)
        allowed = _admissible_l(shell)
        groups: dict[int, list[np.ndarray]] = {}
        for ev, col in zip(evals, evecs.T):
            best = min(allowed, key=lambda l: abs(ev - l * (l + 1)))
            if abs(ev - best * (best + 1)) > CLUSTER_TOL:
                raise DegenerateSplitFailure(
                    f"shell {shell}: L^2 eigenvalue {ev!r} is not near any l(l+1)"
                )
            groups.setdefault(best, []).append(col)
        for l, cols in groups.items():
            expected = 2 * l + 1
            if len(cols) != expected:
                raise DegenerateSplitFailure(
                    f"shell {shell}: l={l} cluster has size {len(cols)}, expected {expected}"
                )
        # Only l == shell starts a new radial chain; lower l sectors of this
        # shell are reached by the chain construction from earlier shells.
        if shell not in groups:
            raise DegenerateSplitFailure(f"shell {shell}: missing l={shell} sector")
        w = np.column_stack(groups[shell])
        lz_sub = w.conj().T @ lz[np.ix_(sel, sel)].toarray() @ w
        mvals, mvecs = np.linalg.eigh(lz_sub)
        seen = []
        for mv, col in zip(mvals, mvecs.T):
            m, err = _nearest_int(mv)
            if err > CLUSTER_TOL or abs(m) > shell:
                raise DegenerateSplitFailure(
                    f"shell {shell}: L_z eigenvalue {mv!r} is not an admissible integer"
                )
            seen.append(m)
            full = np.zeros(basis.dim, dtype=np.complex128)
            full[sel] = w @ col
            seeds[(shell, m)] = _fix_phase(full)
        if sorted(seen) != list(range(-shell, shell + 1)):
            raise DegenerateSplitFailure(f"shell {shell}: m values {sorted(seen)} incomplete")

    v2dag = ops.v2.adjoint().matrix
    columns: dict[SphericalLabel, np.ndarray] = {}
    for (l, m), vec in seeds.items():
        columns[SphericalLabel(0, l, m)] = vec
        prev = vec
        n = 1
        while 2 * n + l <= basis.n_max:
            raised = v2dag @ prev
            norm = np.linalg.norm(raised)
            if norm <= 0.0:
                raise DegenerateSplitFailure(f"chain (l={l}, m={m}) dies at n={n}")
            prev = raised / norm
            columns[SphericalLabel(n, l, m)] = prev
            n += 1

    labels = sorted(columns, key=lambda lab: (lab.shell, lab.l, lab.m))
    U = np.column_stack([columns[lab] for lab in labels])
    sph = SphericalBasis(basis, labels, U)
    _validate(sph, ops, params)
    return sph


def _validate(sph: SphericalBasis, ops: CartesianOperators, params: OscParams):
    gram = sph.U.conj().T @ sph.U
    ortho = np.abs(gram - np.eye(sph.dim)).max()
    if ortho > 1e-12:
        raise DegenerateSplitFailure(f"column map is not unitary (defect {ortho:.3e})")
    energies = params.omega * (sph.shells + 1.5)
    lsq = np.array([lab.l * (lab.l + 1) for lab in sph.labels], dtype=float)
    mvals = np.array([lab.m for lab in sph.labels], dtype=float)
    for op, want in ((ops.h, energies), (ops.l2, lsq), (ops.l["z"], mvals)):
        resid = np.abs(op.matrix @ sph.U - sph.U * want[None, :]).max()
        if resid > EIGEN_RESIDUAL_TOL:
            raise DegenerateSplitFailure(f"eigenvector residual {resid:.3e} exceeds tolerance")


def to_spherical(op: OperatorMatrix, sph: SphericalBasis) -> OperatorMatrix:
    """Return U† A U as an operator over the spherical labels.

    The column map permutes within shells only, so the validity window and
    displacement bounds carry over unchanged.
    """
    m = sph.U.conj().T @ (op.matrix @ sph.U)
    return OperatorMatrix(m, sph, window=op.window, lo=op.lo, hi=op.hi)


def degeneracy_table(sph: SphericalBasis):
    """One row per shell: (N, E/w, multiplicity, sorted l values)."""
    rows = []
    for shell in range(sph.n_max + 1):
        labs = [lab for lab in sph.labels if lab.shell == shell]
        lvals = sorted({lab.l for lab in labs})
        rows.append((shell, shell + 1.5, len(labs), lvals))
    return rows
