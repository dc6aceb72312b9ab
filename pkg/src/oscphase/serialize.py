"""Plain-text sparse triplet serialization for debugging.

Operator format (one record per stored entry, CSR order):

    # oscphase operator v1
    # basis=<key> dim=<d> window=<w> lo=<lo> hi=<hi> nnz=<k>
    <row> <col> <re> <im>

Floats are written with 17 significant digits, so writing is
deterministic and the round trip is exact. The basis key in the header
must match the basis the operator is loaded onto.

The spherical export uses the same triplet lines for the column map U,
preceded by one `label <pos> <n> <l> <m>` line per basis state.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .fock import OperatorMatrix


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def save_operator(path, op: OperatorMatrix) -> None:
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("# oscphase operator v1\n")
        fh.write(
            f"# basis={op.basis.key} dim={op.basis.dim} window={op.window} "
            f"lo={op.lo} hi={op.hi} nnz={coo.nnz}\n"
        )
        for k in order:
            v = coo.data[k]
            fh.write(f"{coo.row[k]} {coo.col[k]} {_fmt(v.real)} {_fmt(v.imag)}\n")


def load_operator(path, basis) -> OperatorMatrix:
    with open(path, "r", encoding="ascii") as fh:
        magic = fh.readline().strip()
        if magic != "# oscphase operator v1":
            raise ValueError(f"unrecognized header {magic!r}")
        meta = dict(
            item.split("=", 1) for item in fh.readline().strip().lstrip("# ").split()
        )
        if meta["basis"] != basis.key:
            raise ValueError(
                f"operator was saved for basis {meta['basis']}, not {basis.key}"
            )
        if int(meta["dim"]) != basis.dim:
            raise ValueError("dimension mismatch")
        rows, cols, vals = [], [], []
        for line in fh:
            r, c, re, im = line.split()
            rows.append(int(r))
            cols.append(int(c))
            vals.append(complex(float(re), float(im)))
    m = sparse.coo_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim))
    return OperatorMatrix(m, basis, int(meta["window"]), int(meta["lo"]), int(meta["hi"]))


def export_spherical(path, sph) -> None:
    """Write the label table and the column map U of a spherical basis."""
    u = sparse.coo_matrix(sph.U)
    order = np.lexsort((u.col, u.row))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("# oscphase spherical basis v1\n")
        fh.write(f"# cart={sph.cart.key} key={sph.key} dim={sph.dim} n_max={sph.n_max}\n")
        for i, lab in enumerate(sph.labels):
            fh.write(f"label {i} {lab.n} {lab.l} {lab.m}\n")
        for k in order:
            v = u.data[k]
            fh.write(f"{u.row[k]} {u.col[k]} {_fmt(v.real)} {_fmt(v.imag)}\n")
