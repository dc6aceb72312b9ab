import numpy as np
import pytest

from oscphase import (
    build_basis,
    export_spherical,
    load_operator,
    save_operator,
)


def test_round_trip(tmp_path, basis6, ops6):
    path = tmp_path / "v2.op"
    save_operator(path, ops6.v2)
    back = load_operator(path, basis6)
    assert np.abs((back.matrix - ops6.v2.matrix)).max() < 1e-16
    assert back.window == ops6.v2.window
    assert (back.lo, back.hi) == (ops6.v2.lo, ops6.v2.hi)


def test_basis_mismatch_rejected(tmp_path, ops6):
    path = tmp_path / "h.op"
    save_operator(path, ops6.h)
    with pytest.raises(ValueError):
        load_operator(path, build_basis(3))


def test_magic_line_checked(tmp_path, basis6):
    path = tmp_path / "junk.op"
    path.write_text("not an operator file\n")
    with pytest.raises(ValueError):
        load_operator(path, basis6)


def test_save_is_deterministic(tmp_path, ops6):
    a = tmp_path / "a.op"
    b = tmp_path / "b.op"
    save_operator(a, ops6.l2)
    save_operator(b, ops6.l2)
    assert a.read_bytes() == b.read_bytes()


def test_export_spherical(tmp_path, sph6):
    path = tmp_path / "basis.txt"
    export_spherical(path, sph6)
    lines = path.read_text().splitlines()
    label_lines = [ln for ln in lines if ln.startswith("label ")]
    assert len(label_lines) == sph6.dim
    assert label_lines[0] == "label 0 0 0 0"
