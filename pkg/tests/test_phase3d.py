import numpy as np
import pytest
from scipy.linalg import expm

from oscphase import (
    DegenerateSplitFailure,
    OperatorMatrix,
    OscParams,
    SingularNormalization,
    SphericalLabel,
    build_basis,
    build_phase_operators,
    build_spherical,
    cartesian_operators,
    doubled_identity,
    dyadic_phase_exponential,
    inverse_shift_residuals,
    normalization_bracket,
    op_norm_1,
    radial_shift_pair,
    reconstruction_residuals,
)


def test_normalization_bracket_matches_label_formula(sph6, params, ops6):
    # independent oracle: eigenvalue w^2 (2n+2)(2n+2l+3) from the labels
    diag = normalization_bracket(sph6, params, ops6)
    w = params.omega
    expect = np.array(
        [w**2 * (2 * lab.n + 2) * (2 * lab.n + 2 * lab.l + 3) for lab in sph6.labels],
        dtype=float,
    )
    assert np.abs(diag - expect).max() < 1e-10 * expect.max()


def test_normalization_bracket_guards(basis6, params, ops6, sph6):
    bad = cartesian_operators(basis6, params)
    eye = np.eye(basis6.dim)
    # pushing L^2 up makes the bracket nonpositive on the ground state
    bad.l2 = OperatorMatrix(bad.l2.matrix + 100.0 * eye, basis6, bad.l2.window, 0, 0)
    with pytest.raises(SingularNormalization):
        normalization_bracket(sph6, params, bad)
    # a non-shell-preserving perturbation breaks diagonality instead
    bad = cartesian_operators(basis6, params)
    bad.l2 = bad.l2 + 1e-3 * bad.a["x"]
    with pytest.raises(DegenerateSplitFailure):
        normalization_bracket(sph6, params, bad)


def test_radial_shift_unit_coefficient(sph6, params, ops6):
    down, up = radial_shift_pair(sph6, params, ops6)
    dense = down.toarray()
    for (l, m), idxs in sph6.chains.items():
        assert np.abs(dense[:, idxs[0]]).max() < 1e-14  # chain bottom dies
        for n in range(1, len(idxs)):
            col = dense[:, idxs[n]].copy()
            assert abs(col[idxs[n - 1]] - 1.0) < 1e-13
            col[idxs[n - 1]] = 0.0
            assert np.abs(col).max() == 0.0  # exact zeros off the chain


def test_phase_exponential_matches_dyadic(pset6_open, pset6_cyclic):
    for pset in (pset6_open, pset6_cyclic):
        dy = dyadic_phase_exponential(pset)
        assert np.abs((pset.exp_plus.matrix - dy).toarray()).max() < 1e-13


def test_phase_exponential_chain_action(pset6_open):
    d = pset6_open.doubled
    e2 = pset6_open.exp_plus.toarray()
    lab = SphericalLabel(1, 1, 0)
    below = SphericalLabel(0, 1, 0)
    col = e2[:, d.index(lab, +1)]
    assert abs(col[d.index(below, +1)] - 1.0) < 1e-13
    # vacuum link: |0,l,m,+> crosses to |0,l,m,->
    col = e2[:, d.index(below, +1)]
    assert abs(col[d.index(below, -1)] - 1.0) < 1e-13
    # minus copy walks upward
    col = e2[:, d.index(below, -1)]
    assert abs(col[d.index(lab, -1)] - 1.0) < 1e-13


def test_open_defect_sits_on_chain_ends(pset6_open):
    pset = pset6_open
    ident = doubled_identity(pset.doubled)
    defect = (pset.exp_minus @ pset.exp_plus - ident).toarray()
    ends = pset.chain_end_projector(-1).toarray()
    assert np.abs(defect + ends).max() < 1e-13
    defect = (pset.exp_plus @ pset.exp_minus - ident).toarray()
    ends = pset.chain_end_projector(+1).toarray()
    assert np.abs(defect + ends).max() < 1e-13


def test_cyclic_exponential_is_unitary_permutation(pset6_cyclic):
    pset = pset6_cyclic
    ident = doubled_identity(pset.doubled)
    assert op_norm_1(pset.exp_minus @ pset.exp_plus - ident) < 1e-13
    assert op_norm_1(pset.exp_plus @ pset.exp_minus - ident) < 1e-13
    dense = np.abs(pset.exp_plus.toarray())
    assert np.abs(np.minimum(dense, np.abs(dense - 1.0))).max() < 1e-13


def test_inverse_formulae(pset6_open, pset6_cyclic):
    for pset in (pset6_open, pset6_cyclic):
        res = inverse_shift_residuals(pset)
        assert res["down"] < 1e-12
        assert res["up"] < 1e-12


def test_cos_vacuum_link_is_half(pset6_open):
    d = pset6_open.doubled
    cos = pset6_open.cos2.toarray()
    lab = SphericalLabel(0, 2, -1)
    assert abs(cos[d.index(lab, +1), d.index(lab, -1)] - 0.5) < 1e-14


def test_reconstruction_residuals_small(pset6_open, ops6):
    res = reconstruction_residuals(pset6_open, ops6)
    assert res["lowering"] < 1e-10
    assert res["raising"] < 1e-10
    assert res["raising_sign_left_no_vacuum"] < 1e-10


def test_reconstruction_element_frozen(pset6_open, sph6, params, ops6):
    # the reconstructed operator reproduces <1,0,0|V2|2,0,0> = 2Mw sqrt(20)
    pset = pset6_open
    d = pset.doubled
    rhs = 2.0 * params.mass * (
        d.embed(pset.sqrt_norm) @ (pset.cos2 + 1j * (pset.sign @ pset.sin2))
    )
    dense = rhs.toarray()
    i = d.index(SphericalLabel(1, 0, 0), +1)
    j = d.index(SphericalLabel(2, 0, 0), +1)
    want = 2.0 * params.mass * params.omega * np.sqrt(20.0)
    assert abs(dense[i, j] - want) < 1e-10 * want
    # and annihilates the vacuum column on the plus copy
    col = dense[:, d.index(SphericalLabel(0, 0, 0), +1)]
    assert np.abs(col).max() < 1e-10


def test_sign_left_variant_fails_on_vacuum_link(pset6_open, ops6):
    """The raising line with the sign operator left of the sine picks up a
    spurious cross-branch term on the vacuum columns; excluding them it
    matches. This pins down why the adjoint-consistent order is used."""
    pset = pset6_open
    d = pset.doubled
    two_m = 2.0 * pset.params.mass
    from oscphase.spherical import to_spherical

    v2d_adj = d.embed(to_spherical(ops6.v2, pset.spherical)).adjoint()
    literal = (pset.cos2 - 1j * (pset.sign @ pset.sin2)) @ (
        two_m * d.embed(pset.sqrt_norm)
    )
    diff = (v2d_adj - literal) @ pset.interior_projector()
    vac_cols = [d.index(lab, lam) for lab in pset.spherical.labels if lab.n == 0 for lam in (+1, -1)]
    dense = diff.toarray()
    assert np.abs(dense[:, vac_cols]).max() > 1.0  # genuinely wrong there
    dense[:, vac_cols] = 0.0
    assert np.abs(dense).max() < 1e-10  # correct elsewhere


def test_superselection_norm_exactly_two(pset6_open, pset6_cyclic):
    from oscphase import commutator

    for pset in (pset6_open, pset6_cyclic):
        assert abs(op_norm_1(commutator(pset.sign, pset.exp_plus)) - 2.0) < 1e-14
        assert op_norm_1(commutator(pset.sign, pset.down)) == 0.0


def test_hermitian_phase_round_trip():
    params = OscParams()
    basis = build_basis(4)
    ops = cartesian_operators(basis, params)
    sph = build_spherical(basis, params, ops)
    pset = build_phase_operators(sph, params, "cyclic", ops)
    phase = pset.hermitian_phase()
    assert np.abs(phase - phase.conj().T).max() < 1e-12
    rebuilt = expm(2j * phase)
    assert np.abs(rebuilt - pset.exp_plus.toarray()).max() < 1e-10
    t_op = pset.time_operator()
    assert np.abs(t_op + phase / params.omega).max() == 0.0


def test_hermitian_phase_requires_cyclic(pset6_open):
    with pytest.raises(ValueError):
        pset6_open.hermitian_phase()


def test_smallest_space_open_mode():
    # n_max = 0: one chain of depth one; E is exactly the vacuum link
    params = OscParams()
    basis = build_basis(0)
    sph = build_spherical(basis, params)
    pset = build_phase_operators(sph, params, "open")
    e2 = pset.exp_plus.toarray()
    expect = np.array([[0.0, 0.0], [1.0, 0.0]])
    assert np.abs(e2 - expect).max() == 0.0
    assert pset.down_single.nnz == 0
    cyc = build_phase_operators(sph, params, "cyclic")
    dense = cyc.exp_plus.toarray()
    assert np.abs(dense - np.array([[0.0, 1.0], [1.0, 0.0]])).max() == 0.0


def test_mode_validation(sph6, params):
    with pytest.raises(ValueError):
        build_phase_operators(sph6, params, "sideways")
