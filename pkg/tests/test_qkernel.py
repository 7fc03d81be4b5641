"""State container, steering, dephasing, Kraus maps and state IO."""

import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from steercoh import (
    DensityMatrix,
    InvalidStateError,
    KrausMap,
    ProjectiveBasis,
    apply_kraus,
    bell_state,
    dephase,
    eig_hermitian,
    entropy_of_probs,
    load_state,
    maximally_mixed,
    partial_trace,
    product_basis,
    regroup_dims,
    save_state,
    state_from_dict,
    state_to_dict,
    steer,
    tensor_product,
    von_neumann_entropy,
)
from steercoh.qkernel import atomic_write_text
from steercoh.sampling import haar_unitary, random_hs_state, random_pure

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


def test_density_matrix_rejects_non_hermitian():
    m = np.array([[0.5, 0.3], [0.1, 0.5]], dtype=complex)
    with pytest.raises(InvalidStateError):
        DensityMatrix(m, (2,))


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.eye(2), (2,))


def test_density_matrix_rejects_negative_eigenvalue():
    m = np.diag([1.2, -0.2]).astype(complex)
    with pytest.raises(InvalidStateError):
        DensityMatrix(m, (2,))


def test_density_matrix_rejects_dims_mismatch():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4) / 4.0, (2, 3))
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4) / 4.0, (2, 0))
    with pytest.raises(ValueError):
        DensityMatrix(np.ones((2, 3)) / 6.0, (2,))


def test_density_matrix_data_read_only():
    rho = maximally_mixed((2,))
    with pytest.raises(ValueError):
        rho.data[0, 0] = 0.9


def test_density_matrix_tolerance_is_respected():
    m = np.diag([0.5 + 2e-7, 0.5 - 2e-7]).astype(complex) * (1.0 + 1e-7)
    with pytest.raises(InvalidStateError):
        DensityMatrix(m, (2,), tol=1e-9)
    DensityMatrix(m, (2,), tol=1e-5)


def test_from_pure_normalizes():
    rho = DensityMatrix.from_pure([2.0, 0.0, 0.0, 2.0], (2, 2))
    assert np.isclose(rho.data.trace().real, 1.0)
    assert np.isclose((rho.data @ rho.data).trace().real, 1.0)
    assert rho.dims == (2, 2)


def test_close_to():
    a = maximally_mixed((2,))
    b = DensityMatrix(np.diag([0.5 + 5e-10, 0.5 - 5e-10]).astype(complex), (2,))
    assert a.close_to(b)
    assert not a.close_to(b, atol=1e-11)
    assert not a.close_to(maximally_mixed((2, 1)))


def test_maximally_mixed_entropy():
    rho = maximally_mixed((2, 3))
    assert rho.dims == (2, 3)
    assert np.isclose(von_neumann_entropy(rho), np.log2(6.0))


def test_projective_basis_rejects_non_orthonormal():
    with pytest.raises(InvalidStateError):
        ProjectiveBasis(np.array([[1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(InvalidStateError):
        ProjectiveBasis(np.array([[0.5, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        ProjectiveBasis(np.ones((2, 3)))


def test_projective_basis_matrix_has_kets_as_columns():
    basis = ProjectiveBasis(HADAMARD)
    assert basis.dim == 2
    assert_allclose(basis.matrix[:, 0], basis.vectors[0])
    assert_allclose(basis.projector(1), np.outer(HADAMARD[1], HADAMARD[1].conj()))


def test_projective_basis_from_columns_round_trip():
    rng = np.random.default_rng(7)
    u = haar_unitary(3, rng)
    basis = ProjectiveBasis.from_columns(u)
    assert_allclose(basis.matrix, u, atol=1e-12)


def test_product_basis_row_major_order():
    e2 = ProjectiveBasis.computational(2)
    e3 = ProjectiveBasis.computational(3)
    joint = product_basis(e2, e3)
    assert joint.dim == 6
    for i in range(2):
        for j in range(3):
            expect = np.kron(e2.vectors[i], e3.vectors[j])
            assert_allclose(joint.vectors[i * 3 + j], expect, atol=1e-12)


def test_partial_trace_of_product_state():
    rng = np.random.default_rng(0)
    a = random_hs_state((2,), rng)
    b = random_hs_state((3,), rng)
    joint = tensor_product(a, b)
    assert_allclose(partial_trace(joint, [0]).data, a.data, atol=1e-12)
    assert_allclose(partial_trace(joint, [1]).data, b.data, atol=1e-12)


def test_partial_trace_of_bell_state_is_maximally_mixed():
    bell = bell_state()
    for side in (0, 1):
        red = partial_trace(bell, side)
        assert_allclose(red.data, np.eye(2) / 2.0, atol=1e-12)


def test_partial_trace_tripartite_keep_pair():
    rng = np.random.default_rng(1)
    a = random_hs_state((2,), rng)
    b = random_hs_state((3,), rng)
    c = random_hs_state((2,), rng)
    joint = tensor_product(tensor_product(a, b), c)
    kept = partial_trace(joint, [0, 2])
    assert kept.dims == (2, 2)
    assert_allclose(kept.data, np.kron(a.data, c.data), atol=1e-12)


def test_partial_trace_rejects_bad_subsystems():
    bell = bell_state()
    with pytest.raises(ValueError):
        partial_trace(bell, [2])
    with pytest.raises(ValueError):
        partial_trace(bell, [])


def test_regroup_dims():
    bell = bell_state()
    flat = regroup_dims(bell, (4,))
    assert flat.dims == (4,)
    assert_allclose(flat.data, bell.data)
    with pytest.raises(ValueError):
        regroup_dims(bell, (2, 3))


def test_tensor_product_dims_concatenate():
    joint = tensor_product(maximally_mixed((2,)), maximally_mixed((3, 2)))
    assert joint.dims == (2, 3, 2)
    assert joint.side == 12


def test_eig_hermitian_ascending_and_validated():
    rng = np.random.default_rng(3)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = (g + g.conj().T) / 2.0
    w, v = eig_hermitian(h)
    assert np.all(np.diff(w) >= 0)
    assert_allclose((v * w) @ v.conj().T, h, atol=1e-10)
    with pytest.raises(ValueError):
        eig_hermitian(g)


def test_entropy_frozen_values():
    assert np.isclose(entropy_of_probs([0.1, 0.9]), 0.4689955935892812, atol=1e-12)
    assert np.isclose(entropy_of_probs([0.5, 0.5]), 1.0, atol=1e-12)
    assert entropy_of_probs([1.0, 0.0]) == 0.0
    assert np.isclose(von_neumann_entropy(bell_state()), 0.0, atol=1e-9)
    assert np.isclose(von_neumann_entropy(maximally_mixed((2,))), 1.0, atol=1e-12)


def test_steer_bell_in_computational_basis():
    ens = steer(bell_state(), ProjectiveBasis.computational(2))
    assert len(ens) == 2
    probs = [out.probability for out in ens]
    assert_allclose(probs, [0.5, 0.5], atol=1e-12)
    assert_allclose(ens.outcomes[0].state.data, np.diag([1.0, 0.0]), atol=1e-12)
    assert_allclose(ens.outcomes[1].state.data, np.diag([0.0, 1.0]), atol=1e-12)


def test_steer_bell_in_hadamard_basis_gives_coherent_conditionals():
    ens = steer(bell_state(), ProjectiveBasis(HADAMARD))
    for out in ens:
        assert np.isclose(out.probability, 0.5, atol=1e-12)
        assert np.isclose(abs(out.state.data[0, 1]), 0.5, atol=1e-12)


def test_steer_average_recovers_marginal():
    rng = np.random.default_rng(5)
    rho = random_hs_state((2, 3), rng)
    basis = ProjectiveBasis.from_columns(haar_unitary(2, rng))
    ens = steer(rho, basis)
    assert np.isclose(sum(out.probability for out in ens), 1.0, atol=1e-12)
    assert ens.average_state().close_to(partial_trace(rho, [1]), atol=1e-10)


def test_steer_flags_negligible_outcomes():
    rho = tensor_product(
        DensityMatrix.from_pure([1.0, 0.0], (2,)), maximally_mixed((2,))
    )
    ens = steer(rho, ProjectiveBasis.computational(2))
    assert not ens.outcomes[0].negligible
    assert ens.outcomes[1].negligible
    assert ens.outcomes[1].probability == 0.0


def test_steer_rejects_bad_shapes():
    with pytest.raises(ValueError):
        steer(maximally_mixed((2, 2, 2)), ProjectiveBasis.computational(2))
    with pytest.raises(ValueError):
        steer(bell_state(), ProjectiveBasis.computational(3))


def test_dephase_kills_off_diagonal():
    plus = DensityMatrix.from_pure([1.0, 1.0], (2,))
    out = dephase(plus, ProjectiveBasis.computational(2))
    assert_allclose(out.data, np.eye(2) / 2.0, atol=1e-12)


def test_dephase_fixed_point_in_its_own_basis():
    plus = DensityMatrix.from_pure([1.0, 1.0], (2,))
    out = dephase(plus, ProjectiveBasis(HADAMARD))
    assert out.close_to(plus, atol=1e-12)


def test_dephase_target_selects_subsystem():
    bell = bell_state()
    out = dephase(bell, ProjectiveBasis.computational(2), target=1)
    expect = np.zeros((4, 4), dtype=complex)
    expect[0, 0] = expect[3, 3] = 0.5
    assert_allclose(out.data, expect, atol=1e-12)
    assert np.isclose(von_neumann_entropy(out), 1.0, atol=1e-12)
    with pytest.raises(ValueError):
        dephase(bell, ProjectiveBasis.computational(2), target=2)


def test_dephase_idempotent():
    rng = np.random.default_rng(11)
    rho = random_hs_state((2, 2), rng)
    basis = ProjectiveBasis.from_columns(haar_unitary(2, rng))
    once = dephase(rho, basis, target=1)
    twice = dephase(once, basis, target=1)
    assert once.close_to(twice, atol=1e-12)


def test_kraus_map_requires_trace_preservation():
    with pytest.raises(InvalidStateError):
        KrausMap((np.diag([1.0, 0.5]),), target=0)
    with pytest.raises(ValueError):
        KrausMap((), target=0)
    with pytest.raises(ValueError):
        KrausMap((np.eye(2), np.eye(3)), target=0)


def test_apply_kraus_unitary_on_chosen_subsystem():
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    rho = DensityMatrix.from_pure([1.0, 0.0, 0.0, 0.0], (2, 2))
    out = apply_kraus(rho, KrausMap((x,), target=1))
    expect = DensityMatrix.from_pure([0.0, 1.0, 0.0, 0.0], (2, 2))
    assert out.close_to(expect, atol=1e-12)


def test_apply_kraus_depolarizing_reaches_maximally_mixed():
    paulis = [
        np.eye(2, dtype=complex),
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]
    kmap = KrausMap(tuple(p / 2.0 for p in paulis), target=0)
    rng = np.random.default_rng(13)
    out = apply_kraus(random_hs_state((2,), rng), kmap)
    assert_allclose(out.data, np.eye(2) / 2.0, atol=1e-12)


def test_apply_kraus_selective_outcomes_sum_to_channel_output():
    rng = np.random.default_rng(17)
    rho = random_hs_state((2, 2), rng)
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    kmap = KrausMap((p0, p1), target=1)
    summed = apply_kraus(rho, kmap)
    parts = apply_kraus(rho, kmap, selective=True)
    acc = np.zeros((4, 4), dtype=complex)
    for out in parts:
        if not out.negligible:
            acc += out.probability * out.state.data
    assert_allclose(acc, summed.data, atol=1e-12)
    assert np.isclose(sum(out.probability for out in parts), 1.0, atol=1e-12)


def test_atomic_write_text(tmp_path):
    path = tmp_path / "note.txt"
    atomic_write_text(str(path), "alpha")
    atomic_write_text(str(path), "beta")
    assert path.read_text() == "beta"


def test_state_io_round_trip(tmp_path):
    rng = np.random.default_rng(19)
    rho = random_hs_state((2, 3), rng)
    path = tmp_path / "state.json"
    save_state(rho, str(path))
    back = load_state(str(path))
    assert back.dims == (2, 3)
    assert_allclose(back.data, rho.data, atol=1e-12)


def test_state_dict_round_trip_and_malformed_payloads():
    rho = bell_state()
    d = state_to_dict(rho)
    back = state_from_dict(json.loads(json.dumps(d)))
    assert back.close_to(rho, atol=1e-12)
    with pytest.raises(ValueError):
        state_from_dict({})
    with pytest.raises(ValueError):
        state_from_dict({"dims": [2], "re": [[1.0, 0.0]], "im": [[0.0]]})
    with pytest.raises(ValueError):
        state_from_dict([1, 2, 3])


def test_load_state_error_modes(tmp_path):
    with pytest.raises(OSError):
        load_state(str(tmp_path / "absent.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(json.JSONDecodeError):
        load_state(str(bad))


def test_random_pure_has_unit_purity():
    rng = np.random.default_rng(23)
    for _ in range(5):
        rho = random_pure((2, 2), rng)
        assert np.isclose((rho.data @ rho.data).trace().real, 1.0, atol=1e-10)
