import math

import numpy as np
import pytest

from conftest import W4
from spinstar.linalg import hermitian_eig, matrix_exp_series
from spinstar.model import (
    StarModel,
    basis_index,
    basis_label,
    build_full_hamiltonian,
    build_sector_hamiltonian,
    embed_one_particle,
    excitation,
    load_model_config,
    model_from_config,
    project_one_particle,
)
from spinstar.settings import ContractError, SizeError


def pauli_hamiltonian(m):
    """Reference built from explicit Kronecker products of spin matrices."""
    s = [np.array([[0, 1], [1, 0]]) / 2, np.array([[0, -1j], [1j, 0]]) / 2, np.diag([0.5, -0.5])]
    n = m.n_sites

    def site_op(op, k):
        out = np.eye(1)
        for q in range(n):
            out = np.kron(out, op if q == k else np.eye(2))
        return out

    return m.coupling * sum(site_op(a, 0) @ site_op(a, k) for k in range(1, n) for a in s)


@pytest.mark.parametrize("L,J", [(1, 1.0), (2, 0.7), (3, 1.0), (4, -1.3)])
def test_full_hamiltonian_matches_kron_reference(L, J):
    m = StarModel(L, J)
    np.testing.assert_allclose(build_full_hamiltonian(m), pauli_hamiltonian(m), atol=1e-15)


def test_two_qubit_spectrum():
    w = hermitian_eig(build_full_hamiltonian(StarModel(1))).eigenvalues
    np.testing.assert_allclose(w, [-0.75, 0.25, 0.25, 0.25], atol=1e-14)


def test_all_down_is_eigenstate(star3):
    h = build_full_hamiltonian(star3)
    psi = np.zeros(16)
    psi[0] = 1
    np.testing.assert_allclose(h @ psi, 0.75 * psi, atol=1e-15)


@pytest.mark.parametrize("L", [1, 2, 3, 5, 8])
def test_ground_manifold(L):
    m = StarModel(L, 1.7)
    h = build_full_hamiltonian(m)
    assert abs(h[0, 0] - L * 1.7 / 4) < 1e-12
    assert np.count_nonzero(h[:, 0]) == 1


def test_total_sz_commutes(star3):
    h = build_full_hamiltonian(star3)
    idx = np.arange(16)
    sz = np.diag([bin(k).count("1") - 2 for k in idx])
    assert np.max(np.abs(h @ sz - sz @ h)) < 1e-12


def test_full_hamiltonian_real_and_symmetric(star3):
    h = build_full_hamiltonian(star3)
    assert h.dtype == float
    np.testing.assert_array_equal(h, h.T)


def test_sector_hamiltonian_l3():
    expected = [[-0.75, 0.5, 0.5, 0.5], [0.5, 0.25, 0, 0], [0.5, 0, 0.25, 0], [0.5, 0, 0, 0.25]]
    np.testing.assert_array_equal(build_sector_hamiltonian(StarModel(3)), expected)


def test_sector_hamiltonian_l1():
    h = build_sector_hamiltonian(StarModel(1))
    np.testing.assert_array_equal(h, [[-0.25, 0.5], [0.5, -0.25]])
    np.testing.assert_allclose(hermitian_eig(h).eigenvalues, [-0.75, 0.25], atol=1e-15)


def test_sector_spectrum_l3():
    w = np.linalg.eigvalsh(build_sector_hamiltonian(StarModel(3)))
    np.testing.assert_allclose(w, [-1.25, 0.25, 0.25, 0.75], atol=1e-14)


@pytest.mark.parametrize("L", [1, 2, 3, 5, 8])
def test_sector_is_restriction_of_full(L):
    m = StarModel(L, 0.9)
    full = build_full_hamiltonian(m)
    idx = [1 << (L - s) for s in range(L + 1)]
    np.testing.assert_allclose(full[np.ix_(idx, idx)], build_sector_hamiltonian(m), atol=1e-15)


@pytest.mark.parametrize("L", [2, 3, 5, 8])
def test_sector_permutation_symmetry(L):
    h = build_sector_hamiltonian(StarModel(L))
    rng = np.random.default_rng(L)
    for _ in range(5):
        perm = np.r_[0, 1 + rng.permutation(L)]
        assert np.array_equal(h[np.ix_(perm, perm)], h)


@pytest.mark.parametrize("L", [1, 2, 3, 5, 8])
def test_full_evolution_stays_in_sector(L):
    m = StarModel(L)
    h = build_full_hamiltonian(m)
    rng = np.random.default_rng(L)
    b0 = rng.normal(size=L + 1) + 1j * rng.normal(size=L + 1)
    b0 /= np.linalg.norm(b0)
    hs = build_sector_hamiltonian(m)
    for t in rng.uniform(0, 4 * math.pi, 2):
        psi = matrix_exp_series(h, -1j * t) @ embed_one_particle(b0, m)
        b, leak = project_one_particle(psi, m)
        assert leak < 1e-12
        np.testing.assert_allclose(b, matrix_exp_series(hs, -1j * t) @ b0, atol=1e-10)


def test_embed_cops_and_lops(star3):
    assert np.flatnonzero(embed_one_particle(excitation(star3, 0), star3)) == [basis_index("1000")]
    assert np.flatnonzero(embed_one_particle(excitation(star3, 3), star3)) == [basis_index("0001")]


def test_embed_w_state(star3):
    psi = embed_one_particle(W4, star3)
    assert psi[basis_index("1000")] == 0.5
    for label in ("0100", "0010", "0001"):
        assert psi[basis_index(label)] == -0.5


def test_embed_rejects_unnormalized(star3):
    with pytest.raises(ContractError):
        embed_one_particle([1, 1, 0, 0], star3)


def test_basis_label_roundtrip():
    for k in range(16):
        assert basis_index(basis_label(k, 4)) == k
    assert basis_index((1, 0, 0, 0)) == 8


@pytest.mark.parametrize("kwargs", [dict(ligand_count=0), dict(coupling=0.0),
                                    dict(coupling=float("nan")), dict(ligand_count=2.5)])
def test_model_invariants(kwargs):
    with pytest.raises(ContractError):
        StarModel(**kwargs)


def test_size_cap(monkeypatch):
    monkeypatch.setenv("SPINSTAR_MAX_QUBITS", "4")
    build_full_hamiltonian(StarModel(3))
    with pytest.raises(SizeError):
        build_full_hamiltonian(StarModel(4))


def test_config_file(tmp_path):
    path = tmp_path / "star.cfg"
    path.write_text("# three-ligand star\nligand_count = 5\ncoupling=2.5  # J\n")
    m = model_from_config(load_model_config(path))
    assert m == StarModel(5, 2.5)


def test_config_file_bad_line(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("ligand_count 5\n")
    with pytest.raises(ContractError):
        load_model_config(path)
