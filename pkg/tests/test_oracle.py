import numpy as np
import pytest

from lrkitaev.lanczos import SeedSpec
from lrkitaev.model import (
    MajoranaGenerator,
    ModelParams,
    build_coupling_matrices,
    build_majorana_generator,
)
from lrkitaev.oracle import (
    build_manybody_hamiltonian,
    build_manybody_majoranas,
    check_commutator_closure,
    hilbert_schmidt,
    induced_hamiltonian,
    linear_sector_residual,
    manybody_lanczos,
    oracle_report,
    seed_matrix,
)

from conftest import random_params


def test_site_cap_enforced():
    with pytest.raises(ValueError):
        build_manybody_majoranas(5)
    with pytest.raises(ValueError):
        build_manybody_majoranas(0)


def test_single_site_majoranas():
    basis = build_manybody_majoranas(1)
    assert len(basis.gammas) == 2
    for gamma in basis.gammas:
        np.testing.assert_allclose(gamma, gamma.conj().T, atol=1e-15)
        np.testing.assert_allclose(gamma @ gamma, np.eye(2) / 2, atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_anticommutation_and_traces(n):
    basis = build_manybody_majoranas(n)
    dim = 2**n
    for mu in range(2 * n):
        assert abs(np.trace(basis.gammas[mu])) <= 1e-13
        for nu in range(2 * n):
            anti = basis.gammas[mu] @ basis.gammas[nu] + basis.gammas[nu] @ basis.gammas[mu]
            target = np.eye(dim) if mu == nu else np.zeros((dim, dim))
            assert np.abs(anti - target).max() <= 1e-13
            expected_trace = 2 ** (n - 1) if mu == nu else 0.0
            assert abs(np.trace(basis.gammas[mu] @ basis.gammas[nu]) - expected_trace) <= 1e-12


def test_two_site_trace_values():
    basis = build_manybody_majoranas(2)
    assert np.trace(basis.gammas[0] @ basis.gammas[2]) == pytest.approx(0.0, abs=1e-14)
    assert np.trace(basis.gammas[0] @ basis.gammas[0]) == pytest.approx(2.0, abs=1e-14)


def test_three_site_gram_matrix():
    # pairwise HS products (with the 2^-N prefactor) form (1/2) * identity
    basis = build_manybody_majoranas(3)
    gram = np.array(
        [
            [hilbert_schmidt(a, b, 3).real for b in basis.gammas]
            for a in basis.gammas
        ]
    )
    np.testing.assert_allclose(gram, np.eye(6) / 2, atol=1e-13)


def test_commutator_closure_random_points(rng):
    for n in (2, 3):
        params = random_params(rng, n)
        basis = build_manybody_majoranas(n)
        hm = build_majorana_generator(build_coupling_matrices(params))
        assert check_commutator_closure(basis, hm) <= 1e-12


def test_commutator_closure_zero_generator():
    params = ModelParams(n=2, alpha=1.0, theta=1.0, epsilon=0.0)
    basis = build_manybody_majoranas(2)
    hm = MajoranaGenerator(params, np.zeros((4, 4)))
    assert check_commutator_closure(basis, hm) == 0.0


def test_induced_hamiltonian_matches_explicit_up_to_constant(rng):
    # (i/2) sum H_M gamma gamma reproduces the fermionic definition up to the
    # dropped Tr(K)/2 shift
    params = random_params(rng, 3)
    basis = build_manybody_majoranas(3)
    couplings = build_coupling_matrices(params)
    hm = build_majorana_generator(couplings)
    explicit = build_manybody_hamiltonian(params)
    induced = induced_hamiltonian(basis, hm)
    shift = np.trace(couplings.hopping) / 2.0
    np.testing.assert_allclose(
        explicit, induced + shift * np.eye(8), atol=1e-12
    )


def test_manybody_lanczos_diagonal_vanishes(rng):
    params = random_params(rng, 3)
    basis = build_manybody_majoranas(3)
    h = build_manybody_hamiltonian(params)
    seed = SeedSpec.from_string("gamma1+gamma2", 3)
    a, b, _ = manybody_lanczos(basis, h, seed, depth=10)
    assert np.abs(a).max() <= 1e-12
    assert len(b) + 1 <= 6  # Krylov dimension never exceeds 2N


def test_prefactor_invariance(rng):
    params = random_params(rng, 3)
    basis = build_manybody_majoranas(3)
    h = build_manybody_hamiltonian(params)
    seed = SeedSpec.from_string("gamma1", 3)
    _, b_with, _ = manybody_lanczos(basis, h, seed, depth=10, prefactor=True)
    _, b_without, _ = manybody_lanczos(basis, h, seed, depth=10, prefactor=False)
    assert len(b_with) == len(b_without)
    np.testing.assert_allclose(b_with, b_without, atol=1e-12)


def test_krylov_operators_stay_in_linear_sector(rng):
    params = random_params(rng, 3)
    basis = build_manybody_majoranas(3)
    h = build_manybody_hamiltonian(params)
    seed = SeedSpec.from_string("gamma1", 3)
    _, _, operators = manybody_lanczos(basis, h, seed, depth=10)
    for op in operators:
        assert linear_sector_residual(basis, op) <= 1e-10


def test_seed_matrix_normalization():
    basis = build_manybody_majoranas(2)
    op = seed_matrix(basis, SeedSpec.from_string("gamma1", 2))
    # ||gamma_1||_HS^2 = 2^-N Tr(gamma^2) = 1/2
    assert hilbert_schmidt(op, op, 2).real == pytest.approx(0.5, abs=1e-14)


def test_oracle_report_clean_point():
    params = ModelParams(n=3, alpha=1.0, theta=np.pi / 3, epsilon=-0.2)
    report = oracle_report(params, SeedSpec.from_string("gamma1", 3))
    assert report["closure_residual"] <= 1e-12
    assert report["trace_residual"] <= 1e-12
    assert report["manybody_a_max"] <= 1e-12
    assert report["b_deviation_majorana"] <= 1e-10
    assert report["b_deviation_nambu"] <= 1e-10
    assert report["manybody_krylov_dimension"] <= report["krylov_dimension_bound"]
