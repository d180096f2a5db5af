import numpy as np
import pytest

from krongambler import (
    BirthDeathSpec,
    DegenerateSpectrumError,
    ErgodicBDSpec,
    GameSpec,
    MonotonicityError,
    SpecError,
    bd_eigenvalues,
    bd_win_prob,
    build_dual,
    build_game,
    classical_ssd_1d,
    dual_initial,
    preset_r_of_d,
    spectral_link_1d,
)
from krongambler.birth_death import bd_restricted, ergodic_matrix
from krongambler.intertwine import (
    ehrenfest_binomial_link,
    ehrenfest_binomial_link_inv,
    ehrenfest_closed_forms,
    ehrenfest_dual_weights_link_route,
    ehrenfest_ergodic,
    pure_birth_1d,
    spectral_polynomials,
    support_dominates,
)
from krongambler.verify import diagonal_eigenvalue_check

from conftest import rand_bd, rand_ergodic, rand_game


def one_dim_game(spec):
    return GameSpec(dims=(spec,), subsets=(frozenset({1}),), coeffs=(1.0,))


def golden_spec(p=0.3, q=0.1):
    return BirthDeathSpec(N=3, p=(p, p), q=(q, q))


def test_link_two_state_no_ruin_is_identity():
    spec = BirthDeathSpec(N=2, p=(0.4,), q=(0.0,))
    assert np.allclose(spectral_link_1d(spec), np.eye(2), atol=1e-14)


def test_link_golden_closed_form():
    p, q = 0.3, 0.1
    s = p + q + np.sqrt(p * q)
    rho1 = (1 - q / p) / (1 - (q / p) ** 3)
    expected = np.array(
        [
            [1.0, 0.0, 0.0],
            [np.sqrt(p * q) / s, p / s, 0.0],
            [0.0, 0.0, rho1],
        ]
    )
    assert np.max(np.abs(spectral_link_1d(golden_spec()) - expected)) < 1e-13


def test_link_stochastic_when_ruin_unreachable():
    rng = np.random.default_rng(30)
    for _ in range(20):
        spec = rand_bd(rng, int(rng.integers(2, 7)), q1_zero=True, budget=0.4)
        link = spectral_link_1d(spec)
        assert np.max(np.abs(link.sum(axis=1) - 1.0)) < 1e-10
        assert abs(link[-1, -1] - 1.0) < 1e-10


def test_link_rejects_negative_spectrum():
    spec = BirthDeathSpec(N=3, p=(0.6873, 0.5498), q=(0.2926, 0.0926))
    with pytest.raises(MonotonicityError):
        spectral_link_1d(spec)


def test_link_rejects_degenerate_spectrum():
    spec = BirthDeathSpec(N=2, p=(1e-14,), q=(0.0,))
    with pytest.raises(DegenerateSpectrumError):
        spectral_link_1d(spec)


def test_spectral_polynomials_substochastic():
    rng = np.random.default_rng(31)
    for _ in range(20):
        spec = rand_bd(rng, int(rng.integers(2, 6)), budget=0.4,
                       q1_zero=bool(rng.integers(2)))
        for qk in spectral_polynomials(spec):
            assert qk.min() > -1e-10
            assert qk.sum(axis=1).max() < 1.0 + 1e-10


def test_dual_one_dimensional_form():
    spec = golden_spec()
    link, dual = build_dual(one_dim_game(spec))
    lam = bd_eigenvalues(spec)
    assert np.allclose(dual.matrix, pure_birth_1d(lam), atol=1e-12)
    assert abs(link.iso_value - bd_win_prob(spec)[0]) < 1e-14


def test_dual_one_move_two_dim_displayed_form():
    rng = np.random.default_rng(32)
    a = rand_bd(rng, 3, budget=0.12)
    b = rand_bd(rng, 4, budget=0.12)
    game = preset_r_of_d([a, b], 1)
    link, dual = build_dual(game)
    eigs = [bd_eigenvalues(a), bd_eigenvalues(b)]
    shape = (3, 4)
    for lin, multi in enumerate(np.ndindex(*shape)):
        lam_here = [eigs[0][multi[0]], eigs[1][multi[1]]]
        movable = [j for j in range(2) if multi[j] + 1 < shape[j]]
        hold = 1.0 - sum(1.0 - lam_here[j] for j in movable)
        assert abs(dual.matrix[lin, lin] - hold) < 1e-12
        for j in movable:
            target = list(multi)
            target[j] += 1
            col = int(np.ravel_multi_index(target, shape))
            assert abs(dual.matrix[lin, col] - (1.0 - lam_here[j])) < 1e-12


def test_dual_independent_game_is_kronecker_of_duals():
    rng = np.random.default_rng(33)
    a = rand_bd(rng, 3, budget=0.4)
    b = rand_bd(rng, 3, budget=0.4)
    game = preset_r_of_d([a, b], 2)
    _, dual = build_dual(game)
    expected = np.kron(
        pure_birth_1d(bd_eigenvalues(a)), pure_birth_1d(bd_eigenvalues(b))
    )
    assert np.max(np.abs(dual.matrix - expected)) < 1e-12


def test_dual_requires_scalar_coefficients():
    spec = golden_spec()
    game = GameSpec(
        dims=(spec,),
        subsets=(frozenset({1}), frozenset()),
        coeffs=(0.5 * np.eye(3), 0.5 * np.eye(3)),
    )
    with pytest.raises(SpecError):
        build_dual(game)


def test_dual_nonnegativity_violation_names_states():
    spec = golden_spec()  # eigenvalue 0.427 makes the d=2 diagonal negative
    game = preset_r_of_d([spec, spec], 1)
    with pytest.raises(SpecError, match="lattice states"):
        build_dual(game)


def test_intertwining_and_isolation_on_random_games():
    rng = np.random.default_rng(34)
    for _ in range(15):
        game = rand_game(rng)
        chain = build_game(game)
        link, dual = build_dual(game, chain=chain)
        resid = np.max(
            np.abs(link.matrix @ chain.restricted() - dual.matrix @ link.matrix)
        )
        assert resid < 1e-10
        assert np.max(np.abs(link.matrix[:-1, -1])) == 0.0
        expected_iso = np.prod([bd_win_prob(s)[0] for s in game.dims])
        assert abs(link.matrix[-1, -1] - expected_iso) < 1e-10
        assert np.max(np.abs(np.triu(link.matrix, k=1))) == 0.0
        assert np.max(np.abs(dual.matrix.sum(axis=1) - 1.0)) < 1e-12


def test_dual_diagonal_is_game_spectrum():
    rng = np.random.default_rng(35)
    for _ in range(10):
        d = int(rng.integers(1, 3))
        game = rand_game(rng, d=d, n_max=4)
        chain = build_game(game)
        _, dual = build_dual(game, chain=chain)
        result = diagonal_eigenvalue_check(chain.restricted(), dual.diag)
        assert result.passed, result


def test_dual_initial_point_mass_at_bottom():
    rng = np.random.default_rng(36)
    game = rand_game(rng, d=2)
    link, _ = build_dual(game)
    nu = np.zeros(game.size)
    nu[0] = 1.0
    out = dual_initial(link, nu)
    assert out.is_distribution
    assert np.allclose(out.values, nu, atol=1e-12)


def test_dual_initial_golden_values():
    p, q = 0.3, 0.1
    link, _ = build_dual(one_dim_game(golden_spec(p, q)))
    out = dual_initial(link, np.array([0.0, 1.0, 0.0]))
    expected = np.array([-np.sqrt(q / p), 1 + q / p + np.sqrt(q / p), 0.0])
    assert np.max(np.abs(out.values - expected)) < 1e-12
    assert not out.is_distribution


def test_dual_initial_matches_dense_solve():
    rng = np.random.default_rng(37)
    for _ in range(10):
        game = rand_game(rng, d=2, n_max=3)
        link, _ = build_dual(game)
        nu = rng.dirichlet(np.ones(game.size))
        out = dual_initial(link, nu)
        dense = np.linalg.solve(link.matrix.T, nu)
        assert np.max(np.abs(out.values - dense)) < 1e-10
        assert support_dominates(game.shape, nu, out.values)


def test_dual_initial_round_trip_through_link():
    rng = np.random.default_rng(39)
    for _ in range(10):
        game = rand_game(rng, d=2, n_max=3)
        link, _ = build_dual(game)
        nu = rng.dirichlet(np.ones(game.size))
        out = dual_initial(link, nu)
        assert np.max(np.abs(out.values @ link.matrix - nu)) < 1e-10


def test_two_urn_pgf_mean_equals_expectation_formula():
    for n in (3, 5, 8):
        for m in (1, 2, n - 1):
            forms = ehrenfest_closed_forms(n, m)
            assert abs(forms.pgf.mean() - forms.expected_time) < 1e-10


def test_classical_dual_uniform_stationary():
    x = ErgodicBDSpec(M=4, p=(0.2, 0.2, 0.2), q=(0.2, 0.2, 0.2))
    spec, link = classical_ssd_1d(x)
    # H(j) = j/4: down H(i-1)p'(i)/H(i), up H(i+1)q'(i+1)/H(i)
    for i in range(1, 4):
        assert abs(spec.p[i - 1] - (i + 1) * 0.2 / i) < 1e-14
        assert abs(spec.q[i - 1] - (i - 1) * 0.2 / i) < 1e-14
    expected_link = np.tril(np.ones((4, 4))) / np.arange(1, 5)[:, None]
    assert np.allclose(link, expected_link, atol=1e-14)


def test_classical_dual_two_state():
    x = ErgodicBDSpec(M=2, p=(0.3,), q=(0.2,))
    spec, link = classical_ssd_1d(x)
    pi = np.array([0.2, 0.3]) / 0.5
    assert np.allclose(link, [[1.0, 0.0], [pi[0], pi[1]]], atol=1e-14)
    assert abs(spec.p[0] - 1.0 * 0.2 / pi[0]) < 1e-14


def test_classical_dual_intertwines():
    rng = np.random.default_rng(38)
    for _ in range(20):
        x = rand_ergodic(rng, int(rng.integers(2, 7)), budget=0.8)
        from krongambler import bd_is_monotone

        if not bd_is_monotone(x):
            continue
        spec, link = classical_ssd_1d(x)
        resid = np.max(
            np.abs(link @ ergodic_matrix(x) - bd_restricted(spec) @ link)
        )
        assert resid < 1e-10


def test_classical_dual_rejects_non_monotone():
    x = ErgodicBDSpec(M=3, p=(0.7, 0.1), q=(0.5, 0.2))
    with pytest.raises(MonotonicityError):
        classical_ssd_1d(x)


def test_two_urn_classical_link_closed_form():
    from math import comb

    for n in (3, 5, 8):
        _, link = classical_ssd_1d(ehrenfest_ergodic(n))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                expected = (
                    comb(n - 1, j - 1) / sum(comb(n - 1, r) for r in range(i))
                    if j <= i
                    else 0.0
                )
                assert abs(link[i - 1, j - 1] - expected) < 1e-12


def test_two_urn_dual_weights_and_expectations():
    forms = ehrenfest_closed_forms(3, 1)
    assert np.allclose(forms.nu, [1.0, 0.0, 0.0], atol=1e-14)
    assert abs(forms.expected_time - 3.0) < 1e-12

    forms = ehrenfest_closed_forms(3, 2)
    assert np.allclose(forms.nu, [-1 / 3, 4 / 3, 0.0], atol=1e-12)
    for n in range(3, 9):
        for m in range(1, n + 1):
            nu = ehrenfest_closed_forms(n, m).nu
            assert abs(nu.sum() - 1.0) < 1e-12
            assert np.max(
                np.abs(nu - ehrenfest_dual_weights_link_route(n, m))
            ) < 1e-9


def test_two_urn_binomial_link_inverse_is_exact():
    for n in (3, 6, 8):
        a = ehrenfest_binomial_link(n)
        b = ehrenfest_binomial_link_inv(n)
        assert np.max(np.abs(a @ b - np.eye(n))) < 1e-12


def test_two_urn_spectral_link_matches_link_route():
    for n in range(3, 9):
        ssd, link_classical = classical_ssd_1d(ehrenfest_ergodic(n))
        direct = spectral_link_1d(ssd)
        route = ehrenfest_binomial_link(n) @ np.linalg.inv(link_classical)
        assert np.max(np.abs(direct - route)) < 1e-9
