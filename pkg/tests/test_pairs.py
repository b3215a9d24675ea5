import numpy as np
import pytest

from bicontract.funcalc import ContractionPair
from bicontract.matnum import numerical_radius, op_norm
from bicontract.pairs import (DISTANCE_CONSTANT, SCHEMES, PairScheme, _poly_pair, commutation_defect, gen_pair,
                              pair_distance, perturb_pair)


def test_scheme_validation():
    with pytest.raises(ValueError):
        PairScheme("hermitian", 3, 0)
    with pytest.raises(ValueError):
        PairScheme("diagonal", 0, 0)


@pytest.mark.parametrize("kind", SCHEMES)
def test_determinism(kind):
    a = gen_pair(PairScheme(kind, 7, 123))
    b = gen_pair(PairScheme(kind, 7, 123))
    assert np.array_equal(a.T, b.T) and np.array_equal(a.R, b.R)
    c = gen_pair(PairScheme(kind, 7, 124))
    assert not np.array_equal(a.T, c.T)
    s = PairScheme(kind, 7, 123)
    assert np.array_equal(perturb_pair(a, s, 0.1).T, perturb_pair(b, s, 0.1).T)


def test_diagonal_commutes_exactly():
    for seed in range(20):
        pair = gen_pair(PairScheme("diagonal", 9, seed))
        assert commutation_defect(pair.T, pair.R) == 0.0


def test_poly_scheme_with_equal_polynomials():
    rng = np.random.default_rng(0)
    G = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    p = np.array([0.2, -0.5j, 0.3, 0.1])
    pair = _poly_pair(G / op_norm(G), p, p.copy())
    assert np.array_equal(pair.T, pair.R)
    assert commutation_defect(pair.T, pair.R) == 0.0


@pytest.mark.parametrize("kind", SCHEMES)
def test_invariant_scan(kind):
    # construction validates contractivity and commutation; check the margins too
    rng = np.random.default_rng(1)
    worst = 0.0
    for seed in range(1000):
        d = int(rng.integers(1, 17))
        pair = gen_pair(PairScheme(kind, d, seed))
        assert isinstance(pair, ContractionPair) and pair.dim == d
        assert op_norm(pair.T) <= 1 + 1e-10 and op_norm(pair.R) <= 1 + 1e-10
        worst = max(worst, commutation_defect(pair.T, pair.R))
    assert worst <= (0.0 if kind == "diagonal" else 1e-12)


@pytest.mark.parametrize("kind", SCHEMES)
def test_perturbation_scan(kind):
    rng = np.random.default_rng(2)
    c = DISTANCE_CONSTANT[kind]
    for seed in range(1000):
        d = int(rng.integers(1, 17))
        eps = float(rng.choice([1e-6, 1e-3, 1e-2, 0.1, 0.5, 1.0]))
        scheme = PairScheme(kind, d, seed)
        p1 = gen_pair(scheme)
        p2 = perturb_pair(p1, scheme, eps)
        assert pair_distance(p1, p2) <= c * eps * (1 + 1e-12) + 1e-15


def test_zero_perturbation_is_identity():
    for kind in SCHEMES:
        scheme = PairScheme(kind, 4, 9)
        pair = gen_pair(scheme)
        assert perturb_pair(pair, scheme, 0.0) is pair


def test_diagonal_scalar_perturbation_is_exact():
    pair = ContractionPair([[0.5]], [[0.5]], recipe={"kind": "diagonal", "t": np.array([0.5 + 0j]),
                                                      "r": np.array([0.5 + 0j])})
    scheme = PairScheme("diagonal", 1, 3)
    for eps in (1e-3, 0.1, 0.5):
        p2 = perturb_pair(pair, scheme, eps)
        assert op_norm(pair.T - p2.T) == pytest.approx(eps, rel=1e-12)


def test_perturb_errors():
    scheme = PairScheme("diagonal", 3, 0)
    pair = gen_pair(scheme)
    with pytest.raises(ValueError):
        perturb_pair(pair, scheme, -0.1)
    with pytest.raises(ValueError):
        perturb_pair(pair, PairScheme("triangular", 3, 0), 0.1)


def test_triangular_nonnormality_witness():
    # at least one draw per 100 has numerical radius strictly below the norm
    for block in range(5):
        hits = 0
        for seed in range(100 * block, 100 * (block + 1)):
            T = gen_pair(PairScheme("triangular", 4, seed)).T
            if numerical_radius(T) < op_norm(T) - 1e-6:
                hits += 1
        assert hits >= 1


def test_triangular_norm_attained():
    for seed in range(10):
        pair = gen_pair(PairScheme("triangular", 6, seed))
        assert op_norm(pair.T) == pytest.approx(1.0, abs=1e-12)
        assert op_norm(pair.R) == pytest.approx(1.0, abs=1e-12)


def test_commutation_defect_examples():
    J = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert commutation_defect(J, J.conj().T) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        commutation_defect(np.eye(2), np.eye(3))


def test_pair_distance_in_schatten_norms():
    scheme = PairScheme("triangular", 5, 1)
    p1 = gen_pair(scheme)
    p2 = perturb_pair(p1, scheme, 0.2)
    assert pair_distance(p1, p2, 1) >= pair_distance(p1, p2, 2) >= pair_distance(p1, p2)
