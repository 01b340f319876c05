import cmath
import random

import pytest
from hypothesis import given, settings, strategies as st

from lacunary.arith import first_primes
from lacunary.bohr import (
    Basis,
    ExponentVector,
    MultiPowerSeries,
    dirichlet_point,
    drop,
    exponent_vector,
    homogeneous_parts,
    lift,
    poly_add,
    poly_evaluate,
    poly_multiply,
)
from lacunary.errors import (
    AmbiguousFactorization,
    BasisMismatch,
    DomainError,
    NoFactorization,
    TruncationOverflow,
)
from lacunary.semigroup import sieve
from lacunary.series import DirichletSeries, add, convolve, evaluate, zeta
from oracles import random_coeffs

EV = ExponentVector.of


def z(*pairs):
    return EV(dict(pairs))


def test_exponent_vectors():
    assert exponent_vector(12) == z((1, 2), (2, 1))
    assert exponent_vector(1) == EV() and exponent_vector(1, Basis.generators([2, 3])) == EV()
    assert exponent_vector(8, Basis.generators([2, 3])) == z((1, 3))
    assert exponent_vector(97) == z((25, 1))
    with pytest.raises(NoFactorization):
        exponent_vector(5, Basis.generators([2, 3]))
    with pytest.raises(AmbiguousFactorization):
        exponent_vector(36, Basis.generators([4, 6, 9]))


def test_generators_basis_validated_up_front():
    with pytest.raises(AmbiguousFactorization):
        Basis.generators([4, 6, 9], bound=100)
    Basis.generators([2, 5, 9, 13], bound=10**4)


def test_exponent_vector_algebra():
    a, b = z((1, 2), (3, 1)), z((1, 1), (2, 4))
    assert (a + b) == z((1, 3), (2, 4), (3, 1))
    assert (a + b) - b == a
    assert b.precedes(a + b) and not a.precedes(b)
    assert a.degree == 3 and (a + b).factorial == 6 * 24
    with pytest.raises(ValueError):
        EV({0: 1})


@given(st.integers(1, 5000), st.integers(1, 5000))
@settings(max_examples=200, deadline=None)
def test_products_become_sums(m, n):
    B = Basis.primes()
    assert exponent_vector(m * n) == exponent_vector(m) + exponent_vector(n)
    assert B.integer(exponent_vector(n)) == n


def test_exponent_vector_bijective_on_range():
    N = 3000
    vecs = {exponent_vector(n) for n in range(1, N + 1)}
    assert len(vecs) == N
    B = Basis.generators([2, 5, 9, 13], bound=N)
    sv = sieve("gen(2,5,9,13)", N)
    images = {B.exponent_vector(n) for n in sv.members}
    assert len(images) == len(sv.members)
    assert all(B.integer(nu) == n for n, nu in ((n, B.exponent_vector(n)) for n in sv.members))


def test_lift_examples():
    f = DirichletSeries(10, {2: 1, 6: 1})
    P = lift(f)
    assert P.terms == {z((1, 1)): 1, z((1, 1), (2, 1)): 1}
    assert lift(DirichletSeries.unit(5)).terms == {EV(): 1}
    assert drop(P, 10) == f


def test_drop_overflow():
    with pytest.raises(TruncationOverflow):
        drop(MultiPowerSeries({z((1, 4)): 1}), 10)


def test_roundtrip_random():
    rng = random.Random(0)
    for _ in range(100):
        f = DirichletSeries(500, random_coeffs(rng, list(range(1, 501)), 0.1))
        assert drop(lift(f), 500) == f


def test_lift_is_homomorphism():
    rng = random.Random(1)
    for _ in range(30):
        f = DirichletSeries(500, random_coeffs(rng, list(range(1, 501)), 0.1))
        g = DirichletSeries(500, random_coeffs(rng, list(range(1, 501)), 0.1))
        assert lift(convolve(f, g)) == poly_multiply(lift(f), lift(g), 500)
        assert lift(add(f, g)) == poly_add(lift(f), lift(g))
    one = DirichletSeries.unit(500)
    assert lift(one) == MultiPowerSeries({EV(): 1})


def test_lift_generators_basis_homomorphism():
    sv = sieve("sum2sq", 800)
    B = Basis.generators([a for a in range(2, 801) if a in _sum2sq_atoms(800)], bound=800)
    rng = random.Random(2)
    for _ in range(20):
        f = DirichletSeries(800, random_coeffs(rng, sv.members, 0.1), support=sv)
        g = DirichletSeries(800, random_coeffs(rng, sv.members, 0.1), support=sv)
        assert lift(convolve(f, g), B) == poly_multiply(lift(f, B), lift(g, B), 800)
        assert drop(lift(f, B), 800) == f


def _sum2sq_atoms(N):
    from lacunary.semigroup import atoms

    return set(atoms(sieve("sum2sq", N)).atoms)


def test_poly_multiply_basic():
    z1 = MultiPowerSeries({z((1, 1)): 1})
    z2 = MultiPowerSeries({z((2, 1)): 1})
    prod = poly_multiply(z1, z2)
    assert prod.terms == {z((1, 1), (2, 1)): 1}
    assert drop(prod, 6) == DirichletSeries.monomial(6, 6)
    with pytest.raises(BasisMismatch):
        poly_multiply(z1, MultiPowerSeries({z((1, 1)): 1}, Basis.generators([2, 3])))


def test_poly_multiply_coefficient_formula():
    rng = random.Random(3)
    P = lift(DirichletSeries(200, random_coeffs(rng, list(range(1, 201)), 0.2)))
    Q = lift(DirichletSeries(200, random_coeffs(rng, list(range(1, 201)), 0.2)))
    R = poly_multiply(P, Q)
    gammas = {a + b for a in P.terms for b in Q.terms}
    assert set(R.terms) <= gammas  # support lies in the sumset
    for gamma in list(gammas)[:50]:
        expect = sum((P.terms[b] * Q[gamma - b] for b in P.terms if b.precedes(gamma)), 0)
        assert R[gamma] == expect


def test_support_in_additive_subsemigroup():
    # exponents in nu(S) for S = coprime(6): no z1, z2 -- closed under addition
    sv = sieve("coprime(6)", 1000)
    rng = random.Random(4)
    P = lift(DirichletSeries(1000, random_coeffs(rng, sv.members, 0.05), support=sv))
    Q = lift(DirichletSeries(1000, random_coeffs(rng, sv.members, 0.05), support=sv))
    for nu in poly_multiply(P, Q).terms:
        assert 1 not in nu.as_dict() and 2 not in nu.as_dict()


def test_support_transport():
    N = 2000
    for spec in ("sum2sq", "powers(2)", "coprime(10)"):
        sv = sieve(spec, N)
        image = {exponent_vector(n) for n in sv.members}
        assert all((exponent_vector(n) in image) == (n in sv) for n in range(1, N + 1))
        for a in list(image)[:60]:
            for b in list(image)[:60]:
                if Basis.primes().integer(a + b) <= N:
                    assert a + b in image


def test_homogeneous_parts():
    assert {m: p.terms for m, p in homogeneous_parts(MultiPowerSeries({EV(): 1})).items()} == {0: {EV(): 1}}
    parts = homogeneous_parts(lift(zeta(4)))
    assert {m: p.terms for m, p in parts.items()} == {
        0: {EV(): 1},
        1: {z((1, 1)): 1, z((2, 1)): 1},
        2: {z((1, 2)): 1},
    }
    rng = random.Random(5)
    P = lift(DirichletSeries(300, random_coeffs(rng, list(range(1, 301)), 0.3)))
    parts = homogeneous_parts(P)
    total = MultiPowerSeries({})
    for m, part in parts.items():
        assert all(nu.degree == m for nu in part.terms)
        total = poly_add(total, part)
    assert total == P
    pt = {k: 0.3 * cmath.exp(1j * k) for k in range(1, 8)}
    lam = 0.6 - 0.2j
    for m, part in parts.items():
        scaled = {k: lam * v for k, v in pt.items()}
        assert poly_evaluate(part, scaled) == pytest.approx(lam**m * poly_evaluate(part, pt), rel=1e-10, abs=1e-14)


def test_poly_evaluate():
    assert poly_evaluate(MultiPowerSeries({z((1, 1)): 1}), {1: 0.5}) == 0.5
    f = DirichletSeries(50, {1: 7, 2: 3, 6: -1})
    assert poly_evaluate(lift(f), {}) == 7
    with pytest.raises(DomainError):
        poly_evaluate(lift(f), {1: 1.0})


def test_poly_evaluate_matches_dirichlet_evaluation():
    rng = random.Random(6)
    N = 400
    nvars = len(first_primes(200))
    for s in (2, 0.3 + 4j, 1.5 - 2j):
        f = DirichletSeries(N, random_coeffs(rng, list(range(1, N + 1)), 0.3))
        val = poly_evaluate(lift(f), dirichlet_point(s, nvars))
        assert val == pytest.approx(evaluate(f, s).value, rel=1e-10, abs=1e-12)


def test_derivative_reconstruction():
    rng = random.Random(7)
    f = DirichletSeries(300, random_coeffs(rng, list(range(1, 301)), 0.3))
    P = lift(f)
    for n, a in f.items():
        nu = exponent_vector(n)
        assert P.derivative_at_zero(nu) / nu.factorial == a


def test_poly_json_roundtrip():
    f = DirichletSeries(100, {1: 2, 12: -1, 35: 5})
    P = lift(f)
    assert MultiPowerSeries.from_json(P.to_json()) == P
    G = lift(DirichletSeries(100, {8: 1, 18: 3}), Basis.generators([2, 9]))
    obj = G.to_json()
    assert obj["basis"] == {"generators": [2, 9]}
    assert MultiPowerSeries.from_json(obj) == G
