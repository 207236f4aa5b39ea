import itertools

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import brute_gcd_shifted
from troproots import (CoefficientGroup, Homomorphism, Z, Zmod, divide_by, gcd_shifted, induced_quotient_hom,
                       is_mult_injective, quotient_mod_r, torsion_root)


def test_parse_and_str():
    assert CoefficientGroup.parse("Z") == Z
    assert CoefficientGroup.parse("Z/4") == Zmod(4)
    G = CoefficientGroup.parse("Z^2 x Z/3 x Z/5")
    assert (G.free_rank, G.torsion) == (2, (3, 5))
    assert CoefficientGroup.parse(str(G)) == G
    assert CoefficientGroup.from_dict(G.to_dict()) == G
    with pytest.raises(ValueError):
        CoefficientGroup.parse("Q")
    with pytest.raises(ValueError):
        Zmod(1)


def test_element_arithmetic_reduces_torsion():
    A = CoefficientGroup.parse("Z x Z/4")
    x = A.element([3], [3])
    y = A.element([-1], [2])
    assert (x + y) == A.element([2], [1])
    assert (-x) == A.element([-3], [1])
    assert (x * 2).torsion == (2,)
    assert A.element([0], [7]).torsion == (3,)
    with pytest.raises(ValueError):
        x + Z.from_int(1)


@pytest.mark.parametrize("group, r, expected", [
    (Z, 3, True),
    (Zmod(4), 2, False),
    (CoefficientGroup.parse("Z x Z/3"), 2, True),
])
def test_is_mult_injective_examples(group, r, expected):
    assert is_mult_injective(group, r) is expected


def test_is_mult_injective_matches_exhaustion():
    for m in range(2, 10):
        for r in range(1, 10):
            kernel = [x for x in range(m) if (r * x) % m == 0]
            assert is_mult_injective(Zmod(m), r) == (kernel == [0])


def test_mult_injective_rejects_zero():
    with pytest.raises(ValueError):
        is_mult_injective(Z, 0)


def test_gcd_shifted_examples():
    assert gcd_shifted(6, Z.from_int(4)) == 2
    for r in (1, 2, 5, -6):
        assert gcd_shifted(r, Z.zero()) == abs(r)
    # 4*(Z/6) = {0,2,4} already contains the coset 2 + 4*(Z/6), so j = 4
    assert gcd_shifted(4, Zmod(6).from_int(2)) == 4
    assert gcd_shifted(4, Zmod(6).from_int(2)) == brute_gcd_shifted(4, [], [(2, 6)])
    with pytest.raises(ValueError):
        gcd_shifted(0, Z.from_int(1))


def test_gcd_shifted_over_integers_is_gcd():
    import math
    for b in range(1, 13):
        for a in range(-12, 13):
            assert gcd_shifted(b, Z.from_int(a)) == math.gcd(b, a)


@given(st.integers(-12, 12).filter(bool), st.lists(st.integers(-20, 20), max_size=2),
       st.lists(st.tuples(st.integers(0, 11), st.integers(2, 12)), max_size=2))
def test_gcd_shifted_matches_brute_force(b, free, torsion):
    A = CoefficientGroup(len(free), tuple(m for _, m in torsion))
    a = A.element(free, [x for x, _ in torsion])
    assert gcd_shifted(b, a) == brute_gcd_shifted(b, free, [(x % m, m) for x, m in torsion])


@given(st.integers(1, 6), st.integers(-10, 10).filter(bool), st.integers(0, 40),
       st.sampled_from(["Z", "Z/2", "Z/3", "Z/5", "Z/7", "Z/9", "Z x Z/5"]))
def test_gcd_scaling_identity(d, b, raw, name):
    A = CoefficientGroup.parse(name)
    assume(is_mult_injective(A, d))
    a = A.from_components([raw] * A.ngens)
    assert gcd_shifted(d * b, a * d) == d * gcd_shifted(b, a)


@given(st.integers(2, 12), st.integers(1, 12), st.integers(0, 100))
def test_torsion_root_exists_when_injective(m, r, raw):
    A = Zmod(m)
    assume(is_mult_injective(A, r))
    a = A.from_int(raw)
    x = torsion_root(r, a)
    assert x * r == a


def test_torsion_root_rejects_free_and_noninjective():
    with pytest.raises(ValueError):
        torsion_root(2, Z.from_int(4))
    with pytest.raises(ValueError):
        torsion_root(2, Zmod(4).from_int(2))
    assert divide_by(2, Zmod(4).from_int(1)) is None


@pytest.mark.parametrize("name, r, target, checks", [
    ("Z", 3, "Z/3", [(7, 1)]),
    ("Z/6", 2, "Z/2", [(3, 1)]),
    ("Z x Z/5", 5, "Z/5 x Z/5", []),
])
def test_quotient_examples(name, r, target, checks):
    Q, q = quotient_mod_r(CoefficientGroup.parse(name), r)
    assert Q == CoefficientGroup.parse(target)
    for a, image in checks:
        assert q(q.source.from_int(a)) == Q.from_int(image)


@pytest.mark.parametrize("name, r", [("Z", 2), ("Z", 4), ("Z/6", 4), ("Z x Z/3", 3), ("Z/4 x Z/6", 2)])
def test_quotient_kernel_is_rA(name, r):
    A = CoefficientGroup.parse(name)
    Q, q = quotient_mod_r(A, r)
    window = [A.from_components(c) for c in itertools.product(range(-3, 9), repeat=A.ngens)]
    multiples = {(x * r).key() for x in window}
    for x in window:
        assert q(x).is_zero() == (divide_by(r, x) is not None)
        for y in window[:12]:
            assert q(x + y) == q(x) + q(y)
        if q(x).is_zero() and A.is_finite:
            assert x.key() in multiples
    for y in Q.elements():
        assert q(q.lift(y)) == y


def test_homomorphism_checks_relations():
    with pytest.raises(ValueError):
        Homomorphism(Zmod(4), Zmod(3), [Zmod(3).from_int(1)])
    f = Homomorphism.multiplication(Zmod(2), Zmod(4), 2)
    assert f.is_injective() and not f.is_surjective()
    g = Homomorphism(Zmod(4), Zmod(2), [Zmod(2).from_int(1)])
    assert g.is_surjective() and not g.is_injective()
    h = induced_quotient_hom(Homomorphism(Z, Z, [Z.from_int(3)]), 2)
    assert h(Zmod(2).from_int(1)) == Zmod(2).from_int(1)
