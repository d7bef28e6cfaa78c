"""Field tower arithmetic: axioms, Frobenius, orders, subfield structure."""

import random

import pytest

from psu3grr.gf import (Field, FieldElem, field, field_from_params_str,
                        is_prime, smallest_irreducible)


def test_field_sizes():
    assert field(5, 1).size == 25
    assert field(2, 2).size == 16
    # count by exhaustive enumeration
    assert sum(1 for _ in field(3, 3).elements()) == 729


def test_build_rejects_bad_input():
    with pytest.raises(ValueError):
        Field(4, 1)
    with pytest.raises(ValueError):
        Field(6, 2)
    with pytest.raises(ValueError):
        Field(2, 0)
    with pytest.raises(ValueError):
        Field(2, 11)  # 2^22 elements, above the size bound


def test_modulus_is_deterministic_and_minimal():
    # first irreducibles in low-degree-first lexicographic order
    assert smallest_irreducible(5, 2) == (1, 1, 1)          # 1 + x + x^2
    assert smallest_irreducible(2, 4) == (1, 0, 0, 1, 1)    # 1 + x^3 + x^4
    assert field(5, 1).modulus == (1, 1, 1)
    # rebuilding gives the identical object through the cache
    assert field(5, 1) is field(5, 1)


def test_enumeration_order_is_lex_on_coeff_vectors():
    F = field(2, 1)
    seen = [x.coeffs for x in F.elements()]
    assert seen == sorted(seen)
    assert seen[0] == (0, 0)


def test_field_axioms_bulk():
    rng = random.Random(0xF1E1D)
    for p, f in [(5, 1), (2, 2), (3, 2)]:
        F = field(p, f)
        elems = list(F.elements())
        one, zero = F.one, F.zero
        for _ in range(4000):
            x = elems[rng.randrange(F.size)]
            y = elems[rng.randrange(F.size)]
            z = elems[rng.randrange(F.size)]
            assert x + y == y + x
            assert x * y == y * x
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert x + zero == x and x * one == x
            assert x - x == zero
            if x:
                assert x * x.inv() == one


def test_multiplicative_absorbing_and_inverse_law():
    F = field(5, 1)
    zero = F.zero
    for x in F.elements():
        assert zero * x == zero
        if x:
            assert x * x.inv() == F.one
    with pytest.raises(ZeroDivisionError):
        zero.inv()


def test_generator_power_cycle_gf25():
    """Brute-force: some element has order 24, and g^24 = 1."""
    F = field(5, 1)
    gens = [x for x in F.nonzero_elements() if x.order() == 24]
    assert gens
    g = gens[0]
    power = F.one
    for _ in range(24):
        power = power * g
    assert power == F.one


@pytest.mark.parametrize("p,f", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1),
                                 (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)])
def test_order_counts_match_totient(p, f):
    """#elements of order d is phi(d) for each d | q^2 - 1 (exhaustive)."""
    from math import gcd
    F = field(p, f)
    n = F.size - 1
    counts = {}
    for x in F.nonzero_elements():
        d = x.order()
        assert n % d == 0
        counts[d] = counts.get(d, 0) + 1
    def phi(m):
        return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)
    for d, c in counts.items():
        assert c == phi(d)


def test_order_counts_examples():
    assert sum(1 for x in field(5, 1).nonzero_elements() if x.order() == 4) == 2
    assert sum(1 for x in field(2, 2).nonzero_elements() if x.order() == 5) == 4


def test_frobenius_basics():
    F = field(3, 2)
    for x in list(F.elements())[:30]:
        assert x.frobenius(0) == x
        assert x.frobenius(F.f).frobenius(F.f) == x
    c = F.from_int(2)
    assert c.frobenius(1) == c  # prime field fixed
    assert F.one.frobenius(3) == F.one


def test_frobenius_is_ring_homomorphism():
    rng = random.Random(77)
    F = field(3, 2)
    elems = list(F.elements())
    for i in range(2 * F.f):
        for _ in range(300):
            x = elems[rng.randrange(F.size)]
            y = elems[rng.randrange(F.size)]
            assert (x + y).frobenius(i) == x.frobenius(i) + y.frobenius(i)
            assert (x * y).frobenius(i) == x.frobenius(i) * y.frobenius(i)


def test_subfield_is_fixed_field_of_qth_power():
    F = field(2, 2)
    fixed = [x for x in F.elements() if x.in_subfield()]
    assert len(fixed) == F.q


def test_norm_trace_land_in_subfield():
    for p, f in [(5, 1), (2, 2), (3, 2)]:
        F = field(p, f)
        for x in F.elements():
            n, t = x.norm_trace()
            assert n.in_subfield() and t.in_subfield()


def test_norm_trace_examples():
    F = field(5, 1)
    n, t = F.one.norm_trace()
    assert n == F.one and t == F.from_int(2)
    x = F.from_int(3)  # subfield element: norm x^2, trace 2x
    n, t = x.norm_trace()
    assert n == x * x and t == x + x


@pytest.mark.parametrize("p,f", [(5, 1), (7, 1), (2, 2), (2, 3), (3, 2)])
def test_trace_one_fiber_size(p, f):
    """x -> x + x^q is onto GF(q): every value has exactly q preimages."""
    F = field(p, f)
    hits = sum(1 for b in F.elements() if (b + b.frobenius(F.f)) == F.one)
    assert hits == F.q


def test_serialization_round_trip():
    F = field(3, 2)
    for x in list(F.elements())[::7]:
        assert F.from_str(x.to_str()) == x
    assert F.params_str() == "3,2," + ",".join(str(c) for c in F.modulus)
    assert field_from_params_str(F.params_str()) is F
    with pytest.raises(ValueError):
        field_from_params_str("3,2,1,1,1,1,1")


def test_tableless_tier_agrees_with_tables():
    F = field(5, 1)
    G = Field(5, 1, build_tables=False)
    for i in range(25):
        assert F.neg_index(i) == G.neg_index(i)
        if i:
            assert F.inv_index(i) == G.inv_index(i)
            assert F.order_index(i) == G.order_index(i)
        for j in range(25):
            assert F.add_index(i, j) == G.add_index(i, j)
            assert F.mul_index(i, j) == G.mul_index(i, j)
        for e in range(2):
            assert F.frob_index(i, e) == G.frob_index(i, e)


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == \
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
