import random

import pytest
from hypothesis import given, settings, strategies as st

from randext import ff
from randext.errors import FieldMismatchError, UnsupportedParametersError

GF5 = ff.FieldSpec.prime(5)
GFP31 = ff.FieldSpec.prime((1 << 31) - 1)
GFP61 = ff.FieldSpec.prime((1 << 61) - 1)
GF16 = ff.FieldSpec.binary(4)
GF256 = ff.FieldSpec.binary(8)
GF2_16 = ff.FieldSpec.binary(16)


def rand_poly(rng, deg, F):
    return ff.poly_trim([F.random_element(rng) for _ in range(deg + 1)])


# ---------------------------------------------------------------------------
# field spec construction


def test_fieldspec_validation():
    with pytest.raises(ValueError):
        ff.FieldSpec.prime(15)
    with pytest.raises(ValueError):
        ff.FieldSpec.binary(8, modulus=0x101)  # x^8 + 1 reducible
    with pytest.raises(ValueError):
        ff.FieldSpec(kind="prime", p=7, zeta=1, q_minus_1_factors=(2, 3))


def test_fieldspec_zeta_accepts_primitive():
    F = ff.FieldSpec(kind="prime", p=7, zeta=3, q_minus_1_factors=(2, 3))
    assert F.zeta == 3


def test_scalar_arithmetic_small_binary():
    # GF(16) with x^4 + x + 1: x * x^3 = x^4 = x + 1
    F = ff.FieldSpec.binary(4, modulus=0b10011)
    assert F.mul(0b0010, 0b1000) == 0b0011
    for a in range(1, 16):
        assert F.mul(a, F.inv(a)) == 1


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_prime_field_laws(a, b, c):
    F = GF5
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_binary_field_laws(a, b, c):
    F = GF256
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


# ---------------------------------------------------------------------------
# poly_mul


def test_poly_mul_zero_annihilates():
    rng = random.Random(0)
    b = rand_poly(rng, 12, GFP31)
    assert ff.poly_mul([], b, GFP31) == []


def test_poly_mul_identity():
    rng = random.Random(1)
    b = rand_poly(rng, 12, GF2_16)
    assert ff.poly_mul([1], b, GF2_16) == b


def test_poly_mul_degree_31_gf2_16_matches_schoolbook():
    rng = random.Random(2)
    a = rand_poly(rng, 31, GF2_16)
    b = rand_poly(rng, 31, GF2_16)
    want = ff.poly_mul(a, b, GF2_16, method="schoolbook")
    assert ff.poly_mul(a, b, GF2_16) == want
    assert ff.poly_mul(a, b, GF2_16, method="karatsuba") == want
    assert ff.poly_mul(a, b, GF2_16, method="kronecker") == want
    assert len(want) - 1 == 62


def test_poly_mul_rejects_unreduced():
    with pytest.raises(FieldMismatchError):
        ff.poly_mul([7], [1], GF5)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_poly_mul_methods_agree(data):
    F = data.draw(st.sampled_from([GF5, GFP31, GF16, GF256]))
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    a = rand_poly(rng, rng.randrange(0, 90), F)
    b = rand_poly(rng, rng.randrange(0, 90), F)
    want = ff.poly_mul(a, b, F, method="schoolbook")
    assert ff.poly_mul(a, b, F, method="karatsuba") == want
    assert ff.poly_mul(a, b, F, method="kronecker") == want


def test_poly_mul_big_prime_random():
    rng = random.Random(3)
    for _ in range(3):
        a = rand_poly(rng, 300, GFP61)
        b = rand_poly(rng, 257, GFP61)
        assert ff.poly_mul(a, b, GFP61) == ff.poly_mul(a, b, GFP61, "schoolbook")


def test_poly_divmod_roundtrip():
    rng = random.Random(4)
    for F in (GFP31, GF256):
        a = rand_poly(rng, 40, F)
        b = rand_poly(rng, 13, F)
        if not b:
            continue
        q, r = ff.poly_divmod(a, b, F)
        recon = ff.poly_add(ff.poly_mul(q, b, F), r, F)
        assert recon == a
        assert len(r) < len(b)


def test_poly_mod_fast_matches_schoolbook():
    rng = random.Random(5)
    for F in (GFP31, GF2_16):
        a = rand_poly(rng, 700, F)
        b = rand_poly(rng, 150, F)
        b = b if b else [1]
        assert ff.poly_mod_fast(a, b, F) == ff.poly_divmod(a, b, F)[1]


# ---------------------------------------------------------------------------
# multipoint_eval


def test_multipoint_constant():
    assert ff.multipoint_eval([3], [0, 1, 2], GF5) == [3, 3, 3]


def test_multipoint_identity_poly():
    pts = [11, 22, 33]
    assert ff.multipoint_eval([0, 1], pts, GFP31) == pts


def test_multipoint_degree_255_at_256_points_matches_horner():
    rng = random.Random(6)
    f = rand_poly(rng, 255, GFP61)
    pts = [GFP61.random_element(rng) for _ in range(256)]
    got = ff.multipoint_eval(f, pts, GFP61)
    assert got == [ff.poly_eval(f, x, GFP61) for x in pts]


def test_multipoint_binary_field():
    rng = random.Random(7)
    f = rand_poly(rng, 200, GF256)
    pts = [GF256.random_element(rng) for _ in range(120)]
    got = ff.multipoint_eval(f, pts, GF256)
    assert got == [ff.poly_eval(f, x, GF256) for x in pts]


def test_multipoint_needs_points():
    with pytest.raises(ValueError):
        ff.multipoint_eval([1], [], GF5)


# ---------------------------------------------------------------------------
# hermite_eval


def test_hermite_x_squared():
    # f = X^2 over GF(101): (a^2, 2a, 2)
    F = ff.FieldSpec.prime(101)
    a = 13
    assert ff.hermite_eval([0, 0, 1], a, 2, F) == [a * a % 101, 2 * a % 101, 2]


def test_hermite_constant():
    F = ff.FieldSpec.prime(101)
    assert ff.hermite_eval([42], 7, 2, F) == [42, 0, 0]


def _derive(f, F):
    return ff.poly_trim([F.mul(i, c) for i, c in enumerate(f)][1:])


def test_hermite_degree_127_matches_derive_oracle():
    F = GFP31
    rng = random.Random(8)
    f = rand_poly(rng, 127, F)
    a = F.random_element(rng)
    got = ff.hermite_eval(f, a, 16, F)
    g = list(f)
    for i in range(17):
        assert got[i] == ff.poly_eval(g, a, F)
        g = _derive(g, F)


def test_hermite_small_characteristic_paths_agree():
    # p <= deg f exercises the synthetic-division fallback
    F = ff.FieldSpec.prime(17)
    rng = random.Random(9)
    f = rand_poly(rng, 40, F)
    got = ff.hermite_eval(f, 5, 7, F)
    g = list(f)
    for i in range(8):
        assert got[i] == ff.poly_eval(g, 5, F)
        g = _derive(g, F)


def test_hermite_rejects_t_ge_p():
    F = ff.FieldSpec.prime(5)
    with pytest.raises(UnsupportedParametersError):
        ff.hermite_eval([1, 2], 1, 5, F)
    with pytest.raises(UnsupportedParametersError):
        ff.hermite_eval([1], 0, 1, GF16)


# ---------------------------------------------------------------------------
# primitive elements and factorization


def test_factor_q_minus_1():
    assert ff.factor_q_minus_1(GF16) == [3, 5]
    assert ff.factor_q_minus_1(ff.FieldSpec.binary(3)) == [7]
    F31 = ff.FieldSpec.binary(31)
    assert ff.factor_q_minus_1(F31) == [(1 << 31) - 1]


def test_find_primitive_gf5():
    # exhaustive oracle: the primitive roots mod 5 are exactly {2, 3}
    prim = {g for g in range(1, 5) if len({pow(g, e, 5) for e in range(1, 5)}) == 4}
    assert prim == {2, 3}
    z = ff.find_primitive(GF5, rng_seed=123)
    assert z in prim


def test_find_primitive_gf16():
    F = ff.FieldSpec.binary(4, modulus=0b10011)
    z = ff.find_primitive(F, rng_seed=7)
    assert F.pow(z, 15) == 1
    assert F.pow(z, 5) != 1
    assert F.pow(z, 3) != 1


def test_find_primitive_gf2_trivial():
    assert ff.find_primitive(ff.FieldSpec.binary(1), rng_seed=0) == 1


def test_find_primitive_order_property():
    rng = random.Random(10)
    for F in (ff.FieldSpec.prime(97), GF256):
        z = ff.find_primitive(F, rng_seed=rng.randrange(2**32))
        facs = set(ff.factor_q_minus_1(F))
        assert F.pow(z, F.q - 1) == F.one
        for r in facs:
            assert F.pow(z, (F.q - 1) // r) != F.one


def test_with_preprocessing_roundtrip():
    F = ff.with_preprocessing(ff.FieldSpec.binary(16), rng_seed=5)
    assert F.zeta is not None and F.q_minus_1_factors is not None
    ord_checks = [F.pow(F.zeta, (F.q - 1) // r) for r in set(F.q_minus_1_factors)]
    assert all(v != 1 for v in ord_checks)
