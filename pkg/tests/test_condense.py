import math
import random

import numpy as np
import pytest

from randext import condense, ff, testkit
from randext.bits import BitString
from randext.errors import (
    InfeasibleParametersError,
    PreprocessingRequiredError,
    UnsupportedParametersError,
)


def _rand_bs(rng, n):
    return BitString(rng.getrandbits(n), n)


def kt_params_smoke(n=256, k=64, eps=2**-8, alpha=1.0):
    # manual (out-of-regime) params for functional tests
    F = ff.FieldSpec.prime((1 << 31) - 1)
    return condense.manual_params("kt", n, k, eps, alpha, F, m=2 * k)


def rs_params_smoke(n=256, k=64, eps=2**-8):
    F = ff.with_preprocessing(ff.FieldSpec.binary(16), rng_seed=1)
    return condense.manual_params("rs", n, k, eps, 1.0, F, m=k)


def test_plan_kt_valid():
    n, k, eps, alpha = 1 << 18, 200_000, 2**-6, 1.0
    p = condense.plan_condenser(n, k, eps, alpha, "kt")
    assert p.m == math.ceil((1 + alpha) * k)
    assert p.ell == math.ceil((1 + 1 / alpha) * math.log2(n * k / eps))
    assert p.m_prime < p.F.p
    assert p.F.kind == "prime"


def test_plan_kt_infeasible_names_inequality():
    with pytest.raises(InfeasibleParametersError, match="256/alpha"):
        condense.plan_condenser(1 << 12, 1 << 11, 2**-8, 1.0, "kt")


def test_plan_rs_ell_formula():
    # n = 2^20, k = 2^10, eps = 2^-20, alpha = 1 -> ell = ceil(2*log2(2^30*2^20)) = 100
    p = condense.plan_condenser(1 << 20, 1 << 10, 2**-20, 1.0, "rs")
    assert p.ell_formula == 100
    # 100 > 62 rounds up to the next Mersenne-prime exponent
    assert p.ell == 107
    assert p.m == 1 << 10


def test_plan_rs_infeasible():
    with pytest.raises(InfeasibleParametersError, match=r"\(2\+alpha\)"):
        condense.plan_condenser(1 << 12, 10, 2**-20, 1.0, "rs")


def test_kt_zero_and_constant_source():
    params = kt_params_smoke()
    rng = random.Random(0)
    y = _rand_bs(rng, params.ell)
    out = condense.kt_condense(BitString.zeros(params.n), y, params)
    assert out.value == 0
    # constant polynomial: first chunk c, everything else zero
    c = 12345
    x = BitString(c, params.n)
    out = condense.kt_condense(x, y, params)
    w = params.F.elem_bits
    assert out.uint(0, w) == c
    assert out.value >> w == 0  # all derivatives vanish


def test_kt_matches_naive_derivative_oracle():
    params = kt_params_smoke()
    rng = random.Random(1)
    F = params.F
    w = F.elem_bits
    for _ in range(20):
        x = _rand_bs(rng, params.n)
        y = _rand_bs(rng, params.ell)
        out = condense.kt_condense(x, y, params)
        f = [F.reduce_int(c) for c in x.iter_uints(w)]
        while f and f[-1] == 0:
            f.pop()
        want = testkit.naive_derivatives(f, y.value % F.p, params.m_prime, F)
        packed = 0
        for i, s in enumerate(want):
            packed |= s << (i * w)
        assert out.value == packed & ((1 << params.m) - 1)


def test_rs_constant_source():
    params = rs_params_smoke()
    rng = random.Random(2)
    y = _rand_bs(rng, params.ell)
    c = 777
    out = condense.rs_condense(BitString(c, params.n), y, params)
    w = params.F.elem_bits
    for i in range(params.m // w):
        assert out.uint(i * w, w) == c


def test_rs_linear_poly_gives_zeta_orbit():
    params = rs_params_smoke()
    F = params.F
    w = F.elem_bits
    # f(X) = X: chunk 1 is 1
    x = BitString(1 << w, params.n)
    rng = random.Random(3)
    yv = rng.getrandbits(w)
    y = BitString(yv, params.ell)
    out = condense.rs_condense(x, y, params)
    pt = yv
    for i in range(params.m // w):
        assert out.uint(i * w, w) == pt
        pt = F.mul(pt, F.zeta)


def test_rs_matches_naive_horner_oracle():
    params = rs_params_smoke()
    rng = random.Random(4)
    F = params.F
    w = F.elem_bits
    for _ in range(20):
        x = _rand_bs(rng, params.n)
        y = _rand_bs(rng, params.ell)
        out = condense.rs_condense(x, y, params)
        f = [c for c in x.iter_uints(w)]
        while f and f[-1] == 0:
            f.pop()
        pt = y.value
        packed = 0
        for i in range(params.m_prime + 1):
            packed |= testkit.naive_poly_eval(f, pt, F) << (i * w)
            pt = F.mul(pt, F.zeta)
        assert out.value == packed & ((1 << params.m) - 1)


def test_rs_requires_preprocessing():
    F = ff.FieldSpec.binary(16)
    params = condense.manual_params("rs", 256, 64, 2**-8, 1.0, F, m=64)
    rng = random.Random(5)
    with pytest.raises(PreprocessingRequiredError):
        condense.rs_condense(_rand_bs(rng, 256), _rand_bs(rng, params.ell), params)
    fixed = condense.ensure_preprocessed(params)
    out = condense.rs_condense(_rand_bs(rng, 256), _rand_bs(rng, fixed.ell), fixed)
    assert len(out) == 64


def test_kt_rejects_binary_field():
    F = ff.FieldSpec.binary(16)
    with pytest.raises(UnsupportedParametersError):
        condense.manual_params("kt", 256, 64, 0.1, 1.0, F, m=64)


def test_kt_losslessness_collision_smoke():
    # flat source with k = 24 embedded in n = 64; collision entropy of
    # seed + output over 1e6 trials must imply >= k + ell - 2 bits
    n, k = 64, 24
    F = ff.FieldSpec.prime((1 << 40) - 87)  # 40-bit prime
    params = condense.manual_params("kt", n, k, 2**-8, 1.0, F, m=48)
    ell = params.ell
    src = testkit.flat_source("subcube", n, k, instance_seed=9)

    def stream(batch, rng):
        out = []
        idx = src.sample_indices(batch, rng)
        seeds = rng.integers(0, 1 << 62, size=batch, dtype=np.int64)
        for i in range(batch):
            x = BitString(src.outcome(int(idx[i])), n)
            y = BitString(int(seeds[i]) & ((1 << ell) - 1), ell)
            o = condense.kt_condense(x, y, params)
            out.append((y.value << params.m) | o.value)
        return out

    est = testkit.collision_entropy_estimate(stream, 10**6, master_seed=11)
    assert est >= k + ell - 2


def test_preprocessing_file_roundtrip(tmp_path):
    F1 = ff.with_preprocessing(ff.FieldSpec.binary(16), rng_seed=2)
    F2 = ff.with_preprocessing(ff.FieldSpec.prime(97), rng_seed=3)
    path = tmp_path / "pre.txt"
    condense.save_preprocessing(path, [F1, F2])
    loaded = condense.load_preprocessing(path)
    assert loaded == [F1, F2]
    # idempotent: saving again produces identical bytes
    path2 = tmp_path / "pre2.txt"
    condense.save_preprocessing(path2, loaded)
    assert path.read_text() == path2.read_text()


def test_plan_arithmetic_exactness_grid():
    # output and seed lengths match the formulas exactly for planned sets
    for (n, k, eps, alpha) in [
        (1 << 18, 200_000, 2**-6, 1.0),
        (1 << 20, 240_000, 2**-10, 1.0),
    ]:
        p = condense.plan_condenser(n, k, eps, alpha, "kt")
        assert p.m == math.ceil((1 + alpha) * k)
        assert p.ell == math.ceil((1 + 1 / alpha) * math.log2(n * k / eps))
    for (n, k, eps, alpha) in [(1 << 12, 256, 2**-8, 1.0), (1 << 14, 1 << 10, 2**-4, 0.5)]:
        p = condense.plan_condenser(n, k, eps, alpha, "rs")
        assert p.m == k
        assert p.ell_formula == math.ceil((1 + 1 / alpha) * math.log2(n * k / eps))
        assert p.ell >= p.ell_formula
