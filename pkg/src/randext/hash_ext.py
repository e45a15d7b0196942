"""Leftover-hash-based strong extractors.

hash_extract: seed y = (a, b), two w-bit elements of GF(2^w) with w = d/2 and
d = 2*ceil(m + log2 n + 2 log2(1/eps) + 4).  The source is split into w-bit
blocks x_1..x_B and hashed by Horner:

    v = sum_i x_i a^i,    output = low m bits of (b*v + b) = low_m(b*(v + 1)).

The multiplicative b (rather than a purely additive offset) is what makes the
truncated family almost-universal: for x != x', either the difference
polynomial vanishes at a (probability <= B * 2^-w) or b*(nonzero) is uniform,
so collisions happen with probability <= 2^-m + B * 2^-w.  The leftover hash
lemma then bounds the extraction error by

    eps_bound = 0.5 * 2^((m-k)/2) + 0.5 * sqrt(B * 2^(m-w)),

which the planner requires to be at most the requested eps (the classical
sufficient condition m <= k - 4 log2(16/eps) is recorded alongside but the
budget check is the binding gate).  For x = 0 the output is the low m bits of
b.

short_seed_extract splits the source into t equal blocks and performs block
extraction with t copies of hash_extract, giving output >= k/2 with seed
d <= k/t + O(log(n/eps)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import blocks, ff
from .bits import BitString
from .errors import InfeasibleParametersError

_FIELD_CACHE: dict[int, ff.FieldSpec] = {}


def _hash_field(w: int) -> ff.FieldSpec:
    F = _FIELD_CACHE.get(w)
    if F is None:
        F = ff.FieldSpec.binary(w)
        _FIELD_CACHE[w] = F
    return F


@dataclass(frozen=True)
class HashExtParams:
    n: int
    k: int
    m: int
    eps: float  # requested (claimed) error
    d: int
    w: int
    block_count: int
    eps_bound: float  # realized leftover-hash budget
    lemma_regime: bool  # m <= k - 4 log2(16/eps)

    @classmethod
    def plan(cls, n: int, k: int, m: int, eps: float) -> "HashExtParams":
        if not 0 < eps < 1:
            raise InfeasibleParametersError("eps must lie in (0,1)")
        if not 1 <= m:
            raise InfeasibleParametersError("m must be positive")
        if not 1 <= k <= n:
            raise InfeasibleParametersError("need 1 <= k <= n")
        d = 2 * math.ceil(m + math.log2(n) + 2 * math.log2(1.0 / eps) + 4)
        w = d // 2
        B = math.ceil(n / w)
        bound = 0.5 * 2.0 ** ((m - k) / 2.0) + 0.5 * math.sqrt(B * 2.0 ** (m - w))
        if bound > eps:
            raise InfeasibleParametersError(
                f"hash error budget violated: realized bound {bound:.4g} > eps "
                f"= {eps:.4g} (n={n}, k={k}, m={m})"
            )
        lemma = m <= k - 4 * math.log2(16.0 / eps)
        return cls(
            n=n, k=k, m=m, eps=eps, d=d, w=w, block_count=B,
            eps_bound=bound, lemma_regime=lemma,
        )


def hash_extract(
    x: BitString, y: BitString, params: HashExtParams, append_seed: bool = False
) -> BitString:
    """Low m bits of b*(p_x(a) + 1); with append_seed the seed follows the
    output (the variant block extraction chains on)."""
    if len(x) != params.n:
        raise ValueError(f"source must be {params.n} bits")
    if len(y) != params.d:
        raise ValueError(f"seed must be {params.d} bits")
    F = _hash_field(params.w)
    w = params.w
    a = y.uint(0, w)
    b = y.uint(w, w)
    acc = 0
    # Horner over blocks, highest index first: v = sum_i x_i a^i
    chunks = list(x.iter_uints(w))
    for xi in reversed(chunks):
        acc = F.mul(acc, a) ^ xi
    v = F.mul(acc, a)
    h = F.mul(b, v) ^ b
    out = BitString(h & ((1 << params.m) - 1), params.m)
    return out + y if append_seed else out


@dataclass(frozen=True)
class HashExtractor:
    """Extractor handle wrapping hash_extract."""

    params: HashExtParams

    @property
    def n(self):
        return self.params.n

    @property
    def d(self):
        return self.params.d

    @property
    def m(self):
        return self.params.m

    @property
    def k(self):
        return self.params.k

    @property
    def eps(self):
        return self.params.eps

    def extract(self, x: BitString, y: BitString) -> BitString:
        return hash_extract(x, y, self.params)


def plan_hash(n: int, k: int, m: int, eps: float) -> HashExtractor:
    return HashExtractor(HashExtParams.plan(n, k, m, eps))


# ---------------------------------------------------------------------------
# seed shorter than output: split into t blocks and chain


@dataclass(frozen=True)
class ShortSeedParams:
    n: int
    t: int
    eps: float
    k: int  # (1 - 1/(20t)) n
    n_block: int
    k_block: float
    m_block: int
    eps_block: float
    hash_params: HashExtParams

    @property
    def d(self) -> int:
        return self.hash_params.d

    @property
    def m(self) -> int:
        return self.t * self.m_block

    @classmethod
    def plan(cls, n: int, eps: float, t: int) -> "ShortSeedParams":
        if t < 1:
            raise InfeasibleParametersError("t must be >= 1")
        if eps <= 2.0 ** (-n / (50.0 * t)):
            raise InfeasibleParametersError(
                f"eps > 2^(-n/50t) violated (n={n}, t={t})"
            )
        k = math.floor((1.0 - 1.0 / (20.0 * t)) * n)
        eps_block = eps / (2.0 * t)
        n_block = n // t
        if n_block < 4:
            raise InfeasibleParametersError("blocks too short after the split")
        k_block = n_block - n / (20.0 * t) - math.log2(1.0 / eps_block)
        if k_block < 1:
            raise InfeasibleParametersError("per-block entropy went nonpositive")
        m_block = max(1, math.ceil(k / (2 * t)))
        hp = HashExtParams.plan(n_block, math.floor(k_block), m_block, eps_block)
        return cls(
            n=n, t=t, eps=eps, k=k, n_block=n_block, k_block=k_block,
            m_block=m_block, eps_block=eps_block, hash_params=hp,
        )


def short_seed_extract(x: BitString, y: BitString, params: ShortSeedParams) -> BitString:
    """Split x into t equal blocks, chain hash extraction right to left; the
    trailing n mod t bits of x are dropped (the plan's k already charges
    them)."""
    if len(x) != params.n:
        raise ValueError("source length mismatch")
    t = params.t
    ext = HashExtractor(params.hash_params)
    if t == 1:
        return ext.extract(x[: params.n_block], y)
    blocks_list = [
        x[i * params.n_block : (i + 1) * params.n_block] for i in range(t)
    ]
    schedule = blocks.schedule_from_extractors(
        [ext] * t, entropies=[params.k_block] * t
    )
    return blocks.block_extract(blocks_list, y, [ext] * t, schedule)


@dataclass(frozen=True)
class ShortSeedExtractor:
    params: ShortSeedParams

    @property
    def n(self):
        return self.params.n

    @property
    def d(self):
        return self.params.d

    @property
    def m(self):
        return self.params.m

    @property
    def k(self):
        return self.params.k

    @property
    def eps(self):
        return self.params.eps

    def extract(self, x: BitString, y: BitString) -> BitString:
        return short_seed_extract(x, y, self.params)


def plan_short_seed(n: int, eps: float, t: int) -> ShortSeedExtractor:
    return ShortSeedExtractor(ShortSeedParams.plan(n, eps, t))
