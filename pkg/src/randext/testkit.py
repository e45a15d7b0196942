"""Brute-force oracles and statistical estimators used by the acceptance
suite and the CLI self-test.

Every oracle is implemented independently of the operation it checks (the
only shared code is scalar field arithmetic).  Randomized estimators derive
their streams from an explicit master seed and report their statistical
resolution so thresholds can be stated as bound + 3*sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ff
from .bits import BitString


# ---------------------------------------------------------------------------
# explicit distributions and statistical distance


@dataclass
class ExplicitDistribution:
    """A distribution over n_bits-bit strings with explicit outcome
    probabilities (index = outcome value, LSB-first)."""

    n_bits: int
    probs: np.ndarray

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)
        if self.n_bits > 24:
            raise ValueError("support larger than 2^24")
        if self.probs.shape != (1 << self.n_bits,):
            raise ValueError("probability vector has wrong length")
        if abs(float(self.probs.sum()) - 1.0) > 2.0**-40:
            raise ValueError("probabilities do not sum to 1")

    @classmethod
    def uniform(cls, n_bits: int) -> "ExplicitDistribution":
        n = 1 << n_bits
        return cls(n_bits, np.full(n, 1.0 / n))

    @classmethod
    def from_counts(cls, n_bits: int, counts: np.ndarray) -> "ExplicitDistribution":
        counts = np.asarray(counts, dtype=np.float64)
        return cls(n_bits, counts / counts.sum())


def tv_exact(P: ExplicitDistribution, Q: ExplicitDistribution) -> float:
    """Statistical distance, exactly: half the L1 distance."""
    if P.n_bits != Q.n_bits:
        raise ValueError("distributions over different lengths")
    return 0.5 * float(np.abs(P.probs - Q.probs).sum())


def tv_counts_vs_uniform(counts: np.ndarray, total: int) -> float:
    """TV between the exact distribution counts/total and uniform, without
    materializing an ExplicitDistribution (for supports above 2^24)."""
    n = counts.shape[0]
    return 0.5 * float(np.abs(counts.astype(np.float64) / total - 1.0 / n).sum())


def tv_monte_carlo(sampler, m_bits: int, trials: int, master_seed: int):
    """Plug-in TV estimate of sampler's output against uniform on m_bits bits.

    sampler(batch_size, rng) must return an int array of outcomes in
    [0, 2^m_bits).  Returns (estimate, sigma) with sigma = sqrt(2^m / trials),
    the standard additive resolution of the plug-in estimator.
    """
    if m_bits > 16:
        raise ValueError("m_bits > 16 not supported by the plug-in estimator")
    nbins = 1 << m_bits
    if trials < 4 * nbins:
        raise ValueError("too few trials for the requested resolution")
    rng = np.random.default_rng(np.random.SeedSequence(master_seed))
    counts = np.zeros(nbins, dtype=np.int64)
    done = 0
    batch = min(trials, 1 << 15)
    while done < trials:
        take = min(batch, trials - done)
        out = np.asarray(sampler(take, rng), dtype=np.int64)
        counts += np.bincount(out, minlength=nbins)
        done += take
    est = 0.5 * float(np.abs(counts / trials - 1.0 / nbins).sum())
    sigma = math.sqrt(nbins / trials)
    return est, sigma


# ---------------------------------------------------------------------------
# bias of explicit sets


def exhaustive_bias(rows, k: int) -> float:
    """Exact maximum bias of the multiset S of k-bit rows over every nonzero
    linear test, via a Walsh-Hadamard transform of the outcome histogram.

    rows: iterable of ints (the set elements).  Requires k <= 16 and
    |S| <= 2^22.
    """
    if k > 16:
        raise ValueError("exhaustive_bias supports k <= 16")
    counts = np.zeros(1 << k, dtype=np.float64)
    n = 0
    for r in rows:
        counts[r] += 1.0
        n += 1
        if n > (1 << 22):
            raise ValueError("set too large to enumerate")
    if n == 0:
        raise ValueError("empty set")
    # in-place Walsh-Hadamard transform
    h = 1
    size = 1 << k
    while h < size:
        for i in range(0, size, 2 * h):
            a = counts[i : i + h].copy()
            b = counts[i + h : i + 2 * h].copy()
            counts[i : i + h] = a + b
            counts[i + h : i + 2 * h] = a - b
        h *= 2
    return float(np.max(np.abs(counts[1:])) / n)


# ---------------------------------------------------------------------------
# flat test sources


class FlatSource:
    """Uniform distribution over a structured 2^k-element subset of n-bit
    strings; the extremal shape for min-entropy k."""

    def __init__(self, kind: str, n: int, k: int, instance_seed: int):
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        self.kind = kind
        self.n = n
        self.k = k
        rng = np.random.default_rng(np.random.SeedSequence((instance_seed, hash(kind) & 0xFFFF)))
        if kind == "prefix_fixed":
            # first n-k bit positions frozen, top k free
            self.free_positions = np.arange(n - k, n)
            fixed = int.from_bytes(rng.bytes((n + 7) // 8), "little") & ((1 << n) - 1)
        elif kind == "suffix_fixed":
            self.free_positions = np.arange(k)
            fixed = int.from_bytes(rng.bytes((n + 7) // 8), "little") & ((1 << n) - 1)
        elif kind == "subcube":
            # bit-fixing source: k free coordinates scattered over [n]
            self.free_positions = np.sort(rng.choice(n, size=k, replace=False))
            fixed = int.from_bytes(rng.bytes((n + 7) // 8), "little") & ((1 << n) - 1)
        elif kind == "parity":
            # an affine subspace of dimension k cut out by parity constraints:
            # free bits at positions [0, k); each of the remaining n-k bits is
            # a seeded parity of the free bits plus a constant
            self.free_positions = np.arange(k)
            fixed = 0
            self._parity_masks = [
                (int.from_bytes(rng.bytes((k + 7) // 8), "little") & ((1 << k) - 1))
                for _ in range(n - k)
            ]
            self._parity_const = int.from_bytes(rng.bytes((n + 7) // 8), "little")
        else:
            raise ValueError(f"unknown flat source kind {kind!r}")
        free_mask = 0
        for p in self.free_positions:
            free_mask |= 1 << int(p)
        self._free_mask = free_mask
        self._fixed = fixed & ~free_mask if kind != "parity" else 0

    def outcome(self, index: int) -> int:
        """The index-th support element (index < 2^k)."""
        if self.kind == "parity":
            v = index
            for j, mask in enumerate(self._parity_masks):
                bit = ((index & mask).bit_count() + (self._parity_const >> j)) & 1
                v |= bit << (self.k + j)
            return v
        v = self._fixed
        for j, p in enumerate(self.free_positions):
            if (index >> j) & 1:
                v |= 1 << int(p)
        return v

    def support(self):
        """All 2^k support elements (k <= 20 only)."""
        if self.k > 20:
            raise ValueError("support too large to enumerate")
        return [self.outcome(i) for i in range(1 << self.k)]

    def sample_indices(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if self.k < 62:
            return rng.integers(0, 1 << self.k, size=count, dtype=np.int64)
        words = (self.k + 31) // 32
        out = np.zeros(count, dtype=object)
        for _ in range(words):
            out = out * (1 << 32) + rng.integers(0, 1 << 32, size=count)
        return out % (1 << self.k)

    def sample(self, rng: np.random.Generator) -> BitString:
        idx = int(self.sample_indices(1, rng)[0])
        return BitString(self.outcome(idx), self.n)

    def min_entropy_exact(self) -> float:
        """By direct count over the explicit support (small k only)."""
        sup = self.support()
        assert len(set(sup)) == len(sup)
        return math.log2(len(sup))


def flat_source(kind: str, n: int, k: int, instance_seed: int = 0) -> FlatSource:
    return FlatSource(kind, n, k, instance_seed)


# ---------------------------------------------------------------------------
# naive polynomial oracles


def naive_poly_eval(f, x, F: ff.FieldSpec):
    """Horner's rule, one point; the reference oracle for evaluation paths."""
    acc = 0
    for c in reversed(list(f)):
        acc = F.add(F.mul(acc, x), c)
    return acc


def naive_multipoint(f, points, F: ff.FieldSpec):
    return [naive_poly_eval(f, x, F) for x in points]


def batch_horner_prime(f, points, p: int) -> np.ndarray:
    """Vectorized Horner over GF(p) for p < 2^31 (the naive oracle's batched
    form, used for bulk checks and as the quadratic baseline in benchmarks).
    For the Mersenne prime 2^31 - 1 the reduction uses shift folding."""
    pts = np.asarray(points, dtype=np.int64)
    acc = np.zeros_like(pts)
    mersenne = p == (1 << 31) - 1
    for c in reversed(list(f)):
        v = acc * pts + c
        if mersenne:
            v = (v & p) + (v >> 31)
            v = (v & p) + (v >> 31)
            v = np.where(v >= p, v - p, v)
            acc = v
        else:
            acc = v % p
    return acc


def naive_derivatives(f, alpha, t, F: ff.FieldSpec):
    """Differentiate coefficient-wise t times, Horner-evaluating each order."""
    out = []
    g = list(f)
    for _ in range(t + 1):
        out.append(naive_poly_eval(g, alpha, F))
        g = [F.mul(i, c) for i, c in enumerate(g)][1:]
        while g and g[-1] == 0:
            g.pop()
    return out


# ---------------------------------------------------------------------------
# weak design verification


def verify_weak_design(sets, ell: int, rho: float, d: int):
    """Exact check of the weak-design inequality sum_{j<i} 2^|S_i ^ S_j| <=
    rho*(m-1) plus cardinality and range; returns (ok, first_violation)."""
    m = len(sets)
    as_sets = [frozenset(s) for s in sets]
    for i, s in enumerate(as_sets):
        if len(s) != ell or len(sets[i]) != ell:
            return False, ("cardinality", i)
        if any(not 0 <= v < d for v in s):
            return False, ("range", i)
    bound = rho * (m - 1)
    for i in range(m):
        total = 0
        si = as_sets[i]
        for j in range(i):
            total += 1 << len(si & as_sets[j])
        if total > bound:
            return False, ("overlap", i)
    return True, None


# ---------------------------------------------------------------------------
# collision entropy


def collision_entropy_estimate(stream, trials: int, master_seed: int) -> float:
    """-log2 of the unbiased pairwise-collision estimator over `trials` draws.

    stream(batch_size, rng) returns hashable outcomes (ints).  Returns +inf
    when no collision is observed.
    """
    if trials < 10**6:
        raise ValueError("need at least 1e6 trials for +-1 bit resolution")
    rng = np.random.default_rng(np.random.SeedSequence(master_seed))
    counts: dict[int, int] = {}
    done = 0
    while done < trials:
        take = min(1 << 15, trials - done)
        for v in stream(take, rng):
            v = int(v)
            counts[v] = counts.get(v, 0) + 1
        done += take
    pairs = sum(c * (c - 1) // 2 for c in counts.values())
    total_pairs = trials * (trials - 1) // 2
    if pairs == 0:
        return float("inf")
    return -math.log2(pairs / total_pairs)


# ---------------------------------------------------------------------------
# chi-square uniformity (no scipy dependency at runtime)


def _gammainc_upper_reg(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) by series / continued
    fraction (Numerical-Recipes style)."""
    if x < 0 or s <= 0:
        raise ValueError("bad arguments")
    if x == 0:
        return 1.0
    lg = math.lgamma(s)
    if x < s + 1.0:
        # lower series
        term = 1.0 / s
        total = term
        a = s
        for _ in range(10_000):
            a += 1.0
            term *= x / a
            total += term
            if abs(term) < abs(total) * 1e-15:
                break
        p = total * math.exp(-x + s * math.log(x) - lg)
        return 1.0 - p
    # continued fraction for the upper function
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return h * math.exp(-x + s * math.log(x) - lg)


def chi_square_uniform_pvalue(counts: np.ndarray) -> float:
    """P-value of the chi-square test of uniformity over the given bin
    counts."""
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    k = counts.shape[0]
    expected = n / k
    stat = float(((counts - expected) ** 2 / expected).sum())
    return _gammainc_upper_reg((k - 1) / 2.0, stat / 2.0)
