"""Composition machinery: block-source extraction, output boosting with
independent seeds, inner/outer seed composition, block-source sampling, and
block subsampling.

Extractor handles are duck-typed: an object with integer attributes ``n``,
``d``, ``m``, ``k``, float ``eps``, and ``extract(x, y) -> BitString``.

Block extraction chains right to left.  Stage i exposes out_i concatenated
with its own seed (strong extractors keep the pair jointly uniform); the next
stage's seed is the first d_{i-1} bits of that and the rest is surplus, so
feasibility needs m_i >= d_{i-1} - d_i and the total output length is
m_1 + sum_{i>=2} (m_i - (d_{i-1} - d_i)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import samplers
from .bits import BitString, concat_all
from .errors import InfeasibleParametersError


def gather_bits(x: BitString, indices) -> BitString:
    arr = x.to_numpy()
    idx = np.asarray(list(indices), dtype=np.int64)
    return BitString.from_numpy(arr[idx])


# ---------------------------------------------------------------------------
# block-source extraction


@dataclass(frozen=True)
class BlockSchedule:
    lengths: tuple[int, ...]  # n_1..n_t
    entropies: tuple[float, ...]  # k_1..k_t
    errors: tuple[float, ...]
    seeds: tuple[int, ...]  # d_1..d_t
    outputs: tuple[int, ...]  # m_1..m_t

    def __post_init__(self):
        t = len(self.lengths)
        if not (len(self.entropies) == len(self.errors) == len(self.seeds) == len(self.outputs) == t):
            raise ValueError("schedule fields must have equal length")
        for i in range(1, t):
            if self.outputs[i] < self.seeds[i - 1] - self.seeds[i]:
                raise InfeasibleParametersError(
                    f"chaining infeasible at stage {i + 1}: "
                    f"m_{i + 1} = {self.outputs[i]} < d_{i} - d_{i + 1} = "
                    f"{self.seeds[i - 1] - self.seeds[i]}"
                )

    @property
    def t(self) -> int:
        return len(self.lengths)

    @property
    def total_output(self) -> int:
        m = self.outputs[0]
        for i in range(1, self.t):
            m += self.outputs[i] - (self.seeds[i - 1] - self.seeds[i])
        return m

    @property
    def total_error(self) -> float:
        return float(sum(self.errors))


def schedule_from_extractors(extractors, entropies=None) -> BlockSchedule:
    return BlockSchedule(
        lengths=tuple(e.n for e in extractors),
        entropies=tuple(entropies if entropies is not None else (e.k for e in extractors)),
        errors=tuple(e.eps for e in extractors),
        seeds=tuple(e.d for e in extractors),
        outputs=tuple(e.m for e in extractors),
    )


def block_extract(blocks, y: BitString, extractors, schedule: BlockSchedule) -> BitString:
    """Right-to-left chain; returns out_1 followed by the stage surpluses."""
    t = schedule.t
    if len(blocks) != t or len(extractors) != t:
        raise ValueError("blocks/extractors do not match the schedule")
    for i, blk in enumerate(blocks):
        if len(blk) != schedule.lengths[i]:
            raise ValueError(f"block {i} has length {len(blk)} != {schedule.lengths[i]}")
        if extractors[i].n != schedule.lengths[i]:
            raise ValueError(f"extractor {i} input length mismatch")
        if extractors[i].d != schedule.seeds[i]:
            raise ValueError(f"extractor {i} seed length mismatch")
    if len(y) != schedule.seeds[-1]:
        raise ValueError(f"seed must be d_t = {schedule.seeds[-1]} bits")
    surpluses = []
    carry = y
    for i in range(t - 1, 0, -1):
        out = extractors[i].extract(blocks[i], carry)
        avail = out + carry  # out_i o y_i, jointly uniform for strong stages
        d_prev = schedule.seeds[i - 1]
        surpluses.append(avail[d_prev:])
        carry = avail[:d_prev]
    final = extractors[0].extract(blocks[0], carry)
    # out_1 first, then surpluses in stage order 2..t
    return concat_all([final] + surpluses[::-1])


# ---------------------------------------------------------------------------
# output boosting and in/out composition


@dataclass(frozen=True)
class BoostedExtractor:
    ext1: object
    ext2: object
    g: int

    def __post_init__(self):
        if self.ext1.n != self.ext2.n:
            raise ValueError("boost operands take different input lengths")
        if self.ext2.k > self.ext1.k - self.ext1.m - self.g:
            raise InfeasibleParametersError(
                "boost entropy accounting violated: need k2 <= k1 - m1 - g "
                f"({self.ext2.k} > {self.ext1.k} - {self.ext1.m} - {self.g})"
            )

    @property
    def n(self):
        return self.ext1.n

    @property
    def d(self):
        return self.ext1.d + self.ext2.d

    @property
    def m(self):
        return self.ext1.m + self.ext2.m

    @property
    def k(self):
        return self.ext1.k

    @property
    def eps(self):
        return self.ext1.eps / (1.0 - 2.0**-self.g) + self.ext2.eps

    def extract(self, x: BitString, y: BitString) -> BitString:
        if len(y) != self.d:
            raise ValueError("seed length mismatch")
        y1 = y[: self.ext1.d]
        y2 = y[self.ext1.d :]
        return self.ext1.extract(x, y1) + self.ext2.extract(x, y2)


def boost_output(ext1, ext2, g: int) -> BoostedExtractor:
    return BoostedExtractor(ext1=ext1, ext2=ext2, g=g)


@dataclass(frozen=True)
class ComposedInOut:
    """Ext(x, y) = Ext_out(left half, Ext_in(right half, y))."""

    ext_in: object
    ext_out: object

    def __post_init__(self):
        if self.ext_in.m != self.ext_out.d:
            raise ValueError(
                f"inner output length {self.ext_in.m} != outer seed length {self.ext_out.d}"
            )
        if self.ext_in.n != self.ext_out.n:
            raise ValueError("halves must have equal length")

    @property
    def n(self):
        return self.ext_in.n + self.ext_out.n

    @property
    def d(self):
        return self.ext_in.d

    @property
    def m(self):
        return self.ext_out.m

    @property
    def k(self):
        # a (k = delta*n) source with delta >= 3/4 + k'/(n/2) suffices
        return min(self.n, math.ceil(0.75 * self.n + max(self.ext_in.k, self.ext_out.k)))

    @property
    def eps(self):
        return 4.0 * max(self.ext_in.eps, self.ext_out.eps)

    def extract(self, x: BitString, y: BitString) -> BitString:
        if len(x) != self.n:
            raise ValueError("input length mismatch")
        half = self.ext_in.n
        left = x[:half]
        right = x[half:]
        s = self.ext_in.extract(right, y)
        return self.ext_out.extract(left, s)


def compose_in_out(ext_in, ext_out) -> ComposedInOut:
    return ComposedInOut(ext_in=ext_in, ext_out=ext_out)


# ---------------------------------------------------------------------------
# block-source sampling


@dataclass(frozen=True)
class BlockSourcePlan:
    """Sample an increasing-block block source out of an (n', delta*n')
    source: one bounded-independence draw of m_t coordinates, blocks cut at
    the prefix sums."""

    n_prime: int
    delta: float
    zeta: float
    eps: float
    deltas: tuple[int, ...]  # increasing block lengths
    sampler: samplers.BISamplerSpec

    @property
    def t(self) -> int:
        return len(self.deltas)

    @property
    def cuts(self) -> tuple[int, ...]:
        out = []
        acc = 0
        for d in self.deltas:
            acc += d
            out.append(acc)
        return tuple(out)

    @property
    def m_total(self) -> int:
        return sum(self.deltas)

    @property
    def seed_bits(self) -> int:
        return self.sampler.d


def plan_block_source(
    n_prime: int,
    delta: float,
    zeta: float,
    eps: float,
    theta1: float = 0.8,
    theta2: float = 0.9,
    samp_cap: float = 0.5,
    eta: float = 0.25,
) -> BlockSourcePlan:
    """Geometric schedule Delta_{i-1} = alpha * Delta_i with alpha =
    zeta*delta/4, largest block ~ n'^theta2, smallest ~ n'^theta1; the sample
    budget m_t <= samp_cap * n' replaces the asymptotic cap, recorded."""
    alpha = zeta * delta / 4.0
    if not 0 < alpha < 1:
        raise InfeasibleParametersError("zeta*delta/4 must lie in (0,1)")
    top = min(
        int(n_prime**theta2),
        int(samp_cap * n_prime * (1.0 - alpha)),
    )
    if top < 4:
        raise InfeasibleParametersError("source too short for a block schedule")
    bottom = max(4, int(n_prime**theta1))
    t = 1
    if bottom < top:
        t = 1 + max(0, math.floor(math.log(top / bottom) / math.log(1.0 / alpha)))
    deltas = []
    for i in range(t):
        deltas.append(max(4, math.floor(top * alpha ** (t - 1 - i))))
    m_total = sum(deltas)
    if m_total > n_prime:
        raise InfeasibleParametersError(
            f"schedule infeasible: sum of blocks {m_total} > n' = {n_prime}"
        )
    sampler = samplers.plan_bi_sampler(
        n_prime, m_max=m_total, delta_gamma=max(eps / (2.0 * t), 2.0**-64), eta=eta
    )
    return BlockSourcePlan(
        n_prime=n_prime, delta=delta, zeta=zeta, eps=eps,
        deltas=tuple(deltas), sampler=sampler,
    )


class BlockSourceContext:
    def __init__(self, plan: BlockSourcePlan):
        self.plan = plan
        self.ctx = samplers.BISamplerContext(plan.sampler)

    def make(self, x_prime: BitString, y: BitString) -> list[BitString]:
        plan = self.plan
        if len(x_prime) != plan.n_prime:
            raise ValueError("source length mismatch")
        sample = self.ctx.sample(y, plan.m_total)
        arr = x_prime.to_numpy()
        idx = np.asarray(sample.indices, dtype=np.int64)
        sel = arr[idx]
        blocks = []
        lo = 0
        for hi in plan.cuts:
            blocks.append(BitString.from_numpy(sel[lo:hi]))
            lo = hi
        return blocks


def make_block_source(x_prime: BitString, y: BitString, plan: BlockSourcePlan) -> list[BitString]:
    return BlockSourceContext(plan).make(x_prime, y)


# ---------------------------------------------------------------------------
# subsampling a block source down to decreasing lengths


@dataclass(frozen=True)
class SubsamplePlan:
    deltas: tuple[int, ...]  # incoming block lengths (increasing)
    ells: tuple[int, ...]  # outgoing block lengths (decreasing)
    specs: tuple[samplers.ExtendedRWSpec, ...]
    seed_bits: int  # max over the per-block prefix lengths

    @property
    def t(self) -> int:
        return len(self.deltas)


def plan_subsample(
    deltas: tuple[int, ...],
    eps: float,
    beta: float = 0.7,
    gamma_exp: float = 0.6,
    theta: float = 0.5,
) -> SubsamplePlan:
    """Geometrically decreasing lengths ell_1 = Delta_1^(beta/theta1-ish)
    ... ell_t, each sampled from its block with a shared seed prefix."""
    t = len(deltas)
    n_ref = deltas[-1]
    ell1 = max(8, min(deltas[0], int(round(n_ref**beta))))
    ellt = max(8, min(ell1, int(round(n_ref**gamma_exp))))
    if t > 1:
        ratio = (ellt / ell1) ** (1.0 / (t - 1))
    else:
        ratio = 1.0
    ells = []
    for i in range(t):
        ells.append(max(4, min(deltas[i], math.floor(ell1 * ratio**i))))
    gamma = max(eps / (2.0 * t), 2.0**-64)
    specs = []
    seed_bits = 0
    for i in range(t):
        spec = samplers.plan_extended(deltas[i], ells[i], gamma, theta)
        specs.append(spec)
        seed_bits = max(seed_bits, spec.seed_bits)
    return SubsamplePlan(
        deltas=tuple(deltas), ells=tuple(ells), specs=tuple(specs),
        seed_bits=seed_bits,
    )


def subsample_blocks(blocks, y: BitString, plan: SubsamplePlan) -> list[BitString]:
    """Per block, the extended sampler selects ell_i coordinates using the
    shared prefix rule (stage i reads the first seed_bits_i of y); outputs are
    zero-padded to the planned ell_i when rejection left a deficit."""
    if len(blocks) != plan.t:
        raise ValueError("block count mismatch")
    if len(y) < plan.seed_bits:
        raise ValueError("seed too short")
    out = []
    for i, blk in enumerate(blocks):
        spec = plan.specs[i]
        sample = samplers.extended_sampler(y[: spec.seed_bits], spec)
        idx = [j for j in sample.indices if j < len(blk)]
        got = gather_bits(blk, idx) if idx else BitString.zeros(0)
        want = plan.ells[i]
        if len(got) < want:
            got = got + BitString.zeros(want - len(got))
        out.append(got[:want])
    return out
