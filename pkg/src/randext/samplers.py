"""Averaging samplers with distinct samples.

Four layers:

* ``rw_sampler``     - the expander-walk sampler: parse (start, labels), walk,
                       skip repeats and out-of-range (padding) vertices.
* ``extend_sampler`` - domain extension [n] -> [m*n] by shifting copies.
* ``bi_generate``    - almost b-wise independent symbols from one small-bias
                       row, chunked ceil(log2 q) bits per symbol and reduced
                       mod n.
* ``bi_sampler``     - error-reduced bounded-independence sampler: walk over
                       the BI seed space, return the first visit whose symbols
                       contain enough distinct values (first occurrences
                       kept), with a flagged deterministic fallback.

Declared (confidence, accuracy) contracts follow the planning formulas; at
desk scale some certified constants are vacuous, which the spec records
(``contract`` field) rather than hiding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import codes, expander
from .bits import BitString
from .errors import InfeasibleParametersError

# Desk-scale sampler profile: theta-vs-walk-length constant and the cap on
# expander powering (label bits per step = 3 * power).
C_T_DEFAULT = 0.25
POWER_CAP_DEFAULT = 2
LOG2_INV_GAMMA_CAP = 400.0


@dataclass(frozen=True)
class IndexSample:
    """Ordered distinct coordinates in [n] with the sampler's declared
    (confidence, accuracy) contract attached."""

    indices: tuple[int, ...]
    n: int
    confidence: float
    accuracy: float
    failed: bool = False
    contract: str = "formula"  # 'formula' | 'vacuous'

    def __post_init__(self):
        if len(self.indices) == 0:
            raise ValueError("empty sample")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("sample indices must be distinct")
        if any(not 0 <= i < self.n for i in self.indices):
            raise ValueError("sample index out of range")


# ---------------------------------------------------------------------------
# expander-walk sampler


@dataclass(frozen=True)
class RWSpec:
    n: int  # sample universe (graph may be padded to a square above it)
    t: int  # walk vertices (labels used: t - 1)
    gamma: float
    theta: float
    graph: expander.ExpanderSpec

    @property
    def seed_bits(self) -> int:
        return self.graph.seed_bits(self.t - 1)

    @property
    def contract(self) -> str:
        return "formula" if self.graph.lam <= self.theta / 2 else "vacuous"


def plan_rw(
    n: int,
    gamma: float,
    theta: float,
    c_t: float = C_T_DEFAULT,
    power_cap: int = POWER_CAP_DEFAULT,
) -> RWSpec:
    """t = ceil(c_t * log2(1/gamma) / theta^2) walk vertices; the graph power
    targets lambda = theta/2 but is capped to keep label bits usable."""
    if not 0 < gamma < 1 or not 0 < theta < 1:
        raise InfeasibleParametersError("gamma, theta must lie in (0,1)")
    t = max(2, math.ceil(c_t * math.log2(1.0 / gamma) / (theta * theta)))
    power = min(expander.power_for_lambda(theta / 2.0), power_cap)
    graph = expander.ExpanderSpec(
        n=max(4, _next_square(n)),
        D=expander.BASE_DEGREE**power,
        lam=expander.BASE_LAMBDA**power,
        power=power,
        base_m=_isqrt_ceil(max(4, n)),
    )
    return RWSpec(n=n, t=t, gamma=gamma, theta=theta, graph=graph)


def _isqrt_ceil(n: int) -> int:
    m = math.isqrt(n)
    return m if m * m >= n else m + 1


def _next_square(n: int) -> int:
    m = _isqrt_ceil(n)
    return m * m


def rw_sampler(seed: BitString, spec: RWSpec) -> IndexSample:
    """Distinct vertices of a t-vertex walk; repeated and padding (>= n)
    vertices are skipped, so the sample may be shorter than t."""
    if len(seed) < spec.seed_bits:
        raise ValueError(f"seed too short: need {spec.seed_bits} bits")
    vs = expander.walk(seed, spec.t - 1, spec.graph)
    seen = set()
    out = []
    for v in vs:
        if v < spec.n and v not in seen:
            seen.add(v)
            out.append(v)
    if not out:  # all vertices landed in the padding region; keep totality
        out = [0]
    return IndexSample(
        indices=tuple(out),
        n=spec.n,
        confidence=spec.gamma,
        accuracy=spec.theta,
        failed=False,
        contract=spec.contract,
    )


def extend_sampler(base: IndexSample, m_factor: int) -> IndexSample:
    """Domain extension: (i, b) -> i * n + b for i < m_factor, preserving the
    contract and distinctness."""
    if m_factor < 1:
        raise ValueError("m_factor must be >= 1")
    n = base.n
    idx = tuple(i * n + b for i in range(m_factor) for b in base.indices)
    return IndexSample(
        indices=idx,
        n=m_factor * n,
        confidence=base.confidence,
        accuracy=base.accuracy,
        failed=base.failed,
        contract=base.contract,
    )


@dataclass(frozen=True)
class ExtendedRWSpec:
    """rw sampler + domain extension delivering `want` coordinates over a
    universe (with out-of-range rejection for the padded tail)."""

    universe: int
    want: int
    base: RWSpec
    m_factor: int

    @property
    def seed_bits(self) -> int:
        return self.base.seed_bits


def plan_extended(
    universe: int,
    want: int,
    gamma: float,
    theta: float,
    c_t: float = C_T_DEFAULT,
    power_cap: int = POWER_CAP_DEFAULT,
) -> ExtendedRWSpec:
    if not 1 <= want <= universe:
        raise InfeasibleParametersError("need 1 <= want <= universe")
    probe = plan_rw(universe, gamma, theta, c_t, power_cap)
    t = min(probe.t, want)
    m_factor = max(1, math.ceil(want / t))
    base_n = max(2, math.ceil(universe / m_factor))
    base = RWSpec(
        n=base_n, t=t, gamma=gamma, theta=theta,
        graph=expander.ExpanderSpec(
            n=_next_square(max(4, base_n)),
            D=probe.graph.D,
            lam=probe.graph.lam,
            power=probe.graph.power,
            base_m=_isqrt_ceil(max(4, base_n)),
        ),
    )
    return ExtendedRWSpec(universe=universe, want=want, base=base, m_factor=m_factor)


def extended_sampler(seed: BitString, spec: ExtendedRWSpec) -> IndexSample:
    base = rw_sampler(seed, spec.base)
    ext = extend_sampler(base, spec.m_factor)
    idx = tuple(i for i in ext.indices if i < spec.universe)[: spec.want]
    if not idx:
        idx = (0,)
    return IndexSample(
        indices=idx,
        n=spec.universe,
        confidence=ext.confidence,
        accuracy=ext.accuracy,
        failed=ext.failed,
        contract=ext.contract,
    )


# ---------------------------------------------------------------------------
# bounded-independence generator


@dataclass(frozen=True)
class BISpec:
    """(b, gamma)-wise independent generator over [n]^m, realized as one
    small-bias row chunked into ceil(log2 q)-bit symbols reduced mod n."""

    n: int
    m: int
    b: int
    gamma: float
    q_bits: int
    code: codes.BalancedCodeSpec

    @property
    def n_bits(self) -> int:
        return self.m * self.q_bits

    @property
    def d(self) -> int:
        """Seed bits: an index into the small-bias set."""
        return self.code.index_bits


def plan_bi(n: int, m: int, b: int, log2_inv_gamma: float) -> BISpec:
    if n < 2 or m < 1:
        raise InfeasibleParametersError("need n >= 2, m >= 1")
    q_bits = max(1, (n - 1).bit_length())
    n_bits = m * q_bits
    log2_inv_gamma = min(log2_inv_gamma, LOG2_INV_GAMMA_CAP)
    gamma = 2.0**-log2_inv_gamma
    code = codes.build_code(n_bits, gamma, mode="heuristic")
    return BISpec(n=n, m=m, b=b, gamma=gamma, q_bits=q_bits, code=code)


class BIContext:
    """Holds the row generator and caches for one BISpec."""

    def __init__(self, spec: BISpec):
        self.spec = spec
        self.gen = codes.SmallBiasGenerator(spec.code, spec.n_bits)
        self._weights = (1 << np.arange(spec.q_bits, dtype=np.int64))

    def generate_from_index(self, row_index: int) -> np.ndarray:
        row = self.gen.row(row_index)
        raw = np.frombuffer(
            row.to_bytes((self.spec.n_bits + 7) // 8, "little"), dtype=np.uint8
        )
        bits = np.unpackbits(raw, bitorder="little")[: self.spec.n_bits]
        chunks = bits.reshape(self.spec.m, self.spec.q_bits).astype(np.int64)
        syms = chunks @ self._weights
        return syms % self.spec.n

    def generate(self, z: BitString) -> np.ndarray:
        if len(z) != self.spec.d:
            raise ValueError(f"seed must be exactly {self.spec.d} bits")
        return self.generate_from_index(z.value % self.spec.code.n_bar)


def bi_generate(z: BitString, spec: BISpec) -> list[int]:
    """Symbols BI(z); deterministic in z."""
    return [int(v) for v in BIContext(spec).generate(z)]


# ---------------------------------------------------------------------------
# error-reduced bounded-independence sampler


@dataclass(frozen=True)
class BISamplerSpec:
    n: int
    m_max: int  # largest supported m_out
    eta: float
    delta_gamma: float
    b: int
    b_vacuous: bool
    bi: BISpec
    walk_graph: expander.ExpanderSpec
    walk_len: int

    @property
    def d(self) -> int:
        return self.bi.d + self.walk_len * self.walk_graph.label_bits

    @property
    def accuracy(self) -> float:
        return 2.0 * self.eta


def _select_b(eta: float, m_prime: int, delta_gamma: float) -> tuple[int, bool]:
    """Smallest b with b * log2(eta*sqrt(m')/(5*sqrt(b))) >= log2(8/delta);
    falls back to b = 2 (flagged) when the inequality has no solution."""
    target = math.log2(8.0 / delta_gamma)
    for b in range(1, 65):
        arg = eta * math.sqrt(m_prime) / (5.0 * math.sqrt(b))
        if arg <= 1.0:
            break
        if b * math.log2(arg) >= target:
            return b, False
    return 2, True


def plan_bi_sampler(
    n: int,
    m_max: int,
    delta_gamma: float,
    eta: float = 0.25,
    c_ell: float = 1.0,
    walk_power: int = 2,
) -> BISamplerSpec:
    if not 1 <= m_max <= n:
        raise InfeasibleParametersError("need 1 <= m_max <= n")
    m_prime = math.ceil((1.0 + eta) * m_max)
    theta = eta / 4.0
    b, vac = _select_b(eta, m_prime, delta_gamma)
    # gamma = min(delta * eta^b / 8, theta * n^(-b/2)), in logs
    log2_inv_gamma = max(
        math.log2(8.0 / delta_gamma) + b * math.log2(1.0 / eta),
        math.log2(1.0 / theta) + (b / 2.0) * math.log2(n),
    )
    bi = plan_bi(n, m_prime, b, log2_inv_gamma)
    walk_len = max(1, math.ceil(c_ell * math.log2(8.0 / delta_gamma) / b))
    seed_space = 1 << bi.d
    m_side = 1 << ((bi.d + 1) // 2)
    walk_graph = expander.ExpanderSpec(
        n=m_side * m_side,
        D=expander.BASE_DEGREE**walk_power,
        lam=expander.BASE_LAMBDA**walk_power,
        power=walk_power,
        base_m=m_side,
    )
    assert walk_graph.n >= seed_space
    return BISamplerSpec(
        n=n, m_max=m_max, eta=eta, delta_gamma=delta_gamma, b=b, b_vacuous=vac,
        bi=bi, walk_graph=walk_graph, walk_len=walk_len,
    )


class BISamplerContext:
    def __init__(self, spec: BISamplerSpec):
        self.spec = spec
        self.bi_ctx = BIContext(spec.bi)

    def sample_detailed(self, y: BitString, m_out: int) -> tuple[IndexSample, int]:
        """Returns (sample, visit): visit is the index of the walk vertex whose
        generation was selected, or -1 for the deterministic fallback.
        Truncations of one selected visit serve every smaller m_out, which is
        how one draw supplies a whole block schedule."""
        spec = self.spec
        if m_out > spec.m_max:
            raise ValueError("m_out exceeds the planned maximum")
        if len(y) != spec.d:
            raise ValueError(f"seed must be exactly {spec.d} bits")
        z0 = y.uint(0, spec.bi.d)
        pos = spec.bi.d
        seed_mod = 1 << spec.bi.d
        v = z0  # start vertex = the BI seed itself (no parsing bias)
        visited = [v]
        for _ in range(spec.walk_len):
            e = y.uint(pos, spec.walk_graph.label_bits)
            pos += spec.walk_graph.label_bits
            v = expander.neighbor(v, e, spec.walk_graph)
            visited.append(v)
        contract = "vacuous" if spec.b_vacuous else "formula"
        for visit, v in enumerate(visited):
            syms = self.bi_ctx.generate_from_index(
                (v % seed_mod) % spec.bi.code.n_bar
            )
            # first occurrences, generation order
            _, first_idx = np.unique(syms, return_index=True)
            first_idx.sort()
            distinct = syms[first_idx]
            if len(distinct) >= m_out:
                sample = IndexSample(
                    indices=tuple(int(t) for t in distinct[:m_out]),
                    n=spec.n,
                    confidence=spec.delta_gamma,
                    accuracy=spec.accuracy,
                    failed=False,
                    contract=contract,
                )
                return sample, visit
        fallback = IndexSample(
            indices=tuple(range(m_out)),
            n=spec.n,
            confidence=spec.delta_gamma,
            accuracy=spec.accuracy,
            failed=True,
            contract=contract,
        )
        return fallback, -1

    def sample(self, y: BitString, m_out: int) -> IndexSample:
        return self.sample_detailed(y, m_out)[0]


def bi_sampler(y: BitString, spec: BISamplerSpec, m_out: int) -> IndexSample:
    return BISamplerContext(spec).sample(y, m_out)
