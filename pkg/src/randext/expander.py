"""Strongly explicit regular expanders with closed-form neighbor functions.

The base graph is the 8-regular discrete-torus expander on Z_m x Z_m whose
vertices are pairs (x, y) and whose edges come from the four affine maps

    (x, y) -> (x + 2y, y)      (x, y) -> (x, y + 2x)
    (x, y) -> (x + 2y + 1, y)  (x, y) -> (x, y + 2x + 1)

and their inverses.  Its normalized second eigenvalue is at most
5*sqrt(2)/8 ~= 0.8839 for every m.  Powering the graph s times gives degree
8^s and spectral bound (5*sqrt(2)/8)^s, with a neighbor function that just
applies s base steps, so any target bound is reachable while neighbors stay
computable in O(log n) word operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bits import BitString

BASE_DEGREE = 8
BASE_LAMBDA = 5.0 * math.sqrt(2.0) / 8.0

# Start vertices are parsed from ceil(log2 n) + START_SLACK_BITS bits and
# reduced mod n; the modulo bias 2^-START_SLACK_BITS is charged to sampler
# error budgets.
START_SLACK_BITS = 32


@dataclass(frozen=True)
class ExpanderSpec:
    n: int  # vertex count (a perfect square)
    D: int  # degree = 8^power
    lam: float  # certified spectral bound = BASE_LAMBDA^power
    power: int
    base_m: int  # torus side length

    def __post_init__(self):
        if self.base_m < 1 or self.n != self.base_m * self.base_m:
            raise ValueError("n must equal base_m^2")
        if self.D != BASE_DEGREE**self.power or self.power < 1:
            raise ValueError("D must equal 8^power")
        if self.lam > BASE_LAMBDA**self.power + 1e-12:
            raise ValueError("lambda below the certified bound")

    @classmethod
    def build(cls, min_n: int, max_lambda: float = BASE_LAMBDA) -> "ExpanderSpec":
        """Smallest torus covering min_n vertices, powered until the spectral
        bound reaches max_lambda."""
        if min_n < 1:
            raise ValueError("min_n must be positive")
        m = math.isqrt(min_n)
        if m * m < min_n:
            m += 1
        m = max(m, 2)
        power = 1
        lam = BASE_LAMBDA
        while lam > max_lambda and power < 512:
            power += 1
            lam *= BASE_LAMBDA
        return cls(n=m * m, D=BASE_DEGREE**power, lam=lam, power=power, base_m=m)

    @property
    def label_bits(self) -> int:
        return 3 * self.power

    @property
    def start_bits(self) -> int:
        # power-of-two vertex counts parse bias-free with exact bits; other
        # counts take extra slack so the modulo bias is <= 2^-32
        if self.n & (self.n - 1) == 0:
            return self.n.bit_length() - 1
        return (self.n - 1).bit_length() + START_SLACK_BITS

    def seed_bits(self, walk_len: int) -> int:
        return self.start_bits + walk_len * self.label_bits


def _base_step(x: int, y: int, e: int, m: int) -> tuple[int, int]:
    # e in [8]: map index e >> 1, inverse if e & 1
    j = e >> 1
    if j == 0:
        return ((x + 2 * y) % m, y) if not e & 1 else ((x - 2 * y) % m, y)
    if j == 1:
        return ((x + 2 * y + 1) % m, y) if not e & 1 else ((x - 2 * y - 1) % m, y)
    if j == 2:
        return (x, (y + 2 * x) % m) if not e & 1 else (x, (y - 2 * x) % m)
    return (x, (y + 2 * x + 1) % m) if not e & 1 else (x, (y - 2 * x - 1) % m)


def neighbor(v: int, e: int, spec: ExpanderSpec) -> int:
    """Deterministic neighbor of v under edge label e; the label decomposes
    into `power` base-8 digits applied in order (little-endian)."""
    if not 0 <= v < spec.n:
        raise ValueError("vertex out of range")
    if not 0 <= e < spec.D:
        raise ValueError("edge label out of range")
    m = spec.base_m
    x, y = divmod(v, m)
    for _ in range(spec.power):
        x, y = _base_step(x, y, e & 7, m)
        e >>= 3
    return x * m + y


def inverse_label(e: int, spec: ExpanderSpec) -> int:
    """Label e' with neighbor(neighbor(v, e), e') == v for every v."""
    digits = []
    for _ in range(spec.power):
        digits.append(e & 7)
        e >>= 3
    out = 0
    for d in digits:  # reverse order, each base step toggles its inverse bit
        out = (out << 3) | (d ^ 1)
    return out


def parse_start(bs: BitString, spec: ExpanderSpec, offset: int = 0) -> int:
    """Start vertex from a (log n + slack)-bit chunk, reduced mod n."""
    return bs.uint(offset, spec.start_bits) % spec.n


def walk(start_and_labels: BitString, length: int, spec: ExpanderSpec) -> list[int]:
    """Vertices of a length-`length` walk parsed from the bit string: start
    vertex chunk first, then one label chunk per step (little-endian chunks)."""
    need = spec.seed_bits(length)
    if len(start_and_labels) < need:
        raise ValueError(
            f"seed too short: need {need} bits for a length-{length} walk"
        )
    v = parse_start(start_and_labels, spec)
    out = [v]
    pos = spec.start_bits
    for _ in range(length):
        e = start_and_labels.uint(pos, spec.label_bits)
        pos += spec.label_bits
        v = neighbor(v, e, spec)
        out.append(v)
    return out


def walk_from_ints(start: int, labels: list[int], spec: ExpanderSpec) -> list[int]:
    v = start % spec.n
    out = [v]
    for e in labels:
        v = neighbor(v, e, spec)
        out.append(v)
    return out


def neighbor_vec(v, e, spec: ExpanderSpec):
    """Vectorized neighbor: v, e are numpy int64 arrays (labels must fit in
    int64, i.e. power <= 21)."""
    import numpy as np

    m = spec.base_m
    x, y = np.divmod(v.astype(np.int64), m)
    e = e.astype(np.int64).copy()
    for _ in range(spec.power):
        d = e & 7
        j = d >> 1
        inv = d & 1
        two_y = 2 * y
        two_x = 2 * x
        nx = np.where(j == 0, np.where(inv == 0, x + two_y, x - two_y), x)
        nx = np.where(j == 1, np.where(inv == 0, x + two_y + 1, x - two_y - 1), nx)
        ny = np.where(j == 2, np.where(inv == 0, y + two_x, y - two_x), y)
        ny = np.where(j == 3, np.where(inv == 0, y + two_x + 1, y - two_x - 1), ny)
        x = nx % m
        y = ny % m
        e >>= 3
    return x * m + y


def power_for_lambda(max_lambda: float) -> int:
    """Smallest s with BASE_LAMBDA^s <= max_lambda."""
    s = 1
    lam = BASE_LAMBDA
    while lam > max_lambda and s < 512:
        s += 1
        lam *= BASE_LAMBDA
    return s
