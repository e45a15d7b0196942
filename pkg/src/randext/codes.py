"""Balanced codes and small-bias generators.

Base code: a Justesen-style concatenation.  The message is encoded with a
full rate-1/4 Reed-Solomon code over GF(q0), q0 = 2^ell0 with
q0 * log q0 = Theta(n0), and each outer symbol y at evaluation point a is
encoded by the rate-1/2 inner map y -> (y, a*y).  Overall rate 1/8 with bias
certificate eps0 = 37/40; the codeword is zero-padded up to the next perfect
square so it can serve as the vertex set of the torus expander, which relaxes
the certificate to eps0_eff = 1 - (1 - 37/40) * n0 / n0_padded.

Distance amplification: position i of the amplified code indexes a length-t
walk on the powered expander, and the amplified bit is the XOR of the t+1
visited base-codeword coordinates.  For even t this is (eps0 + 2*lambda)^(t/2)
balanced.

Certification modes.  With the torus expander's spectral constant, the
certified inequality forces astronomically long walks for any target bias
below eps0, so a spec may carry one of three certificates:

* ``lemma``     - (eps0 + 2*lambda)^(t/2) <= eps holds; sizes are typically
                  far beyond enumeration (indices are big ints; this is the
                  asymptotic-regime construction).
* ``measured``  - the exact bias of the full generated set was computed by
                  exhaustive enumeration and is <= eps (k <= 16 only).
* ``heuristic`` - the walk length follows an empirical halving model; the
                  recorded certified bias is min(1, lemma value), i.e. the
                  instance is *not* proof-backed.  Used by statistical smoke
                  paths where enumeration is impossible and lemma sizes are
                  unusable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import expander, ff
from .bits import BitString
from .errors import InfeasibleParametersError, UnsupportedParametersError

JUSTESEN_EPS0 = 37.0 / 40.0  # base-code bias certificate
JUSTESEN_RATE = 8  # message bits = n0 / 8

MEASURE_ENUM_LIMIT = 1 << 22


# ---------------------------------------------------------------------------
# Justesen base code


def _choose_ell0(k: int) -> int:
    # smallest ell0 with message capacity ell0 * 2^ell0 / 4 >= k
    for ell0 in range(2, 21):
        if ell0 * (1 << ell0) // 4 >= k:
            return ell0
    raise UnsupportedParametersError(
        f"message length {k} exceeds the largest supported base code"
    )


@dataclass(frozen=True)
class JustesenCode:
    k: int  # message bits
    ell0: int
    n0_raw: int  # q0 * 2 * ell0 before padding
    n0: int  # padded to a perfect square

    @classmethod
    def for_message_bits(cls, k: int) -> "JustesenCode":
        if k < 1:
            raise ValueError("message length must be positive")
        ell0 = _choose_ell0(k)
        q0 = 1 << ell0
        n0_raw = q0 * 2 * ell0
        m = math.isqrt(n0_raw)
        if m * m < n0_raw:
            m += 1
        return cls(k=k, ell0=ell0, n0_raw=n0_raw, n0=m * m)

    @property
    def q0(self) -> int:
        return 1 << self.ell0

    @property
    def outer_msg_symbols(self) -> int:
        return self.q0 // 4

    @property
    def field(self) -> ff.FieldSpec:
        return _base_field(self.ell0)

    @property
    def eps0_eff(self) -> float:
        return 1.0 - (1.0 - JUSTESEN_EPS0) * self.n0_raw / self.n0

    def message_symbols(self, x: BitString) -> np.ndarray:
        """Little-endian ell0-bit chunks, zero-padded to the RS message length."""
        if len(x) > self.k:
            raise ValueError("message longer than the code's message length")
        syms = np.zeros(self.outer_msg_symbols, dtype=np.int64)
        for i, v in enumerate(x.iter_uints(self.ell0)):
            if i >= len(syms):
                raise ValueError("message does not fit the outer code")
            syms[i] = v
        return syms

    def encode_bits_np(self, x: BitString) -> np.ndarray:
        """Codeword as a 0/1 uint8 array of length n0 (padded region zero)."""
        F = self.field
        log_np, exp_np = F.np_tables()
        q0 = self.q0
        qm1 = q0 - 1
        coeffs = self.message_symbols(x)
        pts_log = log_np[np.arange(q0)]  # log of each evaluation point; -1 at 0
        acc = np.zeros(q0, dtype=np.int64)
        for c in coeffs[::-1]:
            nz = (acc != 0) & (pts_log >= 0)
            prod = np.zeros_like(acc)
            prod[nz] = exp_np[(log_np[acc[nz]] + pts_log[nz]) % qm1]
            acc = prod ^ int(c)
        # inner map: symbol y at point a -> (y, a*y), 2*ell0 bits
        a_log = pts_log
        ay = np.zeros_like(acc)
        nz = (acc != 0) & (a_log >= 0)
        ay[nz] = exp_np[(log_np[acc[nz]] + a_log[nz]) % qm1]
        shifts = np.arange(self.ell0, dtype=np.int64)
        bits_y = (acc[:, None] >> shifts[None, :]) & 1
        bits_ay = (ay[:, None] >> shifts[None, :]) & 1
        inner = np.concatenate([bits_y, bits_ay], axis=1).astype(np.uint8)
        out = np.zeros(self.n0, dtype=np.uint8)
        out[: self.n0_raw] = inner.reshape(-1)
        return out

    def encode(self, x: BitString) -> BitString:
        return BitString.from_numpy(self.encode_bits_np(x))


@lru_cache(maxsize=32)
def _base_field(ell0: int) -> ff.FieldSpec:
    return ff.FieldSpec.binary(ell0)


def justesen_encode(x: BitString) -> BitString:
    """Concatenated base codeword of x (rate 1/8, bias certificate 37/40,
    zero-padded to a square length)."""
    return JustesenCode.for_message_bits(max(1, len(x))).encode(x)


def rs_encode(msg: list, eval_points: list, F: ff.FieldSpec) -> list:
    """Reed-Solomon encoding: evaluate the polynomial whose coefficients are
    msg at the given points."""
    if not 1 <= len(eval_points) <= F.q:
        raise ValueError("need 1 <= |eval_points| <= q")
    if len(msg) > len(eval_points):
        raise ValueError("more message symbols than evaluation points")
    return ff.multipoint_eval(ff.poly_trim(list(msg)), list(eval_points), F)


# ---------------------------------------------------------------------------
# amplified code spec


@dataclass(frozen=True)
class BalancedCodeSpec:
    k: int
    eps: float  # target bias
    base: JustesenCode
    graph: expander.ExpanderSpec
    t: int  # walk length (even)
    cert: str  # 'lemma' | 'measured' | 'heuristic'
    cert_bias: float  # proven bias: lemma value, or measured exact value
    measured_bias: float | None = None

    def __post_init__(self):
        if self.t % 2:
            raise ValueError("walk length t must be even")
        if self.graph.n != self.base.n0:
            raise ValueError("expander vertex count must equal base length")
        if self.cert == "lemma":
            base = self.base.eps0_eff + 2 * self.graph.lam
            if base >= 1.0 or base ** (self.t / 2) > self.eps * (1 + 1e-9):
                raise InfeasibleParametersError(
                    "amplification certificate violated: "
                    f"(eps0 + 2*lambda)^(t/2) = {base ** (self.t / 2) if base < 1 else float('inf'):.3g} "
                    f"> eps = {self.eps:.3g}"
                )

    @property
    def eps0(self) -> float:
        return self.base.eps0_eff

    @property
    def n0(self) -> int:
        return self.base.n0

    @property
    def D(self) -> int:
        return self.graph.D

    @property
    def lam(self) -> float:
        return self.graph.lam

    @property
    def n_bar(self) -> int:
        return self.base.n0 * self.graph.D**self.t

    @property
    def index_bits(self) -> int:
        return max(1, (self.n_bar - 1).bit_length())


def lemma_bias(eps0: float, lam: float, t: int) -> float:
    base = eps0 + 2 * lam
    if t == 0:
        # the t = 0 amplified code is the base code itself
        return eps0
    if base >= 1.0:
        return 1.0
    return base ** (t / 2)


def build_code_certified(k: int, eps: float) -> BalancedCodeSpec:
    """Lemma-certified construction: choose the power s and even walk length t
    minimizing s*t subject to (eps0 + 2*lambda^s)^(t/2) <= eps."""
    base = JustesenCode.for_message_bits(k)
    eps0 = base.eps0_eff
    if not 0 < eps < 1:
        raise InfeasibleParametersError("target bias must lie in (0, 1)")
    best = None
    for s in range(1, 400):
        lam = expander.BASE_LAMBDA**s
        b = eps0 + 2 * lam
        if b >= 1.0:
            continue
        # smallest even t with b^(t/2) <= eps, plus a safety increment for
        # floating-point slack in the log computation
        half = math.ceil(math.log(eps) / math.log(b))
        while b**half > eps:
            half += 1
        t = 2 * half
        if best is None or s * t < best[0] * best[1]:
            best = (s, t)
        if b < eps:  # larger s cannot reduce s*t much further
            break
    if best is None:
        raise InfeasibleParametersError(
            "no power makes eps0 + 2*lambda < 1; base bias too large"
        )
    s, t = best
    graph = expander.ExpanderSpec(
        n=base.n0,
        D=expander.BASE_DEGREE**s,
        lam=expander.BASE_LAMBDA**s,
        power=s,
        base_m=math.isqrt(base.n0),
    )
    return BalancedCodeSpec(
        k=k, eps=eps, base=base, graph=graph, t=t, cert="lemma",
        cert_bias=lemma_bias(eps0, graph.lam, t),
    )


def build_code_heuristic(k: int, eps: float, power: int = 1) -> BalancedCodeSpec:
    """Budgeted construction for statistical work: t follows an empirical
    halving model (one bias halving per two walk steps), and the recorded
    certified bias is the (typically vacuous) lemma value."""
    base = JustesenCode.for_message_bits(k)
    t = 2 * max(1, math.ceil(math.log2(1.0 / eps) / 2.0))
    graph = expander.ExpanderSpec(
        n=base.n0,
        D=expander.BASE_DEGREE**power,
        lam=expander.BASE_LAMBDA**power,
        power=power,
        base_m=math.isqrt(base.n0),
    )
    return BalancedCodeSpec(
        k=k, eps=eps, base=base, graph=graph, t=t, cert="heuristic",
        cert_bias=lemma_bias(base.eps0_eff, graph.lam, t),
    )


def build_code_measured(k: int, eps: float) -> BalancedCodeSpec:
    """Exhaustively verified construction: smallest enumerable (power, t)
    whose exact bias is <= eps.  Only for k <= 16."""
    if k > 16:
        raise UnsupportedParametersError("measured certification needs k <= 16")
    base = JustesenCode.for_message_bits(k)
    candidates = []
    for s in (1, 2):
        for t in (0, 2, 4, 6):
            n_bar = base.n0 * (expander.BASE_DEGREE**s) ** t
            if n_bar <= MEASURE_ENUM_LIMIT:
                candidates.append((n_bar, s, t))
    candidates.sort()
    for n_bar, s, t in candidates:
        graph = expander.ExpanderSpec(
            n=base.n0,
            D=expander.BASE_DEGREE**s,
            lam=expander.BASE_LAMBDA**s,
            power=s,
            base_m=math.isqrt(base.n0),
        )
        spec = BalancedCodeSpec(
            k=k, eps=eps, base=base, graph=graph, t=t, cert="heuristic",
            cert_bias=lemma_bias(base.eps0_eff, graph.lam, t),
        )
        bias = exact_bias(spec)
        if bias <= eps:
            return BalancedCodeSpec(
                k=k, eps=eps, base=base, graph=graph, t=t, cert="measured",
                cert_bias=bias, measured_bias=bias,
            )
    raise InfeasibleParametersError(
        f"no enumerable walk configuration reaches bias {eps} at k = {k}"
    )


def build_code(k: int, eps: float, mode: str = "auto") -> BalancedCodeSpec:
    if mode == "lemma":
        return build_code_certified(k, eps)
    if mode == "measured":
        return build_code_measured(k, eps)
    if mode == "heuristic":
        return build_code_heuristic(k, eps)
    if mode == "auto":
        if k <= 16:
            try:
                return build_code_measured(k, eps)
            except InfeasibleParametersError:
                pass
        return build_code_heuristic(k, eps)
    raise ValueError(f"unknown certification mode {mode!r}")


# ---------------------------------------------------------------------------
# amplified bit access


def decode_index(i: int, spec: BalancedCodeSpec) -> tuple[int, list[int]]:
    """Split an amplified-code index into (start vertex, t edge labels);
    mixed-radix little-endian in the labels: i = v*D^t + sum b_j * D^(j-1)."""
    if not 0 <= i < spec.n_bar:
        raise ValueError("amplified index out of range")
    D = spec.D
    Dt = D**spec.t
    v, rem = divmod(i, Dt)
    labels = []
    for _ in range(spec.t):
        rem, b = divmod(rem, D)
        labels.append(b)
    # note: divmod(rem, D) peels the *low* digit; labels are little-endian
    return v, labels


def walk_vertices(i: int, spec: BalancedCodeSpec) -> list[int]:
    v, labels = decode_index(i, spec)
    return expander.walk_from_ints(v, labels, spec.graph)


def amplified_bits(x: BitString, indices, spec: BalancedCodeSpec) -> BitString:
    """Amplified-code bits of x at the requested indices; the base codeword is
    computed once and each bit costs one length-t walk."""
    indices = list(indices)
    base_cw = spec.base.encode(x).value
    out = 0
    for pos, i in enumerate(indices):
        acc = 0
        for v in walk_vertices(i, spec):
            acc ^= (base_cw >> v) & 1
        out |= acc << pos
    return BitString(out, len(indices))


class SmallBiasGenerator:
    """Row access to the amplified code's generator matrix: row i, column j is
    amplified bit i of the unit-vector message e_j.

    Per-vertex columns of the base code's generator are cached (each is one
    table-driven vector pass), so a row costs one walk plus t+1 cached XORs.
    """

    def __init__(self, spec: BalancedCodeSpec, nbits: int):
        if nbits > spec.k:
            raise ValueError("row width exceeds code message length")
        self.spec = spec
        self.nbits = nbits
        base = spec.base
        self._ell0 = base.ell0
        F = base.field
        self._log_np, self._exp_np = F.np_tables()
        self._qm1 = base.q0 - 1
        j = np.arange(nbits, dtype=np.int64)
        self._js = j // self._ell0  # outer symbol index (monomial degree)
        self._logc = self._log_np[1 << (j % self._ell0)]  # log of the coefficient
        self._cbit = j % self._ell0  # set bit of the coefficient
        self._columns: dict[int, int] = {}

    def _column(self, v: int) -> int:
        """Base-code generator column at codeword position v, packed as an
        nbits-wide int (bit j = C0(e_j)[v])."""
        cached = self._columns.get(v)
        if cached is not None:
            return cached
        base = self.spec.base
        if v >= base.n0_raw:  # zero padding region
            self._columns[v] = 0
            return 0
        a, off = divmod(v, 2 * self._ell0)
        shift = 0 if off < self._ell0 else 1
        bitpos = off - self._ell0 * shift
        if a == 0:
            # alpha = 0: y = c * 0^js is c when js = 0 else 0; a*y = 0
            if shift == 1:
                bits = np.zeros(self.nbits, dtype=np.uint8)
            else:
                bits = (((1 << self._cbit) >> bitpos) & 1).astype(np.uint8)
                bits[self._js != 0] = 0
        else:
            loga = int(self._log_np[a])
            e = (self._logc + (self._js + shift) * loga) % self._qm1
            y = self._exp_np[e]
            bits = ((y >> bitpos) & 1).astype(np.uint8)
        col = int.from_bytes(
            np.packbits(bits, bitorder="little").tobytes(), "little"
        )
        self._columns[v] = col
        return col

    def row(self, i: int) -> int:
        acc = 0
        # vertices visited an even number of times cancel under XOR
        parity: dict[int, int] = {}
        for v in walk_vertices(i, self.spec):
            parity[v] = parity.get(v, 0) ^ 1
        for v, odd in parity.items():
            if odd:
                acc ^= self._column(v)
        return acc

    def __call__(self, i: int) -> BitString:
        return BitString(self.row(i), self.nbits)


def small_bias(i: int, k: int, spec: BalancedCodeSpec) -> BitString:
    """Row i of the amplified code's generator matrix, truncated to k columns."""
    return _row_generator(spec, k)(i)


_GENERATORS: dict[tuple[int, int], SmallBiasGenerator] = {}


def _row_generator(spec: BalancedCodeSpec, nbits: int) -> SmallBiasGenerator:
    key = (id(spec), nbits)
    gen = _GENERATORS.get(key)
    if gen is None or gen.spec is not spec:
        gen = SmallBiasGenerator(spec, nbits)
        _GENERATORS[key] = gen
    return gen


# ---------------------------------------------------------------------------
# exhaustive bias measurement (also used by build_code_measured)


def _all_base_codewords(base: JustesenCode) -> np.ndarray:
    """(2^k, n0) uint8 matrix of base codewords for every message."""
    F = base.field
    log_np, exp_np = F.np_tables()
    q0, ell0 = base.q0, base.ell0
    qm1 = q0 - 1
    nmsg = 1 << base.k
    msgs = np.arange(nmsg, dtype=np.int64)
    coeffs = [
        (msgs >> (ell0 * s)) & (q0 - 1) for s in range(base.outer_msg_symbols)
    ]
    pts_log = log_np[np.arange(q0)]
    acc = np.zeros((nmsg, q0), dtype=np.int64)
    for c in coeffs[::-1]:
        nz = (acc != 0) & (pts_log[None, :] >= 0)
        prod = np.zeros_like(acc)
        prod[nz] = exp_np[(log_np[acc[nz]] + np.broadcast_to(pts_log, acc.shape)[nz]) % qm1]
        acc = prod ^ c[:, None]
    ay = np.zeros_like(acc)
    nz = (acc != 0) & (pts_log[None, :] >= 0)
    ay[nz] = exp_np[(log_np[acc[nz]] + np.broadcast_to(pts_log, acc.shape)[nz]) % qm1]
    shifts = np.arange(ell0, dtype=np.int64)
    bits_y = ((acc[:, :, None] >> shifts) & 1).astype(np.uint8)
    bits_ay = ((ay[:, :, None] >> shifts) & 1).astype(np.uint8)
    inner = np.concatenate([bits_y, bits_ay], axis=2).reshape(nmsg, -1)
    out = np.zeros((nmsg, base.n0), dtype=np.uint8)
    out[:, : base.n0_raw] = inner
    return out


def exact_bias(spec: BalancedCodeSpec) -> float:
    """Exact maximum bias of the amplified code over all nonzero messages, by
    full enumeration.  Requires k <= 16 and n_bar <= MEASURE_ENUM_LIMIT."""
    if spec.k > 16:
        raise UnsupportedParametersError("exact_bias needs k <= 16")
    n_bar = spec.n_bar
    if n_bar > MEASURE_ENUM_LIMIT:
        raise UnsupportedParametersError("amplified code too large to enumerate")
    M = _all_base_codewords(spec.base)
    nmsg = M.shape[0]
    weights = np.zeros(nmsg, dtype=np.int64)
    Dt = spec.D**spec.t
    chunk = max(1, (1 << 22) // nmsg)
    idx = np.arange(n_bar, dtype=np.int64)
    for lo in range(0, n_bar, chunk):
        part = idx[lo : lo + chunk]
        v = part // Dt
        rem = part % Dt
        cols = M[:, v]
        for _ in range(spec.t):
            rem, b = np.divmod(rem, spec.D)
            v = expander.neighbor_vec(v, b, spec.graph)
            cols = cols ^ M[:, v]
        weights += cols.sum(axis=1, dtype=np.int64)
    rel = weights[1:].astype(np.float64) / float(n_bar)
    return float(np.max(np.abs(1.0 - 2.0 * rel)))
