"""Strong seeded condensers: the lossless derivative (KT-style) condenser
over a prime field and the lossy coset-evaluation (RS-style) condenser over a
binary field with a primitive element.

Both interpret the source as a polynomial (little-endian chunks of
ceil(log2 q) bits, reduced into the field, final chunk zero-padded) and the
seed as a field element.  The derivative condenser outputs the packed
sequence (f(y), f'(y), ..., f^(m')(y)); the coset condenser outputs
(f(y), f(zeta*y), ..., f(zeta^m' * y)).  Output symbols are packed back into
ceil(log2 q) bits each and truncated to m bits.

Binary-field sizes are rounded up to the next Mersenne-prime exponent when
the formula size exceeds the desk factorization bound: then q - 1 is prime
and any element other than 0, 1 is primitive, which keeps the one-time
preprocessing step cheap at every scale.  Larger fields only improve the
condenser, and the realized seed length is what the planner accounts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import ff
from .bits import BitString
from .errors import (
    InfeasibleParametersError,
    PreprocessingRequiredError,
    UnsupportedParametersError,
)
from .primes import factorize, is_prime

FACTORIZATION_BOUND = 1 << 62


@dataclass(frozen=True)
class CondenserParams:
    kind: str  # 'kt' | 'rs'
    n: int  # source bits
    k: int  # min-entropy
    eps: float
    alpha: float
    F: ff.FieldSpec
    degree: int  # source chunks (polynomial coefficients)
    m_prime: int  # output symbols - 1 evaluations/derivatives beyond f(y)
    ell: int  # seed bits
    m: int  # output bits
    ell_formula: int  # the formula value before any rounding
    checked: bool = True  # False for manually built (out-of-regime) params

    @property
    def out_entropy(self) -> float:
        """Claimed min-entropy of seed + output."""
        if self.kind == "kt":
            return self.k + self.ell  # lossless
        return (self.k - math.log2(1.0 / self.eps)) / (1.0 + self.alpha) + self.ell

    def with_field(self, F: ff.FieldSpec) -> "CondenserParams":
        return replace(self, F=F)


def _chunk_bits(F: ff.FieldSpec) -> int:
    return F.elem_bits


def _source_to_poly(x: BitString, params: CondenserParams) -> list:
    w = _chunk_bits(params.F)
    F = params.F
    return ff.poly_trim([F.reduce_int(c) for c in x.iter_uints(w)])


def _pack_symbols(symbols: list, params: CondenserParams) -> BitString:
    w = _chunk_bits(params.F)
    v = 0
    for i, s in enumerate(symbols):
        v |= s << (i * w)
    total = len(symbols) * w
    if total < params.m:
        raise RuntimeError("internal: packed output shorter than m")
    return BitString(v & ((1 << params.m) - 1), params.m)


# ---------------------------------------------------------------------------
# planning


def plan_condenser(
    n: int, k: int, eps: float, alpha: float, kind: str
) -> CondenserParams:
    """Fully resolved parameters, including the constructed field.

    kt: prime p in [h^(1+alpha)/2, h^(1+alpha)] with h = (2nk/eps)^(1/alpha),
        requires k >= (256/alpha^2) * log2(nk-free form below; m = (1+alpha)k.
    rs: q = 2^ell; requires k >= (2+alpha) * log2(1/eps); m = k.
    Both: ell = ceil((1+1/alpha) * log2(nk/eps)).
    """
    if not 0 < eps < 1:
        raise InfeasibleParametersError("eps must lie in (0, 1)")
    if not 1 <= k <= n:
        raise InfeasibleParametersError("need 1 <= k <= n")
    if alpha <= 0:
        raise InfeasibleParametersError("alpha must be positive")
    log_n_eps = math.log2(n / eps)
    ell_formula = math.ceil((1.0 + 1.0 / alpha) * math.log2(n * k / eps))
    if kind == "kt":
        if alpha >= 1.0 + 1e-12:
            raise InfeasibleParametersError(
                "kt requires alpha in (0, 1) (violated: alpha < 1)"
            )
        need = (256.0 / (alpha * alpha)) * log_n_eps * log_n_eps
        if k < need:
            raise InfeasibleParametersError(
                f"k >= (256/alpha^2) log^2(n/eps) violated: k = {k} < {need:.1f}"
            )
        # h = (2nk/eps)^(1/alpha); p in [h^(1+alpha)/2, h^(1+alpha)].  The
        # window endpoints are materialized as powers of two (the window only
        # needs to be wide enough to contain a prime of the right magnitude).
        log2_h_pow = (1.0 + alpha) / alpha * math.log2(2.0 * n * k / eps)
        if log2_h_pow > 4096:
            raise UnsupportedParametersError(
                "kt prime modulus would exceed 2^4096; parameters out of desk scale"
            )
        hi = 1 << math.ceil(log2_h_pow)
        p = _prime_in_range(hi >> 1, hi)
        F = ff.FieldSpec.prime(p)
        m = math.ceil((1.0 + alpha) * k)
        w = F.elem_bits
        m_prime = math.ceil(m / w)
        if m_prime >= p:
            raise UnsupportedParametersError(
                f"m' = {m_prime} >= p: derivative order exceeds the characteristic"
            )
        degree = math.ceil(n / w)
        return CondenserParams(
            kind="kt", n=n, k=k, eps=eps, alpha=alpha, F=F, degree=degree,
            m_prime=m_prime, ell=ell_formula, m=m, ell_formula=ell_formula,
        )
    if kind == "rs":
        need = (2.0 + alpha) * math.log2(1.0 / eps)
        if k < need:
            raise InfeasibleParametersError(
                f"k >= (2+alpha) log2(1/eps) violated: k = {k} < {need:.1f}"
            )
        ell = _usable_binary_degree(ell_formula)
        F = ff.FieldSpec.binary(ell)
        m = k
        m_prime = math.ceil(m / ell)
        if m_prime >= F.q - 1:
            raise UnsupportedParametersError("m' too large for the field")
        degree = math.ceil(n / ell)
        return CondenserParams(
            kind="rs", n=n, k=k, eps=eps, alpha=alpha, F=F, degree=degree,
            m_prime=m_prime, ell=ell, m=m, ell_formula=ell_formula,
        )
    raise ValueError(f"unknown condenser kind {kind!r}")


def manual_params(
    kind: str, n: int, k: int, eps: float, alpha: float, F: ff.FieldSpec, m: int
) -> CondenserParams:
    """Structurally valid params without the regime checks (for tests and
    smoke runs outside the proven parameter range)."""
    w = F.elem_bits
    m_prime = math.ceil(m / w)
    if kind == "kt":
        if F.kind != "prime":
            raise UnsupportedParametersError("kt needs a prime field")
        if m_prime >= F.p:
            raise UnsupportedParametersError("m' >= p")
    elif kind == "rs":
        if F.kind != "binary":
            raise UnsupportedParametersError("rs needs a binary field")
    else:
        raise ValueError(kind)
    ell = F.elem_bits if kind == "rs" else F.elem_bits
    return CondenserParams(
        kind=kind, n=n, k=k, eps=eps, alpha=alpha, F=F,
        degree=math.ceil(n / w), m_prime=m_prime, ell=ell, m=m,
        ell_formula=ell, checked=False,
    )


def _prime_in_range(lo: int, hi: int) -> int:
    from .primes import next_prime

    p = next_prime(lo)
    if p > hi:
        raise InfeasibleParametersError("no prime in the target window")
    return p


def _usable_binary_degree(ell: int) -> int:
    """ell itself if 2^ell - 1 factors at desk scale, else the next
    Mersenne-prime exponent (q - 1 prime: primitivity checks are trivial)."""
    if ell <= 62:
        return ell
    for e in ff.MERSENNE_EXPONENTS:
        if e >= ell:
            return e
    raise UnsupportedParametersError(
        f"seed length {ell} exceeds the largest tabulated Mersenne exponent"
    )


# ---------------------------------------------------------------------------
# execution


def kt_condense(x: BitString, y: BitString, params: CondenserParams) -> BitString:
    """Packed (f(y), f'(y), ..., f^(m')(y)) over GF(p)."""
    if params.kind != "kt":
        raise ValueError("params are not for the kt kind")
    if len(x) != params.n or len(y) != params.ell:
        raise ValueError("input or seed length mismatch")
    F = params.F
    if params.m_prime >= F.p:
        raise UnsupportedParametersError("m' >= p")
    f = _source_to_poly(x, params)
    point = y.value % F.p
    derivs = ff.hermite_eval(f, point, params.m_prime, F)
    return _pack_symbols(derivs, params)


def rs_condense(x: BitString, y: BitString, params: CondenserParams) -> BitString:
    """Packed (f(y), f(zeta*y), ..., f(zeta^m' * y)) over GF(2^ell)."""
    if params.kind != "rs":
        raise ValueError("params are not for the rs kind")
    if len(x) != params.n or len(y) != params.ell:
        raise ValueError("input or seed length mismatch")
    F = params.F
    if F.zeta is None:
        raise PreprocessingRequiredError(
            "rs condenser needs a primitive element; run the preprocessing "
            "step (find_primitive + factor_q_minus_1) and attach it to the field"
        )
    f = _source_to_poly(x, params)
    pt = y.value & ((1 << F.ell) - 1)
    points = [pt]
    for _ in range(params.m_prime):
        pt = F.mul(pt, F.zeta)
        points.append(pt)
    if not f:
        vals = [0] * len(points)
    elif len(points) <= 4 or len(f) <= 4:
        vals = [ff.poly_eval(f, q, F) for q in points]
    else:
        vals = ff.multipoint_eval(f, points, F)
    return _pack_symbols(vals, params)


def condense(x: BitString, y: BitString, params: CondenserParams) -> BitString:
    return kt_condense(x, y, params) if params.kind == "kt" else rs_condense(x, y, params)


def ensure_preprocessed(params: CondenserParams, rng_seed: int = 0x5EED) -> CondenserParams:
    """Attach zeta (and the factorization of q-1) to the params' field."""
    if params.kind != "rs" or params.F.zeta is not None:
        return params
    q = params.F.q
    if q - 1 >= FACTORIZATION_BOUND and not is_prime(q - 1):
        raise PreprocessingRequiredError(
            "q - 1 cannot be factored at desk scale and is not prime"
        )
    return params.with_field(ff.with_preprocessing(params.F, rng_seed))


# ---------------------------------------------------------------------------
# preprocessing artifact file


def save_preprocessing(path, fields: list[ff.FieldSpec]):
    """Text format: format=1, then per field lines q=, modulus=, zeta=,
    factors= in lowercase hex (factors comma separated)."""
    lines = ["format=1"]
    for F in fields:
        if F.zeta is None or F.q_minus_1_factors is None:
            raise ValueError("field missing preprocessing artifacts")
        lines.append(f"q={F.q:x}")
        lines.append(f"modulus={(F.modulus if F.kind == 'binary' else F.p):x}")
        lines.append(f"zeta={F.zeta:x}")
        lines.append("factors=" + ",".join(f"{v:x}" for v in F.q_minus_1_factors))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_preprocessing(path) -> list[ff.FieldSpec]:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != "format=1":
        raise ValueError("unrecognized preprocessing file format")
    out = []
    rec: dict[str, str] = {}
    for ln in lines[1:]:
        key, _, val = ln.partition("=")
        rec[key] = val
        if key == "factors":
            q = int(rec["q"], 16)
            modulus = int(rec["modulus"], 16)
            zeta = int(rec["zeta"], 16)
            factors = tuple(int(v, 16) for v in rec["factors"].split(","))
            if q & (q - 1) == 0 and q > 2:
                F = ff.FieldSpec.binary(
                    q.bit_length() - 1, modulus=modulus,
                    zeta=zeta, q_minus_1_factors=factors,
                )
            else:
                F = ff.FieldSpec.prime(modulus, zeta=zeta, q_minus_1_factors=factors)
            out.append(F)
            rec = {}
    return out
