"""Exact arithmetic over GF(p) and GF(2^ell), dense univariate polynomials,
subquadratic multiplication, fast multipoint evaluation, and fast derivative
(Hermite) evaluation.

Field elements are canonical ints: least nonnegative residues for prime
fields, little-endian coefficient bit-vectors for binary fields.  Polynomials
are lists of elements, lowest degree first, with no trailing zeros (the zero
polynomial is the empty list).

Multiplication strategy: schoolbook below a threshold (default 64
coefficients); above it, Kronecker substitution packs the polynomial into one
big integer and delegates to GMP, which is the subquadratic fast path.  A
plain Karatsuba list recursion is kept as a selectable method and as the
documented extension point for future FFT work.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from gmpy2 import mpz

from . import gf2
from .gf2tab import MODULUS
from .errors import (
    FieldMismatchError,
    PreprocessingRequiredError,
    UnsupportedParametersError,
)
from .primes import factorize, is_prime

FieldElement = int
Poly = list  # list[FieldElement], trailing zeros trimmed

SCHOOLBOOK_THRESHOLD = 64
_LEAF_POINTS = 32

# Exponents ell for which 2^ell - 1 is prime, so that every element of
# GF(2^ell) other than 0 and 1 is primitive and no factorization is needed.
MERSENNE_EXPONENTS = (
    2, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127, 521, 607, 1279, 2203,
    2281, 3217, 4253, 4423, 9689, 9941, 11213, 19937,
)


@lru_cache(maxsize=None)
def _binary_modulus(ell: int) -> int:
    if ell in MODULUS:
        return MODULUS[ell]
    return gf2.lex_smallest_irreducible(ell)


@dataclass(frozen=True)
class FieldSpec:
    """A prime field GF(p) or binary field GF(2^ell).

    zeta, if present, is a primitive element of the multiplicative group;
    q_minus_1_factors the distinct prime factors of q - 1.  Both are optional
    preprocessing artifacts.
    """

    kind: str  # 'prime' | 'binary'
    p: int | None = None
    ell: int | None = None
    modulus: int | None = None
    zeta: int | None = None
    q_minus_1_factors: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind == "prime":
            if self.p is None or self.p < 2:
                raise ValueError("prime field needs p >= 2")
            if self.p < (1 << 64) and not is_prime(self.p):
                raise ValueError(f"{self.p} failed the primality check")
        elif self.kind == "binary":
            if self.ell is None or self.ell < 1:
                raise ValueError("binary field needs ell >= 1")
            if self.modulus is None:
                object.__setattr__(self, "modulus", _binary_modulus(self.ell))
            if gf2.gf2_degree(self.modulus) != self.ell:
                raise ValueError("modulus degree does not match ell")
            if self.ell > 1 and not gf2.is_irreducible(self.modulus):
                raise ValueError("modulus is not irreducible")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.zeta is not None:
            self._check_zeta()

    def _check_zeta(self):
        z = self.zeta
        if not 0 < z < self.q:
            raise ValueError("zeta out of range")
        if self.q_minus_1_factors:
            for r in set(self.q_minus_1_factors):
                if self.pow(z, (self.q - 1) // r) == self.one:
                    raise ValueError(f"zeta^(q-1)/{r} = 1; not primitive")

    # -- construction helpers ---------------------------------------------

    @classmethod
    def prime(cls, p: int, **kw) -> "FieldSpec":
        return cls(kind="prime", p=p, **kw)

    @classmethod
    def binary(cls, ell: int, modulus: int | None = None, **kw) -> "FieldSpec":
        return cls(kind="binary", ell=ell, modulus=modulus, **kw)

    # -- basic attributes ---------------------------------------------------

    @property
    def q(self) -> int:
        return self.p if self.kind == "prime" else 1 << self.ell

    @property
    def elem_bits(self) -> int:
        """Bits used to pack one canonical element."""
        return (self.p - 1).bit_length() if self.kind == "prime" else self.ell

    @property
    def zero(self) -> FieldElement:
        return 0

    @property
    def one(self) -> FieldElement:
        return 1 if self.q > 1 else 0

    # -- scalar arithmetic -------------------------------------------------

    def validate(self, a: FieldElement) -> FieldElement:
        if not 0 <= a < self.q:
            raise FieldMismatchError(f"element {a} not reduced in field of order {self.q}")
        return a

    def reduce_int(self, v: int) -> FieldElement:
        """Map a nonnegative integer chunk into the field (mod p, or truncate
        to ell bits)."""
        if self.kind == "prime":
            return v % self.p
        return v & ((1 << self.ell) - 1)

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.kind == "prime":
            s = a + b
            return s - self.p if s >= self.p else s
        return a ^ b

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.kind == "prime":
            s = a - b
            return s + self.p if s < 0 else s
        return a ^ b

    def neg(self, a: FieldElement) -> FieldElement:
        if self.kind == "prime":
            return (self.p - a) % self.p
        return a

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.kind == "prime":
            return a * b % self.p
        tab = self._tables()
        if tab is not None:
            if a == 0 or b == 0:
                return 0
            log, exp = tab
            return exp[log[a] + log[b]]
        return gf2.gf2_mulmod(a, b, self.modulus)

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        if self.kind == "prime":
            return pow(a, e, self.p)
        if e < 0:
            return self.pow(self.inv(a), -e)
        return gf2.gf2_pow_mod(a, e, self.modulus)

    def inv(self, a: FieldElement) -> FieldElement:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "prime":
            return pow(a, -1, self.p)
        return gf2.gf2_pow_mod(a, self.q - 2, self.modulus)

    def random_element(self, rng: random.Random) -> FieldElement:
        return rng.randrange(self.q)

    # -- log/exp tables for small binary fields ----------------------------

    def _tables(self):
        if self.kind != "binary" or self.ell > 16:
            return None
        return _gf2_log_exp(self.ell, self.modulus)

    def np_tables(self):
        """(log, exp) int64 numpy tables for vectorized work; binary fields
        with ell <= 20 only.  log[0] is -1 (callers mask zeros)."""
        if self.kind != "binary" or self.ell > 20:
            raise UnsupportedParametersError("numpy tables only for binary ell <= 20")
        return _gf2_np_log_exp(self.ell, self.modulus)


@lru_cache(maxsize=32)
def _gf2_log_exp(ell: int, modulus: int):
    q = 1 << ell
    exp = [0] * (2 * (q - 1))
    log = [0] * q
    # find a multiplicative generator by direct order check
    factors = set(factorize(q - 1))
    g = 2 % q
    while True:
        if g == 0:
            g = 1
        if all(gf2.gf2_pow_mod(g, (q - 1) // r, modulus) != 1 for r in factors) and g > 1:
            break
        g += 1
    v = 1
    for i in range(q - 1):
        exp[i] = v
        exp[i + q - 1] = v
        log[v] = i
        v = gf2.gf2_mulmod(v, g, modulus)
    log[0] = 0  # sentinel; callers must special-case zero
    return log, exp


@lru_cache(maxsize=16)
def _gf2_np_log_exp(ell: int, modulus: int):
    q = 1 << ell
    if ell <= 16:
        log, exp = _gf2_log_exp(ell, modulus)
        log_np = np.array(log, dtype=np.int64)
        exp_np = np.array(exp, dtype=np.int64)
    else:
        factors = set(factorize(q - 1))
        g = 2
        while not all(gf2.gf2_pow_mod(g, (q - 1) // r, modulus) != 1 for r in factors):
            g += 1
        exp_np = np.zeros(2 * (q - 1), dtype=np.int64)
        log_np = np.zeros(q, dtype=np.int64)
        v = 1
        for i in range(q - 1):
            exp_np[i] = v
            exp_np[i + q - 1] = v
            log_np[v] = i
            v = gf2.gf2_mulmod(v, g, modulus)
    log_np[0] = -1
    return log_np, exp_np


# ---------------------------------------------------------------------------
# dense polynomials


def poly_trim(c: Poly) -> Poly:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _check_operand(c: Poly, F: FieldSpec):
    q = F.q
    for v in c:
        if not 0 <= v < q:
            raise FieldMismatchError("polynomial coefficient not reduced in field")


def poly_add(a: Poly, b: Poly, F: FieldSpec) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = F.add(out[i], v)
    return poly_trim(out)


def poly_scale(a: Poly, c: FieldElement, F: FieldSpec) -> Poly:
    if c == 0:
        return []
    return poly_trim([F.mul(v, c) for v in a])


def _poly_mul_schoolbook(a: Poly, b: Poly, F: FieldSpec) -> Poly:
    if F.kind == "prime":
        p = F.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return poly_trim([v % p for v in out])
    out = [0] * (len(a) + len(b) - 1)
    mul = F.mul
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] ^= mul(ai, bj)
    return poly_trim(out)


def _poly_mul_karatsuba(a: Poly, b: Poly, F: FieldSpec) -> Poly:
    n = max(len(a), len(b))
    if n <= SCHOOLBOOK_THRESHOLD:
        return _poly_mul_schoolbook(a, b, F)
    h = n // 2
    a0, a1 = poly_trim(a[:h]), poly_trim(a[h:])
    b0, b1 = poly_trim(b[:h]), poly_trim(b[h:])
    z0 = _poly_mul_karatsuba(a0, b0, F) if a0 and b0 else []
    z2 = _poly_mul_karatsuba(a1, b1, F) if a1 and b1 else []
    sa = poly_add(a0, a1, F)
    sb = poly_add(b0, b1, F)
    z1 = _poly_mul_karatsuba(sa, sb, F) if sa and sb else []
    # z1 - z0 - z2
    mid = z1
    for z in (z0, z2):
        pad = list(mid) + [0] * (len(z) - len(mid))
        for i, v in enumerate(z):
            pad[i] = F.sub(pad[i], v)
        mid = poly_trim(pad)
    out = [0] * (len(a) + len(b) - 1)
    for i, v in enumerate(z0):
        out[i] = v
    for i, v in enumerate(mid):
        out[h + i] = F.add(out[h + i], v)
    for i, v in enumerate(z2):
        out[2 * h + i] = F.add(out[2 * h + i], v)
    return poly_trim(out)


def _poly_mul_kronecker_prime(a: Poly, b: Poly, F: FieldSpec) -> Poly:
    p = F.p
    pb = (p - 1).bit_length()
    guard = (min(len(a), len(b))).bit_length()
    slot = 2 * pb + guard
    slot += -slot % 8  # byte aligned for cheap extraction
    sb = slot // 8
    abuf = b"".join(v.to_bytes(sb, "little") for v in a)
    bbuf = b"".join(v.to_bytes(sb, "little") for v in b)
    prod = int(mpz(int.from_bytes(abuf, "little")) * mpz(int.from_bytes(bbuf, "little")))
    nout = len(a) + len(b) - 1
    raw = prod.to_bytes(nout * sb + sb, "little")
    out = [
        int.from_bytes(raw[i * sb : (i + 1) * sb], "little") % p for i in range(nout)
    ]
    return poly_trim(out)


def _poly_mul_kronecker_binary(a: Poly, b: Poly, F: FieldSpec) -> Poly:
    ell = F.ell
    slot = 2 * ell - 1
    slot += -slot % 8
    sb = slot // 8
    abuf = b"".join(v.to_bytes(sb, "little") for v in a)
    bbuf = b"".join(v.to_bytes(sb, "little") for v in b)
    prod = gf2.clmul(
        int.from_bytes(abuf, "little"), int.from_bytes(bbuf, "little")
    )
    nout = len(a) + len(b) - 1
    raw = prod.to_bytes(nout * sb + sb, "little")
    mod = F.modulus
    out = []
    for i in range(nout):
        v = int.from_bytes(raw[i * sb : (i + 1) * sb], "little")
        out.append(gf2.gf2_mod(v, mod))
    return poly_trim(out)


def poly_mul(a: Poly, b: Poly, F: FieldSpec, method: str = "auto") -> Poly:
    """Exact product over F; subquadratic above the schoolbook threshold."""
    _check_operand(a, F)
    _check_operand(b, F)
    a = poly_trim(list(a))
    b = poly_trim(list(b))
    if not a or not b:
        return []
    if method == "schoolbook":
        return _poly_mul_schoolbook(a, b, F)
    if method == "karatsuba":
        return _poly_mul_karatsuba(a, b, F)
    if method == "kronecker" or min(len(a), len(b)) > SCHOOLBOOK_THRESHOLD:
        if F.kind == "prime":
            return _poly_mul_kronecker_prime(a, b, F)
        return _poly_mul_kronecker_binary(a, b, F)
    return _poly_mul_schoolbook(a, b, F)


def poly_divmod(a: Poly, b: Poly, F: FieldSpec) -> tuple[Poly, Poly]:
    """Schoolbook division with remainder."""
    a = poly_trim(list(a))
    b = poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    binv = F.inv(b[-1])
    r = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = F.mul(r[i + len(b) - 1], binv)
        q[i] = c
        if c:
            for j, bv in enumerate(b):
                r[i + j] = F.sub(r[i + j], F.mul(c, bv))
    return poly_trim(q), poly_trim(r[: len(b) - 1])


def _poly_inv_series(f: Poly, n: int, F: FieldSpec) -> Poly:
    """Inverse of f modulo X^n by Newton iteration (g <- g + g(1 - fg), so the
    error squares each round); f[0] must be a unit."""
    g = [F.inv(f[0])]
    k = 1
    while k < n:
        k = min(2 * k, n)
        fg = poly_mul(f[:k], g, F)[:k]
        err = [F.neg(v) for v in fg] + [0] * (k - len(fg))
        err[0] = F.add(err[0], F.one)
        err = poly_trim(err)
        if err:
            corr = poly_mul(g, err, F)[:k]
            g = poly_add(g, corr, F)
    return g[:n]


def poly_mod_fast(a: Poly, b: Poly, F: FieldSpec) -> Poly:
    """a mod b using Newton inversion of the reversed divisor (fast for large
    degrees); falls back to schoolbook when small."""
    a = poly_trim(list(a))
    b = poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return a
    if len(a) <= 2 * SCHOOLBOOK_THRESHOLD:
        return poly_divmod(a, b, F)[1]
    m = len(a) - len(b) + 1  # quotient length
    ra = a[::-1]
    rb = b[::-1]
    inv = _poly_inv_series(rb, m, F)
    rq = poly_mul(ra[:m], inv, F)[:m]
    q = poly_trim(rq[::-1])
    if len(q) < m:  # reversed quotient had leading zeros
        q = [0] * (m - len(q)) + q
        q = poly_trim(q)
    qb = poly_mul(q, b, F)
    r = [F.sub(av, qv) for av, qv in zip(a, qb + [0] * (len(a) - len(qb)))]
    return poly_trim(r[: len(b) - 1])


def poly_eval(f: Poly, x: FieldElement, F: FieldSpec) -> FieldElement:
    """Horner evaluation."""
    acc = 0
    if F.kind == "prime":
        p = F.p
        for c in reversed(f):
            acc = (acc * x + c) % p
    else:
        for c in reversed(f):
            acc = F.mul(acc, x) ^ c
    return acc


# ---------------------------------------------------------------------------
# multipoint evaluation via a subproduct tree


def multipoint_eval(f: Poly, points: list, F: FieldSpec) -> list:
    """Evaluate f at every point; subproduct-tree remaindering keeps the cost
    at O(M(d) log d) field multiplications."""
    if len(points) < 1:
        raise ValueError("multipoint_eval needs at least one point")
    for x in points:
        F.validate(x)
    f = poly_trim(list(f))
    _check_operand(f, F)
    if len(f) <= _LEAF_POINTS or len(points) <= _LEAF_POINTS:
        return [poly_eval(f, x, F) for x in points]
    tree = _subproduct_tree(points, F)
    out: list = [0] * len(points)
    _eval_down(f, tree, points, 0, len(points), out, F)
    return out


def _subproduct_tree(points: list, F: FieldSpec):
    """Nested dict of interval products, keyed by (start, stop)."""
    tree = {}

    def build(lo, hi):
        if hi - lo <= _LEAF_POINTS:
            prod = [F.one]
            for x in points[lo:hi]:
                prod = poly_mul(prod, [F.neg(x), F.one], F)
            tree[(lo, hi)] = prod
            return prod
        mid = (lo + hi) // 2
        prod = poly_mul(build(lo, mid), build(mid, hi), F)
        tree[(lo, hi)] = prod
        return prod

    build(0, len(points))
    return tree


def _eval_down(f: Poly, tree, points, lo, hi, out, F: FieldSpec):
    if hi - lo <= _LEAF_POINTS:
        for i in range(lo, hi):
            out[i] = poly_eval(f, points[i], F)
        return
    mid = (lo + hi) // 2
    fl = poly_mod_fast(f, tree[(lo, mid)], F)
    fr = poly_mod_fast(f, tree[(mid, hi)], F)
    _eval_down(fl, tree, points, lo, mid, out, F)
    _eval_down(fr, tree, points, mid, hi, out, F)


# ---------------------------------------------------------------------------
# Hermite (derivative) evaluation


def _factorials(n: int, p: int) -> tuple[list[int], list[int]]:
    fact = [1] * (n + 1)
    for i in range(1, n + 1):
        fact[i] = fact[i - 1] * i % p
    inv_last = pow(fact[n], -1, p)
    invf = [1] * (n + 1)
    invf[n] = inv_last
    for i in range(n, 0, -1):
        invf[i - 1] = invf[i] * i % p
    return fact, invf


def _taylor_coeffs(f: Poly, alpha: int, t: int, F: FieldSpec) -> list[int]:
    """c_0..c_t with f(X) = sum c_i (X - alpha)^i; needs p > deg f."""
    p = F.p
    d = len(f) - 1
    if d < 0:
        return [0] * (t + 1)
    fact, invf = _factorials(d, p)
    # U(X) = sum f_j j! X^(d-j);  V(X) = sum alpha^i / i! X^i
    U = [f[d - i] * fact[d - i] % p for i in range(d + 1)]
    V = [0] * (d + 1)
    a = 1
    for i in range(d + 1):
        V[i] = a * invf[i] % p
        a = a * alpha % p
    W = poly_mul(poly_trim(U), poly_trim(V), F)
    out = []
    for k in range(t + 1):
        idx = d - k
        w = W[idx] if 0 <= idx < len(W) else 0
        out.append(w * invf[k] % p if k <= d else 0)
    return out


def _taylor_coeffs_synthetic(f: Poly, alpha: int, t: int, F: FieldSpec) -> list[int]:
    """(X - alpha)-adic digits by repeated synthetic division; O(t * deg f),
    valid in any characteristic."""
    r = list(f)
    out = []
    for _ in range(t + 1):
        if not r:
            out.append(0)
            continue
        carries = []
        carry = 0
        for c in reversed(r):
            carry = F.add(F.mul(carry, alpha), c)
            carries.append(carry)
        out.append(carries[-1])  # remainder = f(alpha)
        r = poly_trim(carries[:-1][::-1])  # quotient by (X - alpha)
    return out


def hermite_eval(f: Poly, alpha: FieldElement, t: int, F: FieldSpec) -> list:
    """(f(alpha), f'(alpha), ..., f^(t)(alpha)) with formal derivatives.

    Restricted to prime fields with p > t: at order >= p the formal
    derivative degenerates (i! vanishes mod p).
    """
    if F.kind != "prime":
        raise UnsupportedParametersError(
            "hermite_eval requires a prime field (formal derivatives over "
            "GF(2^ell) vanish at order >= 2)"
        )
    if t >= F.p:
        raise UnsupportedParametersError(
            f"derivative order t={t} >= p={F.p}: formal derivatives degenerate "
            "at order >= characteristic"
        )
    F.validate(alpha)
    f = poly_trim(list(f))
    _check_operand(f, F)
    if len(f) - 1 < F.p:
        coeffs = _taylor_coeffs(f, alpha, t, F)
    else:
        coeffs = _taylor_coeffs_synthetic(f, alpha, t, F)
    p = F.p
    out = []
    fct = 1
    for i in range(t + 1):
        if i:
            fct = fct * i % p
        out.append(coeffs[i] * fct % p)
    return out


# ---------------------------------------------------------------------------
# primitive elements


def factor_q_minus_1(F: FieldSpec) -> list[int]:
    """Prime factors of q - 1 (with multiplicity)."""
    n = F.q - 1
    if n == 0:
        return []
    if n < (1 << 62):
        return factorize(n)
    if is_prime(n):  # e.g. Mersenne-prime field orders
        return [n]
    raise PreprocessingRequiredError(
        f"factorization of q-1 (q = 2^{F.ell if F.kind == 'binary' else None}) "
        "exceeds the desk-scale bound 2^62 and is not supplied"
    )


def find_primitive(F: FieldSpec, rng_seed: int) -> FieldElement:
    """A generator of the multiplicative group, deterministic given rng_seed.

    Samples candidates and tests orders against the prime factors of q - 1;
    the factorization must be available (supplied, computable at desk scale,
    or q - 1 itself prime).
    """
    q = F.q
    if q == 2:
        return 1  # the group is trivial
    factors = F.q_minus_1_factors
    if factors is None:
        factors = tuple(factor_q_minus_1(F))
    distinct = sorted(set(factors))
    rng = random.Random(rng_seed)
    while True:
        cand = rng.randrange(1, q)
        if cand == 1 and q > 2:
            continue
        if all(F.pow(cand, (q - 1) // r) != F.one for r in distinct):
            return cand


def with_preprocessing(F: FieldSpec, rng_seed: int = 0x5EED) -> FieldSpec:
    """Copy of F carrying q_minus_1_factors and zeta."""
    factors = tuple(factor_q_minus_1(F))
    base = FieldSpec(
        kind=F.kind, p=F.p, ell=F.ell, modulus=F.modulus,
        q_minus_1_factors=factors,
    )
    zeta = find_primitive(base, rng_seed)
    return FieldSpec(
        kind=F.kind, p=F.p, ell=F.ell, modulus=F.modulus,
        zeta=zeta, q_minus_1_factors=factors,
    )
