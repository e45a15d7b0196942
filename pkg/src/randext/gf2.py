"""Carryless (GF(2)[x]) arithmetic on Python ints.

A polynomial over GF(2) is an int whose bit i is the coefficient of x^i.
Multiplication uses shift-and-xor for small operands and Kronecker
substitution into integer multiplication (16- or 32-bit guard slots, done by
GMP) for large ones, which keeps it subquadratic without native carryless
instructions.
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpz

# byte -> 16-bit zero-interleave (for squaring: bit j -> bit 2j)
_SPREAD2 = [0] * 256
for _b in range(256):
    _s = 0
    for _j in range(8):
        if (_b >> _j) & 1:
            _s |= 1 << (2 * _j)
    _SPREAD2[_b] = _s
_SPREAD2_BYTES = [v.to_bytes(2, "little") for v in _SPREAD2]

# byte -> 16 bytes: bit j -> bit 16j (one uint16 slot per bit)
_SPREAD16_BYTES = []
for _b in range(256):
    _out = bytearray(16)
    for _j in range(8):
        _out[2 * _j] = (_b >> _j) & 1
    _SPREAD16_BYTES.append(bytes(_out))

# byte -> 32 bytes: bit j -> bit 32j
_SPREAD32_BYTES = []
for _b in range(256):
    _out = bytearray(32)
    for _j in range(8):
        _out[4 * _j] = (_b >> _j) & 1
    _SPREAD32_BYTES.append(bytes(_out))


def spread2(a: int) -> int:
    """Insert one zero bit between consecutive bits of a."""
    if a == 0:
        return 0
    data = a.to_bytes((a.bit_length() + 7) // 8, "little")
    return int.from_bytes(b"".join(_SPREAD2_BYTES[c] for c in data), "little")


def _spread_slots(a: int, table: list[bytes]) -> bytes:
    data = a.to_bytes((a.bit_length() + 7) // 8, "little")
    return b"".join(table[c] for c in data)


def gf2_sqr(a: int) -> int:
    """Square of a over GF(2)[x] (free of cross terms)."""
    return spread2(a)


_SMALL_CLMUL_BITS = 256


def clmul(a: int, b: int) -> int:
    """Carryless product of a and b."""
    if a == 0 or b == 0:
        return 0
    if a.bit_length() > b.bit_length():
        a, b = b, a
    na = a.bit_length()
    if na <= _SMALL_CLMUL_BITS or na * b.bit_length() <= 1 << 16:
        acc = 0
        while a:
            low = a & -a
            acc ^= b << (low.bit_length() - 1)
            a ^= low
        return acc
    # Kronecker: guard slots wide enough to hold column sums (<= na).
    if na < (1 << 16):
        ta, width = _SPREAD16_BYTES, 16
    else:
        ta, width = _SPREAD32_BYTES, 32
    A = mpz(int.from_bytes(_spread_slots(a, ta), "little"))
    B = mpz(int.from_bytes(_spread_slots(b, ta), "little"))
    prod = int(A * B)
    nbytes = (prod.bit_length() + 7) // 8
    pad = -nbytes % (width // 8)
    raw = np.frombuffer(prod.to_bytes(nbytes + pad, "little"), dtype=np.uint8)
    slots = raw.view(np.uint16 if width == 16 else np.uint32)
    bits = (slots & 1).astype(np.uint8)
    packed = np.packbits(bits, bitorder="little").tobytes()
    return int.from_bytes(packed, "little")


def gf2_degree(a: int) -> int:
    """Degree of a, with deg(0) = -1."""
    return a.bit_length() - 1


def gf2_mod(a: int, m: int) -> int:
    """a mod m over GF(2)[x]; m must be nonzero."""
    d = gf2_degree(m)
    if d == 0:
        return 0
    g = m ^ (1 << d)  # low part of the modulus
    while a.bit_length() > d:
        hi = a >> d
        a &= (1 << d) - 1
        a ^= clmul(hi, g) if g else 0
    return a


def gf2_mulmod(a: int, b: int, m: int) -> int:
    return gf2_mod(clmul(a, b), m)


def gf2_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("gf2 division by zero")
    db = gf2_degree(b)
    q = 0
    while a.bit_length() - 1 >= db:
        shift = a.bit_length() - 1 - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


def gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, gf2_mod(a, b)
    return a


def gf2_pow_mod(a: int, e: int, m: int) -> int:
    r = 1
    a = gf2_mod(a, m)
    while e:
        if e & 1:
            r = gf2_mulmod(r, a, m)
        a = gf2_mod(gf2_sqr(a), m)
        e >>= 1
    return r


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Standard test: x^(2^d) == x mod f and gcd(x^(2^(d/r)) - x, f) = 1 for
    every prime r | d."""
    d = gf2_degree(f)
    if d <= 0:
        return False
    if d == 1:
        return True
    if not f & 1:  # divisible by x
        return False
    checkpoints = {d // r for r in _prime_divisors(d)}
    r = 2  # x
    powers = {}
    for j in range(1, d + 1):
        r = gf2_mod(gf2_sqr(r), f)
        if j in checkpoints:
            powers[j] = r
    if r != 2:  # x^(2^d) != x
        return False
    for j, rj in powers.items():
        if gf2_gcd(rj ^ 2, f) != 1:
            return False
    return True


# Small irreducibles (degree 2..10) for sieving candidates quickly.
_SIEVE_POLYS: list[int] | None = None


def _sieve_polys() -> list[int]:
    global _SIEVE_POLYS
    if _SIEVE_POLYS is None:
        out = []
        for deg in range(2, 11):
            for f in range((1 << deg) + 1, 1 << (deg + 1), 2):
                if is_irreducible(f):
                    out.append(f)
        _SIEVE_POLYS = out
    return _SIEVE_POLYS


def lex_smallest_irreducible(ell: int) -> int:
    """Lexicographically smallest irreducible polynomial of degree ell: the
    degree-ell monic polynomial whose low coefficient bits, read as an
    integer, are minimal."""
    if ell < 1:
        raise ValueError("degree must be positive")
    if ell == 1:
        return 0b10  # x
    top = 1 << ell
    # a reducible degree-ell polynomial has a factor of degree <= ell // 2
    sieve = [s for s in _sieve_polys() if gf2_degree(s) <= ell // 2]
    residues = [(s, gf2_mod(top, s)) for s in sieve]
    c = 1
    while True:
        ok = True
        for s, r in residues:
            if gf2_mod(c, s) == r:  # s divides x^ell + c
                ok = False
                break
        if ok and is_irreducible(top | c):
            return top | c
        c += 2
