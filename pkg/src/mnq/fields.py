"""Exact arithmetic in GF(p^e) on a canonical integer encoding.

The element with coefficient vector (c0, ..., c_{e-1}) over GF(p) is encoded
as sum(c_i * p**i), an integer in [0, q). That encoding is the interchange
format for every table, cache file and CLI surface in this package. For
prime fields the encoding is just the residue itself.

The reduction modulus is deterministic: the monic irreducible of degree e
whose non-leading coefficient tuple has the smallest encoding. Likewise the
canonical non-square is the non-square element of smallest encoding, so two
contexts for the same (p, e) are always interchangeable.
"""
from __future__ import annotations

import enum
from functools import lru_cache

import numpy as np

from .intpoly import is_prime

MAX_ORDER = 1 << 62          # refuse fields beyond the supported word size
PARITY_TABLE_MAX = 1 << 20   # dense character table built up to this order


class CharacteristicError(ValueError):
    """A square/non-square distinction was requested in characteristic 2."""


class InternalCheckError(RuntimeError):
    """A must-not-happen condition fired; indicates a bug, not bad input."""


class Parity(enum.IntEnum):
    """Quadratic character value: 0 at zero, +1 on squares, -1 otherwise."""

    ZERO = 0
    SQUARE = 1
    NON_SQUARE = -1


class Field:
    """Immutable context for GF(p^e); all methods take and return encodings."""

    def __init__(self, p: int, e: int = 1):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p!r}")
        if not isinstance(e, int) or e < 1:
            raise ValueError(f"extension degree must be a positive integer, got {e!r}")
        q = p**e
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds the supported maximum {MAX_ORDER}")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = self._find_modulus()
        # parity_table[u] is int(chi(u)); None when the field is too large or even
        self.parity_table: np.ndarray | None = None
        self.non_square: int | None = None
        if p != 2:
            if q <= PARITY_TABLE_MAX:
                self.parity_table = self._build_parity_table()
                self.non_square = int(np.flatnonzero(self.parity_table == -1)[0])
            else:
                u = 2
                while self.parity_by_pow(u) != Parity.NON_SQUARE:
                    u += 1
                self.non_square = u
        self._digits: np.ndarray | None = None  # lazy (q, e) digit matrix
        self._pvec: np.ndarray | None = None

    # -- construction helpers ------------------------------------------------

    def _find_modulus(self) -> tuple[int, ...]:
        """Monic irreducible of degree e with the smallest coefficient encoding."""
        p, e = self.p, self.e
        if e == 1:
            return (0, 1)
        for low_enc in range(p**e):
            cand = self.decode(low_enc) + (1,)
            if self._is_irreducible(cand):
                return cand
        raise InternalCheckError(f"no irreducible of degree {e} over GF({p})")

    def _is_irreducible(self, f: tuple[int, ...]) -> bool:
        """Monic f of degree e is irreducible iff x^(p^e) = x mod f and
        gcd(x^(p^(e/r)) - x, f) = 1 for every prime r dividing e."""
        p, e = self.p, self.e
        x = (0, 1)
        if self._polymod_pow_x(f, p**e) != x:
            return False
        r = 2
        m = e
        seen = set()
        while m > 1:
            while r * r <= m and m % r:
                r += 1
            rr = r if r * r <= m else m
            seen.add(rr)
            while m % rr == 0:
                m //= rr
        for rr in seen:
            t = self._polymod_pow_x(f, p ** (e // rr))
            g = self._poly_gcd_modp(self._poly_sub_modp(t, x), f)
            if len(g) > 1:
                return False
        return True

    def _polymod_pow_x(self, f: tuple[int, ...], k: int) -> tuple[int, ...]:
        """x**k reduced mod (f, p), coefficients lowest first."""
        result = (1,)
        base = (0, 1)
        while k:
            if k & 1:
                result = self._polymulmod(result, base, f)
            base = self._polymulmod(base, base, f)
            k >>= 1
        return result

    def _polymulmod(self, a, b, f):
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % p
        e = len(f) - 1
        for i in range(len(out) - 1, e - 1, -1):
            c = out[i]
            if c:
                out[i] = 0
                for j in range(e):
                    out[i - e + j] = (out[i - e + j] - c * f[j]) % p
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return tuple(out)

    def _poly_sub_modp(self, a, b):
        p = self.p
        n = max(len(a), len(b))
        out = [( (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) ) % p for i in range(n)]
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return tuple(out)

    @staticmethod
    def _trim(x: list[int]) -> list[int]:
        while len(x) > 1 and x[-1] == 0:
            x.pop()
        return x or [0]

    def _poly_rem_modp(self, a, b):
        p = self.p
        r = self._trim([c % p for c in a])
        b = self._trim([c % p for c in b])
        db = len(b) - 1
        inv = pow(b[-1], p - 2, p)
        while len(r) - 1 >= db and any(r):
            c = r[-1] * inv % p
            shift = len(r) - 1 - db
            for j in range(len(b)):
                r[shift + j] = (r[shift + j] - c * b[j]) % p
            r.pop()  # leading coefficient cancelled
            self._trim(r)
        return self._trim(r)

    def _poly_gcd_modp(self, a, b):
        a = self._trim([c % self.p for c in a])
        b = self._trim([c % self.p for c in b])
        while any(b):
            a, b = b, self._poly_rem_modp(a, b)
        return tuple(a)

    def _build_parity_table(self) -> np.ndarray:
        q = self.q
        table = np.full(q, -1, dtype=np.int8)
        table[0] = 0
        if self.e == 1:
            sq = (np.arange(1, q, dtype=np.int64) ** 2) % q
            table[sq] = 1
        else:
            for u in range(1, q):
                table[self.mul(u, u)] = 1
        return table

    # -- encoding ------------------------------------------------------------

    def decode(self, u: int) -> tuple[int, ...]:
        """Coefficient vector (length e) of an encoding."""
        p = self.p
        out = []
        for _ in range(self.e):
            out.append(u % p)
            u //= p
        return tuple(out)

    def encode(self, coeffs) -> int:
        out = 0
        m = 1
        for c in coeffs:
            out += (c % self.p) * m
            m *= self.p
        return out

    @property
    def modulus_encoding(self) -> int:
        """Integer encoding of the modulus including its leading 1."""
        return sum(c * self.p**i for i, c in enumerate(self.modulus))

    # -- arithmetic ----------------------------------------------------------

    def add(self, u: int, v: int) -> int:
        p = self.p
        if self.e == 1:
            return (u + v) % p
        out = 0
        m = 1
        while u or v:
            out += ((u + v) % p) * m
            u //= p
            v //= p
            m *= p
        return out

    def sub(self, u: int, v: int) -> int:
        p = self.p
        if self.e == 1:
            return (u - v) % p
        out = 0
        m = 1
        while u or v:
            out += ((u - v) % p) * m
            u //= p
            v //= p
            m *= p
        return out

    def neg(self, u: int) -> int:
        return self.sub(0, u)

    def mul(self, u: int, v: int) -> int:
        p = self.p
        if self.e == 1:
            return u * v % p
        if u == 0 or v == 0:
            return 0
        a, b = self.decode(u), self.decode(v)
        t = [0] * (2 * self.e - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    t[i + j] += ai * bj
        f = self.modulus
        e = self.e
        for i in range(len(t) - 1, e - 1, -1):
            c = t[i] % p
            if c:
                for j in range(e):
                    t[i - e + j] -= c * f[j]
            t[i] = 0
        return self.encode(t[:e])

    def inv(self, u: int) -> int:
        if u == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.e == 1:
            return pow(u, self.p - 2, self.p)
        return self.pow(u, self.q - 2)

    def pow(self, u: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(u), -k)
        if self.e == 1:
            return pow(u, k, self.p)
        result = 1
        base = u
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    # -- quadratic character ---------------------------------------------------

    def parity(self, u: int) -> Parity:
        """Quadratic character of u, by table lookup when one was built."""
        if self.p == 2:
            raise CharacteristicError("no square/non-square split in characteristic 2")
        if self.parity_table is not None:
            return Parity(int(self.parity_table[u]))
        return self.parity_by_pow(u)

    def parity_by_pow(self, u: int) -> Parity:
        """Quadratic character via u^((q-1)/2); the table-free route."""
        if self.p == 2:
            raise CharacteristicError("no square/non-square split in characteristic 2")
        if u == 0:
            return Parity.ZERO
        r = self.pow(u, (self.q - 1) // 2)
        if r == 1:
            return Parity.SQUARE
        if r == self.neg(1):
            return Parity.NON_SQUARE
        raise InternalCheckError(f"u^((q-1)/2) landed outside {{1,-1}} for u={u}")

    # -- integer polynomial evaluation -----------------------------------------

    def eval_poly(self, coeffs, u: int) -> int:
        """Evaluate an integer-coefficient polynomial at u, coefficients mod p."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, u), c % self.p)
        return acc

    # -- bulk helpers (exact, numpy-backed) -------------------------------------

    def _digit_state(self):
        if self._digits is None:
            p, e, q = self.p, self.e, self.q
            digits = np.empty((q, e), dtype=np.int64)
            u = np.arange(q, dtype=np.int64)
            for i in range(e):
                digits[:, i] = u % p
                u //= p
            self._digits = digits
            self._pvec = p ** np.arange(e, dtype=np.int64)
        return self._digits, self._pvec

    def bulk_sub(self, u_arr: np.ndarray, v_arr: np.ndarray) -> np.ndarray:
        """Elementwise field subtraction on encoding arrays."""
        if self.e == 1:
            return (u_arr - v_arr) % self.p
        digits, pvec = self._digit_state()
        return ((digits[u_arr] - digits[v_arr]) % self.p) @ pvec

    def bulk_add(self, u_arr: np.ndarray, v_arr: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (u_arr + v_arr) % self.p
        digits, pvec = self._digit_state()
        return ((digits[u_arr] + digits[v_arr]) % self.p) @ pvec

    # ---------------------------------------------------------------------------

    def __repr__(self) -> str:
        return f"Field(p={self.p}, e={self.e}, q={self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash((self.p, self.e))


@lru_cache(maxsize=None)
def _cached_field(p: int, e: int) -> Field:
    return Field(p, e)


def cached_field(p: int, e: int = 1) -> Field:
    """Shared Field instances; safe because contexts are never mutated."""
    return _cached_field(p, e)


def field_for_order(q: int) -> Field:
    """Field of order q = p^e, refusing non-prime-powers."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    from .intpoly import factor

    fs = factor(q)
    p = fs[0]
    if any(f != p for f in fs):
        raise ValueError(f"{q} is not a prime power")
    return cached_field(p, len(fs))
