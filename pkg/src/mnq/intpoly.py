"""Exact integer polynomial machinery: resultants, discriminants, factoring.

Polynomials are sequences of arbitrary-precision integer coefficients,
lowest degree first, so (c0, c1, c2) means c0 + c1*x + c2*x**2. All results
are exact; nothing here ever touches floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

Coeffs = Sequence[int]

TRIAL_DIVISION_BOUND = 10**6


def normalize(f: Coeffs) -> tuple[int, ...]:
    """Drop trailing zero coefficients; the zero polynomial becomes ()."""
    f = tuple(int(c) for c in f)
    d = len(f)
    while d and f[d - 1] == 0:
        d -= 1
    return f[:d]


def degree(f: Coeffs) -> int:
    """Degree of f, with the zero polynomial at -1."""
    return len(normalize(f)) - 1


def leading_coeff(f: Coeffs) -> int:
    nf = normalize(f)
    if not nf:
        raise ValueError("zero polynomial has no leading coefficient")
    return nf[-1]


def poly_mul(f: Coeffs, g: Coeffs) -> tuple[int, ...]:
    nf, ng = normalize(f), normalize(g)
    if not nf or not ng:
        return ()
    out = [0] * (len(nf) + len(ng) - 1)
    for i, a in enumerate(nf):
        if a == 0:
            continue
        for j, b in enumerate(ng):
            out[i + j] += a * b
    return tuple(out)


def poly_eval(f: Coeffs, x: int) -> int:
    acc = 0
    for c in reversed(normalize(f)):
        acc = acc * x + c
    return acc


def derivative(f: Coeffs) -> tuple[int, ...]:
    nf = normalize(f)
    return normalize(tuple(i * c for i, c in enumerate(nf))[1:])


def _det_bareiss(rows: list[list[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination."""
    a = [row[:] for row in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Bareiss update: division by the previous pivot is exact
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[-1][-1]


def resultant(f: Coeffs, g: Coeffs) -> int:
    """Resultant of f and g via the Sylvester matrix, exact integers."""
    nf, ng = normalize(f), normalize(g)
    if not nf or not ng:
        raise ValueError("resultant of the zero polynomial is undefined")
    m, n = len(nf) - 1, len(ng) - 1
    if m == 0:
        return nf[0] ** n
    if n == 0:
        return ng[0] ** m
    size = m + n
    rows = []
    fh = list(reversed(nf))  # highest degree first
    gh = list(reversed(ng))
    for i in range(n):
        rows.append([0] * i + fh + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gh + [0] * (size - n - 1 - i))
    return _det_bareiss(rows)


def discriminant(f: Coeffs) -> int:
    """disc(f) = (-1)^(d(d-1)/2) * Res(f, f') / lc(f), exact."""
    nf = normalize(f)
    d = len(nf) - 1
    if d < 1:
        raise ValueError("discriminant requires degree >= 1")
    r = resultant(nf, derivative(nf))
    lc = nf[-1]
    if r % lc != 0:
        raise ArithmeticError("resultant not divisible by leading coefficient")
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * (r // lc)


# ---------------------------------------------------------------------------
# Integer factorization: trial division below 10**6, then Pollard rho with
# deterministic Miller-Rabin on what is left.

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin with a fixed base set, deterministic below ~3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed to split {n}")


def factor(n: int) -> list[int]:
    """Prime factors of |n| with multiplicity, ascending. Rejects 0."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: list[int] = []
    for p in (2, 3, 5):
        while n % p == 0:
            out.append(p)
            n //= p
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)  # steps between 7,11,13,17,19,23,29,31,37,...
    i = 0
    while f < TRIAL_DIVISION_BOUND and f * f <= n:
        while n % f == 0:
            out.append(f)
            n //= f
        f += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out.append(m)
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    out.sort()
    return out


def prime_support(n: int) -> set[int]:
    """Distinct prime divisors of |n|; empty for n = +-1."""
    if n in (1, -1):
        return set()
    return set(factor(n))


# ---------------------------------------------------------------------------
# Discriminant survey over subsets of a fixed polynomial family.

@dataclass(frozen=True)
class DiscriminantReport:
    """Discriminant of the product over one even-degree subset.

    subset is a bitmask over the family, bit i for the (i+1)-th polynomial.
    """
    subset: int
    degree: int
    discriminant: int
    odd_prime_factors: tuple[int, ...]


def _family_polys(family) -> list[tuple[int, ...]]:
    polys = getattr(family, "polys", family)
    return [normalize(f) for f in polys]


def _even_degree_subsets(degs: Sequence[int]) -> Iterable[int]:
    n = len(degs)
    for mask in range(1, 1 << n):
        total = sum(degs[i] for i in range(n) if mask >> i & 1)
        if total % 2 == 0:
            yield mask


def discriminant_reports(family) -> list[DiscriminantReport]:
    """One report per nonempty even-degree subset of the family."""
    polys = _family_polys(family)
    degs = [len(f) - 1 for f in polys]
    out = []
    for mask in _even_degree_subsets(degs):
        prod: tuple[int, ...] = (1,)
        for i, f in enumerate(polys):
            if mask >> i & 1:
                prod = poly_mul(prod, f)
        disc = discriminant(prod)
        if disc == 0:
            raise ArithmeticError(f"subset {mask:#x} has a repeated root; must not occur")
        odd = tuple(sorted(p for p in prime_support(disc) if p % 2))
        out.append(DiscriminantReport(mask, len(prod) - 1, disc, odd))
    return out


def exceptional_primes(family, direct: bool = False) -> set[int]:
    """Primes dividing the discriminant of some even-degree subset product.

    The default route factors the 8 individual discriminants and the 28
    pairwise resultants (disc of a product is the product of the discs times
    the squared pairwise resultants). With direct=True the product
    discriminant of every even-degree subset is factored outright; both
    routes must agree and the tests hold them to that.
    """
    polys = _family_polys(family)
    if direct:
        primes: set[int] = set()
        for rep in discriminant_reports(polys):
            primes |= prime_support(rep.discriminant)
        return primes
    degs = [len(f) - 1 for f in polys]
    n_odd = sum(1 for d in degs if d % 2)
    primes = set()
    for i, f in enumerate(polys):
        # contributions only count if some even-degree subset contains them
        if degs[i] >= 2 and (degs[i] % 2 == 0 or n_odd >= 2):
            d = discriminant(f)
            if d == 0:
                raise ArithmeticError(f"family member {i + 1} is not squarefree")
            primes |= prime_support(d)
        for j in range(i + 1, len(polys)):
            pair_odd = (degs[i] + degs[j]) % 2
            spare_odd = n_odd - (degs[i] % 2) - (degs[j] % 2)
            if pair_odd and spare_odd == 0:
                continue
            r = resultant(f, polys[j])
            if r == 0:
                raise ArithmeticError(f"family members share a root ({f}, {polys[j]})")
            primes |= prime_support(r)
    return primes
