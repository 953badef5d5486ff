"""Character sums over GF(q) and the square-root guarantee for witnesses.

The number of a passing all eight character conditions is, up to boundary
terms, the field average of prod(1 + eps_i*chi(f_i(a)))/2^8. Expanding the
product expresses that census through the 255 subset character sums, each
bounded by (deg - 1)*sqrt(q); collecting the degrees gives a single
constant (1537 for both residue classes), so the census is at least
(q - 1537*sqrt(q))/2^8 and outgrows the 14 possible polynomial roots once
q clears an explicit threshold. Everything here is exact: the scaled sum
2^8*S is an integer, the expansion identity is checked as integers, and
the threshold predicate compares squared integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import sqrt

from .fields import CharacteristicError, Field, InternalCheckError
from .construct import ConditionSet, theorem_conditions
from .intpoly import exceptional_primes


def char_sum(field: Field, coeffs) -> int:
    """Sum of the quadratic character of f(x) over the whole field."""
    if field.p == 2:
        raise CharacteristicError("character sums need an odd field")
    if not any(c % field.p for c in coeffs):
        raise ValueError("polynomial vanishes identically mod p")
    pt = field.parity_table
    total = 0
    for x in range(field.q):
        v = field.eval_poly(coeffs, x)
        total += int(pt[v]) if pt is not None else int(field.parity(v))
    return total


@dataclass
class WeilReport:
    """Census of condition-satisfying elements with its proven floor.

    s_scaled is the exact integer 2^n * S; s = S as a Fraction. The floor
    (q - c*sqrt(q))/2^n with c the collected subset-degree constant is kept
    as a float for display; guaranteed_count = max(0, ceil(S - degree_sum))
    is the exact consequence used anywhere it matters.
    """
    q: int
    residue: int
    s_scaled: int
    s: Fraction
    weil_floor: float
    guaranteed_count: int
    actual_count: int
    subset_sums: dict[int, int] | None = None


def _chi_vector(field: Field, cs: ConditionSet, x: int) -> list[int]:
    pt = field.parity_table
    if pt is not None:
        return [int(pt[field.eval_poly(f, x)]) for f in cs.polys]
    return [int(field.parity(field.eval_poly(f, x))) for f in cs.polys]


def census_report(field: Field, cs: ConditionSet | None = None, with_subsets: bool = False) -> WeilReport:
    """One pass over the field: exact scaled census, floor, actual count.

    With with_subsets=True also accumulates all 255 subset character sums
    and checks the product-expansion identity
    2^n*S - q = sum over subsets of sign(I) * charsum(prod_{i in I} f_i)
    as exact integers.
    """
    if field.p == 2:
        raise CharacteristicError("census needs an odd field")
    if cs is None:
        cs = theorem_conditions(field.q % 4)
    if field.q % 4 != cs.residue:
        raise ValueError(f"q = {field.q} is {field.q % 4} mod 4, condition set wants {cs.residue}")
    n = len(cs.polys)
    masks = 1 << n
    signs = cs.signs
    s_scaled = 0
    subset_sums = [0] * masks if with_subsets else None
    actual = 0
    for x in range(field.q):
        chis = _chi_vector(field, cs, x)
        term = 1
        satisfied = True
        for eps, c in zip(signs, chis):
            term *= 1 + eps * c
            if c != eps:
                satisfied = False
        s_scaled += term
        # the excluded values 0, 1, -1 zero one of the polynomials, so the
        # parity test alone is the full condition census
        if satisfied:
            actual += 1
        if with_subsets:
            prods = [1] * masks
            for m in range(1, masks):
                low = m & -m
                prods[m] = prods[m ^ low] * chis[low.bit_length() - 1]
                subset_sums[m] += prods[m]
    if with_subsets:
        expansion = 0
        for m in range(1, masks):
            sign = 1
            for i in range(n):
                if m >> i & 1:
                    sign *= signs[i]
            expansion += sign * subset_sums[m]
        if s_scaled - field.q != expansion:
            raise InternalCheckError(
                f"census expansion identity failed for q={field.q}: "
                f"{s_scaled} - {field.q} != {expansion}"
            )
    c = weil_constant(cs)
    s = Fraction(s_scaled, masks)
    guaranteed = max(0, -((cs.degree_sum * masks - s_scaled) // masks))
    return WeilReport(
        q=field.q,
        residue=cs.residue,
        s_scaled=s_scaled,
        s=s,
        weil_floor=(field.q - c * sqrt(field.q)) / masks,
        guaranteed_count=guaranteed,
        actual_count=actual,
        subset_sums={m: v for m, v in enumerate(subset_sums) if m} if with_subsets else None,
    )


@lru_cache(maxsize=None)
def weil_constant(cs: ConditionSet) -> int:
    """Sum of (deg of subset product - 1) over all nonempty subsets."""
    degs = cs.degrees
    n = len(degs)
    total = 0
    for m in range(1, 1 << n):
        total += sum(degs[i] for i in range(n) if m >> i & 1) - 1
    return total


def min_order_with_margin(constant: int, floor_target: int, scale: int) -> int:
    """Smallest integer q with (q - constant*sqrt(q))/scale > floor_target.

    Binary search with an exact predicate: q - R > 0 and (q - R)^2 > c^2*q
    where R = floor_target*scale. The left side is negative up to q = c^2,
    then strictly increasing, so the predicate is monotone.
    """
    r = floor_target * scale
    c = constant

    def ok(q: int) -> bool:
        d = q - r
        return d > 0 and d * d > c * c * q

    hi = 4
    while not ok(hi):
        hi *= 2
    lo = 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def threshold(cs: ConditionSet) -> int:
    """Smallest q whose census floor exceeds the possible root count."""
    return min_order_with_margin(weil_constant(cs), cs.degree_sum, 1 << len(cs.polys))


def weil_spot_check(field: Field, cs: ConditionSet, indices) -> bool:
    """Exact |charsum|^2 <= (deg-1)^2*q for one subset of the family.

    Refuses fields whose characteristic divides one of the subset product
    discriminants (the inequality is not guaranteed there).
    """
    bad = exceptional_primes(cs)
    if field.p in bad:
        raise ValueError(f"characteristic {field.p} is exceptional for this family")
    idx = sorted(set(indices))
    if not idx or idx[0] < 1 or idx[-1] > len(cs.polys):
        raise ValueError(f"subset indices must be within 1..{len(cs.polys)}")
    polys = [cs.polys[i - 1] for i in idx]
    deg = sum(len(f) - 1 for f in polys)
    pt = field.parity_table
    total = 0
    for x in range(field.q):
        prod = 1
        for f in polys:
            v = field.eval_poly(f, x)
            prod *= int(pt[v]) if pt is not None else int(field.parity(v))
            if prod == 0:
                break
        total += prod
    return total * total <= (deg - 1) ** 2 * field.q
