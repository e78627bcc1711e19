"""Height functions: local/global weighted heights, S-split heights,
weighted gcds (multiplicative and logarithmic), and the generalized gcd."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import (
    INFINITE_PLACE,
    INFINITY,
    DomainError,
    FormalLog,
    Place,
    Rational,
    _int_valuation,
    flog_min,
    ord_plus,
    prime_to_S,
)
from .wpoint import WPoint, veronese, wgcd_tuple
from .wspace import WeightVector


def _support_primes(coords: Iterable[int]) -> list[int]:
    import sympy

    prod = 1
    for c in coords:
        if c != 0:
            prod *= abs(c)
    if prod == 1:
        return []
    return sorted(sympy.primefactors(prod))


def _argmax_weighted_abs(coords: Sequence[int], q: Sequence[int], m: int) -> int:
    """Index maximizing |x_i|^{1/q_i}, decided exactly in the m-th power domain."""
    best = None
    best_val = None
    for i, (c, qi) in enumerate(zip(coords, q)):
        if c == 0:
            continue
        val = abs(c) ** (m // qi)
        if best_val is None or val > best_val:
            best, best_val = i, val
    assert best is not None
    return best


def local_height(x: WPoint, place: Place) -> FormalLog:
    """log max_i |x_i|_v^{1/q_i} at one place, exactly."""
    q = x.w.q
    if place.is_finite:
        p = place.p
        c = min(
            Fraction(_int_valuation(abs(xi), p), qi)
            for xi, qi in zip(x.coords, q)
            if xi != 0
        )
        return FormalLog.of_prime(p, -c)
    i = _argmax_weighted_abs(x.coords, q, x.w.m)
    return FormalLog.of_log(abs(x.coords[i])).scale(Fraction(1, q[i]))


def lwh(x: WPoint) -> FormalLog:
    """Logarithmic weighted height: sum of local heights over all places."""
    total = local_height(x, INFINITE_PLACE)
    for p in _support_primes(x.coords):
        total = total + local_height(x, Place(p))
    return total


def wh_m_power(x: WPoint) -> int:
    """The exact integer wh(x)^m, via the classical height of the Veronese
    image: max |coordinate| after gcd reduction."""
    return max(abs(c) for c in veronese(x))


def hgcd(alpha: Rational, beta: Rational) -> FormalLog:
    """Generalized logarithmic gcd: sum over places of min(nu+(a), nu+(b))."""
    a, b = Fraction(alpha), Fraction(beta)
    if a == 0 and b == 0:
        raise DomainError("hgcd(0, 0) is undefined")
    total = FormalLog.zero()
    import sympy

    nums = 1
    for v in (a, b):
        if v != 0:
            nums *= abs(v.numerator * v.denominator)
    for p in sympy.primefactors(nums):
        va = ord_plus(a, Place(p))
        vb = ord_plus(b, Place(p))
        v = vb if va is INFINITY else (va if vb is INFINITY else min(va, vb))
        if v:
            total = total + FormalLog.of_prime(p, v)
    va = ord_plus(a, INFINITE_PLACE)
    vb = ord_plus(b, INFINITE_PLACE)
    arch = vb if va is INFINITY else (va if vb is INFINITY else flog_min(va, vb))
    return total + arch


def hwgcd_mult(coords: Sequence[Rational], w: WeightVector) -> int:
    """Generalized weighted gcd over finite places:
    prod_p p^{min_i floor(nu_p+(x_i)/q_i)}; zero coordinates unconstrained."""
    xs = [Fraction(c) for c in coords]
    if all(c == 0 for c in xs):
        raise DomainError("all-zero tuple")
    out = 1
    for p in _support_primes([c.numerator for c in xs if c != 0]):
        e = min(
            max(
                _int_valuation(c.numerator, p) - _int_valuation(c.denominator, p), 0
            )
            // qi
            for c, qi in zip(xs, w.q)
            if c != 0
        )
        if e > 0:
            out *= p**e
    return out


def log_hwgcd_point(x: WPoint) -> FormalLog:
    """Generalized logarithmic weighted gcd of the stored representative.

    Finite part: sum_p min_i floor(v_p(x_i)/q_i) * log p.  Archimedean
    term: min_i floor(nu_oo+(x_i)/q_i), identically 0 on integer
    representatives since nonzero integers have nu_oo+ = 0.
    """
    total = FormalLog.zero()
    g = wgcd_tuple(x.coords, x.w.q)
    if g > 1:
        total = total + FormalLog.of_log(g)
    # archimedean floor is 0: every nonzero integer has |x| >= 1
    return total


def log_hwgcd_tuple(coords: Sequence[Rational], w: WeightVector) -> FormalLog:
    """log hwgcd of a rational tuple, archimedean floor term included.

    The archimedean term min_i floor(nu_oo+(x_i)/q_i) is an exact integer,
    carried on the constant (log e) component of FormalLog.
    """
    xs = [Fraction(c) for c in coords]
    if all(c == 0 for c in xs):
        raise DomainError("all-zero tuple")
    h = hwgcd_mult(xs, w)
    total = FormalLog.of_log(h) if h > 1 else FormalLog.zero()
    arch = None
    for c, qi in zip(xs, w.q):
        if c == 0:
            continue
        v = ord_plus(c, INFINITE_PLACE)
        k = v.floor_of_quotient(qi)
        arch = k if arch is None else min(arch, k)
    if arch:
        total = total + FormalLog.of_const(arch)
    return total


@dataclass(frozen=True)
class SplitHeight:
    """A place-split divisor height: contributions inside and outside S."""

    in_S: FormalLog
    out_S: FormalLog

    def total(self) -> FormalLog:
        return self.in_S + self.out_S


def split_height_S(
    x: WPoint, S: Iterable[int], divisor: Sequence[int] | None = None
) -> SplitHeight:
    """S-split height for a multiset of coordinate hyperplanes H_i.

    divisor lists coordinate indices (default: all of them, i.e. -K_X).
    With N = product of the divisor coordinates, the per-place local term
    is (1/m) v_p(N) log p; the archimedean nu+ term vanishes on integer
    coordinates, so in_S + out_S = (1/m) log|N| and
    out_S = (1/m) log |N|'_S exactly.
    """
    if x.cached_wgcd != 1:
        raise DomainError("split_height_S expects a normalized point")
    idx = list(range(len(x.coords))) if divisor is None else list(divisor)
    if not idx:
        raise DomainError("empty divisor")
    N = 1
    for i in idx:
        if x.coords[i] == 0:
            raise DomainError(
                f"coordinate {i} vanishes on the divisor support: infinite height"
            )
        N *= x.coords[i]
    S = set(S)
    m = x.w.m
    out_part = prime_to_S(N, S)
    out = (
        FormalLog.of_log(out_part).scale(Fraction(1, m))
        if out_part > 1
        else FormalLog.zero()
    )
    in_part = abs(N) // out_part
    in_ = (
        FormalLog.of_log(in_part).scale(Fraction(1, m))
        if in_part > 1
        else FormalLog.zero()
    )
    return SplitHeight(in_S=in_, out_S=out)


def classical_height_log(coords: Sequence[int]) -> FormalLog:
    """Classical logarithmic projective height of an integer tuple."""
    g = math.gcd(*coords)
    if g == 0:
        raise DomainError("all-zero tuple")
    h = max(abs(c) for c in coords) // g
    return FormalLog.of_log(h) if h > 1 else FormalLog.zero()
