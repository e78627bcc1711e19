"""Points of P_w(Q): integral representatives, wgcd, normalization,
canonical forms under the rational scaling action, and the Veronese map."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .exactnum import DomainError, Rational, _int_valuation, factor
from .wspace import WeightVector


@dataclass(frozen=True)
class WPoint:
    """An integer-coordinate representative of a point of P_w(Q)."""

    w: WeightVector
    coords: tuple[int, ...]
    _wgcd: int = field(default=0, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.coords) != len(self.w.q):
            raise DomainError("coordinate/weight length mismatch")
        if all(x == 0 for x in self.coords):
            raise DomainError("all-zero point")
        if any(not isinstance(x, int) for x in self.coords):
            raise DomainError("WPoint coordinates must be integers")
        object.__setattr__(self, "_wgcd", wgcd_tuple(self.coords, self.w.q))

    @property
    def cached_wgcd(self) -> int:
        return self._wgcd

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.coords) if x != 0)

    def __str__(self) -> str:
        return "[" + ":".join(str(x) for x in self.coords) + "]"


def integralize(coords: Sequence[Rational], w: WeightVector) -> WPoint:
    """Scale rational coordinates by the minimal positive lambda into Z.

    Per prime p the required exponent of lambda is
    max_i ceil(max(-ord_p(x_i), 0) / q_i).
    """
    xs = [Fraction(x) for x in coords]
    if all(x == 0 for x in xs):
        raise DomainError("all-zero point")
    lam = 1
    denoms = math.lcm(*(x.denominator for x in xs))
    for p in sympy.primefactors(denoms):
        e = 0
        for x, q in zip(xs, w.q):
            if x == 0:
                continue
            vp = _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)
            if vp < 0:
                e = max(e, -(vp // q))  # ceil(-vp / q)
        lam *= p**e
    scaled = []
    for x, q in zip(xs, w.q):
        val = x * Fraction(lam) ** q
        assert val.denominator == 1
        scaled.append(val.numerator)
    return WPoint(w, tuple(scaled))


def wgcd_tuple(coords: Sequence[int], q: Sequence[int]) -> int:
    """Largest g with g^{q_i} | x_i for all i; zero coordinates unconstrained.

    Computed by the floor formula: product over primes p of
    p^{min_i floor(v_p(x_i)/q_i)}.
    """
    nz = [(abs(x), qi) for x, qi in zip(coords, q) if x != 0]
    if not nz:
        raise DomainError("all-zero tuple")
    g = math.gcd(*(x for x, _ in nz))
    if g == 1:
        return 1
    out = 1
    for p, _ in factor(g).factors:
        e = min(_int_valuation(x, p) // qi for x, qi in nz)
        out *= p**e
    return out


def wgcd(x: WPoint) -> int:
    return x.cached_wgcd


def normalize(x: WPoint) -> WPoint:
    """Divide out wgcd: coordinates x_i / g^{q_i}; result has wgcd 1."""
    g = x.cached_wgcd
    if g == 1:
        return x
    return WPoint(x.w, tuple(c // g**q for c, q in zip(x.coords, x.w.q)))


def _support_gcd(x: WPoint) -> int:
    return math.gcd(*(x.w.q[i] for i in x.support()))


def _sign_generator(x: WPoint, ds: int) -> tuple[int, ...]:
    """The generator of the realizable sign group on the point's support.

    Admissible lambda are eps * prod p^{t_p} with t_p in (1/ds)Z and eps a
    root of unity with every eps^{q_i} rational; the sign patterns realized
    on the support form the cyclic group generated by ((-1)^{q_i/ds})_i.
    """
    return tuple(
        (-1) ** (q // ds) if c != 0 else 1 for c, q in zip(x.coords, x.w.q)
    )


def _lex_key(coords: Sequence[int]) -> tuple:
    # positive before negative at equal magnitude; magnitudes compare first
    return tuple((abs(c), 0 if c >= 0 else 1) for c in coords)


def _sign_key(coords: Sequence[int]) -> tuple:
    """Orbit tie-break: last nonzero coordinate positive wins, then lex."""
    last = max(i for i, c in enumerate(coords) if c != 0)
    return (0 if coords[last] > 0 else 1, _lex_key(coords))


def canonicalize(x: WPoint) -> WPoint:
    """Unique orbit representative under the full rational scaling action.

    Stage 1 divides, per prime p, by p^{q_i t_p} with
    t_p = floor(ds * min_{x_i != 0} (v_p(x_i)/q_i)) / ds, where ds is the
    gcd of the weights on the point's support (zero coordinates impose no
    constraint on lambda, so the support lattice is the right one).
    Stage 2 picks the lexicographically smallest of the <= 2 sign patterns
    reachable by roots of unity.  Idempotent; equivalent inputs agree.
    """
    ds = _support_gcd(x)
    coords = list(x.coords)
    q = x.w.q
    nz = [(i, abs(c)) for i, c in enumerate(coords) if c != 0]
    g = math.gcd(*(a for _, a in nz))
    # stage 1: only primes dividing every nonzero coordinate can deflate
    for p, _ in (factor(g).factors if g > 1 else ()):
        while True:
            tnum = min(ds * _int_valuation(abs(coords[i]), p) // q[i] for i, _ in nz)
            if tnum <= 0:
                break
            for i, _ in nz:
                coords[i] //= p ** (q[i] * tnum // ds)
            nz = [(i, abs(coords[i])) for i, _ in nz]
    stage1 = tuple(coords)
    # stage 2: sign reduction
    gen = _sign_generator(x, ds)
    flipped = tuple(s * c for s, c in zip(gen, stage1))
    best = min(stage1, flipped, key=_sign_key)
    return WPoint(x.w, best)


def equals(x: WPoint, y: WPoint) -> bool:
    """Same point of P_w(Q)?  Decided via canonical forms."""
    if x.w.q != y.w.q:
        raise DomainError("points live in different weighted spaces")
    return canonicalize(x).coords == canonicalize(y).coords


def act(lam: Rational, x: WPoint) -> WPoint:
    """The scaling action lambda * x = (lambda^{q_i} x_i); must stay integral."""
    lam = Fraction(lam)
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    out = []
    for c, q in zip(x.coords, x.w.q):
        val = Fraction(c) * lam**q
        if val.denominator != 1:
            raise DomainError(
                f"non-integral coordinate {val} under lambda={lam}; integralize first"
            )
        out.append(val.numerator)
    return WPoint(x.w, tuple(out))


def veronese(x: WPoint) -> tuple[int, ...]:
    """phi_m: the classical projective image (x_i^{m/q_i}), gcd-reduced,
    sign-normalized so the first nonzero coordinate is positive."""
    m = x.w.m
    raw = [c ** (m // q) for c, q in zip(x.coords, x.w.q)]
    g = math.gcd(*raw)
    out = [c // g for c in raw]
    for c in out:
        if c != 0:
            if c < 0:
                out = [-v for v in out]
            break
    return tuple(out)


def parse_point(text: str, w: WeightVector) -> WPoint:
    """Parse colon-separated rational coordinates, e.g. '1/2:4:8'."""
    try:
        coords = [Fraction(part) for part in text.split(":")]
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad point {text!r}") from exc
    if len(coords) != len(w.q):
        raise DomainError(
            f"point has {len(coords)} coordinates but weights have {len(w.q)}"
        )
    return integralize(coords, w)
