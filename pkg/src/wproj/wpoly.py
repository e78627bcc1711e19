"""Weighted homogeneous polynomials: parsing, validation, exact evaluation,
and subscheme-associated height functions."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import (
    INFINITE_PLACE,
    DomainError,
    FormalLog,
    Place,
    _int_valuation,
    flog_min,
)
from .wheight import _argmax_weighted_abs, _support_primes
from .wpoint import WPoint
from .wspace import WeightVector


class PolyParseError(DomainError):
    """Syntax or homogeneity error in polynomial text, position-annotated."""


@dataclass(frozen=True)
class WPoly:
    """A weighted homogeneous polynomial with integer coefficients.

    Terms are (coefficient, exponent vector), sorted in graded
    reverse-lexicographic order, no duplicates, no zero coefficients.
    """

    vars: tuple[str, ...]
    weights: tuple[int, ...]
    terms: tuple[tuple[int, tuple[int, ...]], ...]
    degree: int

    def eval(self, point: Sequence[int]) -> int:
        if len(point) != len(self.vars):
            raise DomainError(
                f"expected {len(self.vars)} values, got {len(point)}"
            )
        total = 0
        for coeff, exps in self.terms:
            v = coeff
            for x, e in zip(point, exps):
                if e:
                    v *= x**e
            total += v
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (coeff, exps) in enumerate(self.terms):
            mono = " ".join(
                (name if e == 1 else f"{name}^{e}")
                for name, e in zip(self.vars, exps)
                if e > 0
            )
            mag = abs(coeff)
            body = mono if (mag == 1 and mono) else (f"{mag} {mono}".strip())
            if k == 0:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        return " ".join(parts)


def _grevlex_key(exps: tuple[int, ...]) -> tuple:
    return (sum(exps), tuple(-e for e in reversed(exps)))


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_]\w*)|(?P<op>[-+*^]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(
                f"unexpected character {text[pos]!r} at position {pos}"
            )
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


def parse(text: str, weights: dict[str, int] | None = None, *, w: WeightVector | None = None, var_names: Sequence[str] | None = None) -> WPoly:
    """Parse polynomial text against a name -> weight table.

    Grammar: poly := ['-'] term (('+'|'-') term)*;  term := [integer]
    factor*;  factor := ident ('^' uint)?;  juxtaposition (whitespace or
    '*') is product.  Rejects inhomogeneous input, listing the offending
    monomials with their weighted degrees.
    """
    if weights is None:
        if w is None or var_names is None:
            raise DomainError("need a weights table or (w, var_names)")
        weights = dict(zip(var_names, w.q))
    names = tuple(weights)
    index = {n: i for i, n in enumerate(names)}
    qs = tuple(weights[n] for n in names)

    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None, len(text))

    terms: list[tuple[int, list[int]]] = []
    sign = 1
    kind, val, pos = peek()
    if kind == "op" and val in "+-":
        sign = -1 if val == "-" else 1
        i += 1
    while True:
        # one term
        coeff = sign
        exps = [0] * len(names)
        saw_factor = False
        kind, val, pos = peek()
        if kind == "int":
            coeff *= int(val)
            saw_factor = True
            i += 1
        while True:
            kind, val, pos = peek()
            if kind == "op" and val == "*":
                i += 1
                kind, val, pos = peek()
            if kind != "ident":
                break
            if val not in index:
                raise PolyParseError(f"unknown variable {val!r} at position {pos}")
            vi = index[val]
            i += 1
            e = 1
            kind2, val2, pos2 = peek()
            if kind2 == "op" and val2 == "^":
                i += 1
                kind3, val3, pos3 = peek()
                if kind3 != "int":
                    raise PolyParseError(f"expected exponent at position {pos3}")
                e = int(val3)
                i += 1
            exps[vi] += e
            saw_factor = True
        if not saw_factor:
            raise PolyParseError(f"expected a term at position {pos}")
        terms.append((coeff, exps))
        kind, val, pos = peek()
        if kind is None:
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
        else:
            raise PolyParseError(f"expected '+' or '-' at position {pos}")

    # combine duplicates, canonical order
    combined: dict[tuple[int, ...], int] = {}
    for coeff, exps in terms:
        key = tuple(exps)
        combined[key] = combined.get(key, 0) + coeff
    clean = [(c, e) for e, c in combined.items() if c != 0]
    clean.sort(key=lambda t: _grevlex_key(t[1]))
    if not clean:
        raise PolyParseError("zero polynomial")

    degrees = {sum(e * q for e, q in zip(exps, qs)) for _, exps in clean}
    if len(degrees) != 1:
        bad = ", ".join(
            f"{_monomial_str(names, exps)} (degree {sum(e * q for e, q in zip(exps, qs))})"
            for _, exps in clean
        )
        raise PolyParseError(f"not weighted homogeneous: {bad}")
    return WPoly(vars=names, weights=qs, terms=tuple(clean), degree=degrees.pop())


def _monomial_str(names, exps) -> str:
    body = " ".join(
        (n if e == 1 else f"{n}^{e}") for n, e in zip(names, exps) if e > 0
    )
    return body or "1"


# ---------------------------------------------------------------------------
# .wpoly files: a 'weights:' header line plus one polynomial per stanza
# ---------------------------------------------------------------------------


def parse_wpoly_file(text: str) -> tuple[dict[str, int], list[WPoly]]:
    lines = text.splitlines()
    weights: dict[str, int] | None = None
    stanzas: list[str] = []
    current: list[str] = []
    for line in lines:
        stripped = line.strip()
        if stripped.startswith("#"):
            continue
        if stripped.lower().startswith("weights:"):
            if weights is not None:
                raise PolyParseError("duplicate weights header")
            weights = {}
            for part in stripped[len("weights:") :].split():
                if "=" not in part:
                    raise PolyParseError(f"bad weights entry {part!r}")
                name, qtext = part.split("=", 1)
                weights[name.strip()] = int(qtext)
            continue
        if not stripped:
            if current:
                stanzas.append(" ".join(current))
                current = []
            continue
        current.append(stripped)
    if current:
        stanzas.append(" ".join(current))
    if weights is None:
        raise PolyParseError("missing 'weights:' header")
    if not stanzas:
        raise PolyParseError("no polynomials in file")
    return weights, [parse(s, weights) for s in stanzas]


# ---------------------------------------------------------------------------
# Subscheme heights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubschemeSpec:
    """Defining polynomials of a subscheme, with caller-asserted codimension.

    The codimension is not computed (no Groebner machinery in scope); it is
    echoed into every report that depends on it.
    """

    polys: tuple[WPoly, ...]
    asserted_codim: int

    def __post_init__(self) -> None:
        if not self.polys:
            raise DomainError("need at least one polynomial")
        if self.asserted_codim < 1:
            raise DomainError("codimension must be >= 1")
        v0 = self.polys[0].vars
        if any(f.vars != v0 or f.weights != self.polys[0].weights for f in self.polys):
            raise DomainError("polynomials must share variables and weights")


def local_height_Y(spec: SubschemeSpec, x: WPoint, place: Place) -> FormalLog | None:
    """Local height of x relative to the subscheme, at one place:
    min_j { -log( |f_j(x)|_v / max_i |x_i|_v^{d_j/q_i} ) }.

    Returns None (the infinite sentinel) when every f_j vanishes at x.
    """
    q = x.w.q
    values = [f.eval(x.coords) for f in spec.polys]
    if all(v == 0 for v in values):
        return None
    if place.is_finite:
        p = place.p
        cmin = min(
            Fraction(_int_valuation(abs(xi), p), qi)
            for xi, qi in zip(x.coords, q)
            if xi != 0
        )
        best: Fraction | None = None
        for f, val in zip(spec.polys, values):
            if val == 0:
                continue
            e = Fraction(_int_valuation(abs(val), p)) - f.degree * cmin
            best = e if best is None else min(best, e)
        return FormalLog.of_prime(p, best)
    # archimedean: -log(|f_j| / max_i |x_i|^{d_j/q_i})
    i = _argmax_weighted_abs(x.coords, q, x.w.m)
    log_max = FormalLog.of_log(abs(x.coords[i])).scale(Fraction(1, q[i]))
    best_fl: FormalLog | None = None
    for f, val in zip(spec.polys, values):
        if val == 0:
            continue
        term = log_max.scale(f.degree) - FormalLog.of_log(val)
        best_fl = term if best_fl is None else flog_min(best_fl, term)
    return best_fl


def global_height_Y(spec: SubschemeSpec, x: WPoint) -> FormalLog:
    """Sum of local subscheme heights over all places; infinite on Y."""
    values = [f.eval(x.coords) for f in spec.polys]
    if all(v == 0 for v in values):
        raise DomainError("point lies on the subscheme: infinite height")
    prod = 1
    for v in values:
        if v != 0:
            prod *= abs(v)
    for c in x.coords:
        if c != 0:
            prod *= abs(c)
    total = local_height_Y(spec, x, INFINITE_PLACE)
    for p in _support_primes([prod]):
        total = total + local_height_Y(spec, x, Place(p))
    return total


def log_gcd_Y(
    spec: SubschemeSpec,
    alpha: Sequence[int],
    require_unit_content: bool = True,
) -> FormalLog:
    """log gcd(|f_1(alpha)|, ..., |f_t(alpha)|) for an integer tuple.

    When gcd(alpha) = 1 this equals the sum of finite-place subscheme
    heights exactly.  With require_unit_content the hypothesis is enforced;
    otherwise the caller accepts the identity only up to a bounded error.
    """
    if require_unit_content and math.gcd(*alpha) != 1:
        raise DomainError("coordinates must have gcd 1 (or pass require_unit_content=False)")
    values = [f.eval(alpha) for f in spec.polys]
    nonzero = [abs(v) for v in values if v != 0]
    if not nonzero:
        raise DomainError("all defining polynomials vanish")
    g = math.gcd(*nonzero)
    return FormalLog.of_log(g) if g > 1 else FormalLog.zero()


def log_gcd_residual(spec: SubschemeSpec, x: WPoint) -> FormalLog:
    """log_gcd_Y minus the finite-place local height sum.

    Identically zero when gcd(coords) = 1; under the weaker wgcd = 1
    hypothesis the identity only holds up to a bounded error, and this is
    that error, reported rather than asserted away.
    """
    total = FormalLog.zero()
    prod = 1
    for f in spec.polys:
        v = f.eval(x.coords)
        if v != 0:
            prod *= abs(v)
    for c in x.coords:
        if c != 0:
            prod *= abs(c)
    for p in _support_primes([prod]):
        lam = local_height_Y(spec, x, Place(p))
        if lam is None:
            raise DomainError("point lies on the subscheme")
        total = total + lam
    return log_gcd_Y(spec, x.coords, require_unit_content=False) - total
