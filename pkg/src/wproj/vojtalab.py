"""Empirical harness for the gcd-bound inequality

    gcd(f_1(a), ..., f_t(a))  <=  (max_i |a_i|^{1/q_i})^eps
                                  * (|a_0 ... a_n|'_S)^{1/(m(r-1+delta))}

over sampled normalized integer tuples.  The bound is conjectural for
general (eps, delta); this module measures it: per-grid-cell violation
counts, the minimal empirical additive constant C, delta estimates, and
candidates for the exceptional zero locus.  Measurement, not proof.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import (
    INFINITE_PLACE,
    DomainError,
    FormalLog,
    flog_max,
    prime_to_S,
)
from .wheight import local_height
from .wpoint import WPoint, wgcd_tuple
from .wpoly import SubschemeSpec
from .wspace import WeightVector

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ScanConfig:
    spec: SubschemeSpec
    w: WeightVector
    S: frozenset[int]
    epsilon_grid: tuple[Fraction, ...]
    delta_grid: tuple[Fraction, ...]
    box_radii: tuple[int, ...]
    samples: int
    seed: int
    require_coprime: bool = False
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.spec.asserted_codim < 2:
            raise DomainError("the gcd bound requires codimension >= 2")
        if not self.epsilon_grid or not self.delta_grid:
            raise DomainError("epsilon and delta grids must be nonempty")
        if any(e <= 0 for e in self.epsilon_grid) or any(
            d <= 0 for d in self.delta_grid
        ):
            raise DomainError("grid values must be positive")
        if self.spec.polys[0].weights != self.w.q:
            raise DomainError("polynomial weights do not match the scan weights")
        if len(self.box_radii) != len(self.w.q):
            raise DomainError("box radii / weights length mismatch")
        if any(r < 1 for r in self.box_radii):
            raise DomainError("box radii must be positive")
        if self.samples < 1:
            raise DomainError("need at least one sample")


@dataclass(frozen=True)
class ScanRecord:
    """One sampled tuple with everything recomputable from it and the config.

    sunit_term is None when a coordinate vanishes (the S-unit divisor term
    is only defined off the coordinate hyperplanes); margins is None in the
    same case and when the tuple lies on the subscheme (lhs infinite).
    """

    alpha: tuple[int, ...]
    on_subscheme: bool
    lhs: FormalLog | None
    height_term: FormalLog | None
    sunit_term: FormalLog | None
    margins: tuple[tuple[Fraction, Fraction, FormalLog], ...] | None

    def margin_at(self, eps: Fraction, delta: Fraction) -> FormalLog | None:
        if self.margins is None:
            return None
        for e, d, m in self.margins:
            if e == eps and d == delta:
                return m
        return None


@dataclass(frozen=True)
class CellSummary:
    eps: Fraction
    delta: Fraction
    considered: int
    violations: int
    violating_alphas: tuple[tuple[int, ...], ...]
    empirical_C: FormalLog | None  # max over records of lhs - rhs, clamped at 0


@dataclass(frozen=True)
class ScanReport:
    config: ScanConfig
    records: tuple[ScanRecord, ...]
    cells: tuple[CellSummary, ...]
    zero_coordinate_count: int
    on_subscheme_count: int

    def cell(self, eps: Fraction, delta: Fraction) -> CellSummary:
        for c in self.cells:
            if c.eps == eps and c.delta == delta:
                return c
        raise DomainError(f"no grid cell ({eps}, {delta})")

    def to_json(self) -> str:
        """Deterministic serialization: a pure function of the config."""
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": {
                "weights": list(self.config.w.q),
                "polynomials": [str(f) for f in self.config.spec.polys],
                "asserted_codim": self.config.spec.asserted_codim,
                "S": sorted(self.config.S),
                "epsilon_grid": [str(e) for e in self.config.epsilon_grid],
                "delta_grid": [str(d) for d in self.config.delta_grid],
                "box_radii": list(self.config.box_radii),
                "samples": self.config.samples,
                "seed": self.config.seed,
                "require_coprime": self.config.require_coprime,
            },
            "zero_coordinate_count": self.zero_coordinate_count,
            "on_subscheme_count": self.on_subscheme_count,
            "records": [
                {
                    "alpha": list(r.alpha),
                    "on_subscheme": r.on_subscheme,
                    "lhs": None if r.lhs is None else r.lhs.as_dict(),
                    "height_term": None
                    if r.height_term is None
                    else r.height_term.as_dict(),
                    "sunit_term": None
                    if r.sunit_term is None
                    else r.sunit_term.as_dict(),
                    "margins": None
                    if r.margins is None
                    else [
                        {"eps": str(e), "delta": str(d), "margin": m.as_dict()}
                        for e, d, m in r.margins
                    ],
                }
                for r in self.records
            ],
            "cells": [
                {
                    "eps": str(c.eps),
                    "delta": str(c.delta),
                    "considered": c.considered,
                    "violations": c.violations,
                    "violating_alphas": [list(a) for a in c.violating_alphas],
                    "empirical_C": None
                    if c.empirical_C is None
                    else c.empirical_C.as_dict(),
                }
                for c in self.cells
            ],
            "exceptional_candidates": [
                {
                    "alpha": list(c.alpha),
                    "zero_coordinates": list(c.zero_coordinates),
                    "coordinate_gcd": c.coordinate_gcd,
                    "equal_coordinate_pairs": [list(p) for p in c.equal_pairs],
                }
                for c in exceptional_candidates(self)
            ],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# sampling and per-record computation
# ---------------------------------------------------------------------------


def _sample_tuples(config: ScanConfig) -> list[tuple[int, ...]]:
    """Uniform tuples in the box, rejected until wgcd = 1 (and gcd = 1 when
    the strict filter is on).  Sequential by design: the sample stream must
    not depend on the worker count."""
    rng = random.Random(config.seed)
    out = []
    q = config.w.q
    while len(out) < config.samples:
        alpha = tuple(rng.randint(-r, r) for r in config.box_radii)
        if all(a == 0 for a in alpha):
            continue
        if wgcd_tuple(alpha, q) != 1:
            continue
        if config.require_coprime and math.gcd(*alpha) != 1:
            continue
        out.append(alpha)
    return out


def _make_record(config: ScanConfig, alpha: tuple[int, ...]) -> ScanRecord:
    values = [f.eval(alpha) for f in config.spec.polys]
    nonzero = [abs(v) for v in values if v != 0]
    if not nonzero:
        return ScanRecord(alpha, True, None, None, None, None)
    g = math.gcd(*nonzero)
    lhs = FormalLog.of_log(g) if g > 1 else FormalLog.zero()
    height_term = local_height(WPoint(config.w, alpha), INFINITE_PLACE)
    if any(a == 0 for a in alpha):
        return ScanRecord(alpha, False, lhs, height_term, None, None)
    N = 1
    for a in alpha:
        N *= a
    part = prime_to_S(N, config.S)
    m = config.w.m
    sunit = (
        FormalLog.of_log(part).scale(Fraction(1, m))
        if part > 1
        else FormalLog.zero()
    )
    r = config.spec.asserted_codim
    margins = []
    for eps in config.epsilon_grid:
        for delta in config.delta_grid:
            rhs = height_term.scale(eps) + sunit.scale(
                Fraction(1, 1) / (r - 1 + delta)
            )
            margins.append((eps, delta, rhs - lhs))
    return ScanRecord(alpha, False, lhs, height_term, sunit, tuple(margins))


def _record_batch(args) -> list[ScanRecord]:
    config, alphas = args
    return [_make_record(config, a) for a in alphas]


def scan(config: ScanConfig) -> ScanReport:
    alphas = _sample_tuples(config)
    if config.jobs > 1 and len(alphas) > 1:
        k = config.jobs
        batches = [(config, alphas[i::k]) for i in range(k) if alphas[i::k]]
        with ProcessPoolExecutor(max_workers=k) as pool:
            parts = list(pool.map(_record_batch, batches))
        # reinterleave to the original sample order
        records: list[ScanRecord | None] = [None] * len(alphas)
        for i, part in enumerate(parts):
            for j, rec in enumerate(part):
                records[i + j * k] = rec
        records = [r for r in records if r is not None]
    else:
        records = [_make_record(config, a) for a in alphas]

    zero_count = sum(
        1 for r in records if not r.on_subscheme and any(a == 0 for a in r.alpha)
    )
    on_sub = sum(1 for r in records if r.on_subscheme)
    cells = []
    for eps in config.epsilon_grid:
        for delta in config.delta_grid:
            considered = 0
            violating = []
            worst: FormalLog | None = None
            for rec in records:
                m = rec.margin_at(eps, delta)
                if m is None:
                    continue
                considered += 1
                neg = -m  # lhs - rhs
                worst = neg if worst is None else flog_max(worst, neg)
                if m.sign() < 0:
                    violating.append(rec.alpha)
            cells.append(
                CellSummary(
                    eps=eps,
                    delta=delta,
                    considered=considered,
                    violations=len(violating),
                    violating_alphas=tuple(sorted(violating)),
                    empirical_C=None
                    if worst is None
                    else flog_max(worst, FormalLog.zero()),
                )
            )
    return ScanReport(
        config=config,
        records=tuple(records),
        cells=tuple(cells),
        zero_coordinate_count=zero_count,
        on_subscheme_count=on_sub,
    )


# ---------------------------------------------------------------------------
# estimation and exceptional-set mining
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeltaEstimate:
    eps: Fraction
    delta: Fraction | None  # None: no grid delta meets the threshold
    violating_alphas: tuple[tuple[int, ...], ...]


def estimate_delta(
    report: ScanReport, allowed_violation_fraction: Fraction
) -> list[DeltaEstimate]:
    """Per eps, the smallest grid delta whose violation fraction is within
    the threshold (scanned in ascending delta order)."""
    if not report.records:
        raise DomainError("empty report")
    out = []
    for eps in report.config.epsilon_grid:
        chosen: Fraction | None = None
        violating: tuple[tuple[int, ...], ...] = ()
        for delta in sorted(report.config.delta_grid):
            cell = report.cell(eps, delta)
            if cell.considered == 0:
                continue
            frac = Fraction(cell.violations, cell.considered)
            if frac <= allowed_violation_fraction:
                chosen = delta
                violating = cell.violating_alphas
                break
        out.append(DeltaEstimate(eps=eps, delta=chosen, violating_alphas=violating))
    return out


@dataclass(frozen=True)
class ExceptionalCandidate:
    """A tuple violating the bound at every grid cell, with structural hints
    toward the polynomial whose zero set would absorb it."""

    alpha: tuple[int, ...]
    zero_coordinates: tuple[int, ...]
    coordinate_gcd: int
    equal_pairs: tuple[tuple[int, int], ...]


def exceptional_candidates(report: ScanReport) -> list[ExceptionalCandidate]:
    out = []
    for rec in report.records:
        if rec.margins is None:
            continue
        if not all(m.sign() < 0 for _, _, m in rec.margins):
            continue
        # re-verify from scratch before listing
        fresh = _make_record(report.config, rec.alpha)
        assert fresh.margins is not None
        if not all(m.sign() < 0 for _, _, m in fresh.margins):
            continue
        n = len(rec.alpha)
        pairs = tuple(
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if rec.alpha[i] == rec.alpha[j]
        )
        out.append(
            ExceptionalCandidate(
                alpha=rec.alpha,
                zero_coordinates=tuple(i for i, a in enumerate(rec.alpha) if a == 0),
                coordinate_gcd=math.gcd(*rec.alpha),
                equal_pairs=pairs,
            )
        )
    out.sort(key=lambda c: c.alpha)
    return out
