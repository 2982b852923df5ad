"""Empirical counting dimension, alpha-measure, and density.

For a finite set E = {x_0 < x_1 < ... < x_{n-1}} the estimators scan
intervals aligned to elements: I = (x_i - 1, x_j] contains exactly
j - i + 1 elements of E and has length x_j - x_i + 1.  Over these
intervals we maximize

    dimension:      log(count) / log(length)
    alpha-measure:  count / length**alpha
    density:        count / length         (alpha = 1)

Scanning is done in floating point for speed, then every near-tie at
the top is re-compared exactly (integer cross-powers for rational alpha
with small denominator, high-precision decimal otherwise), so witnesses
landing exactly on a boundary are resolved correctly and the reported
witness is deterministic.

Sets whose full pair count exceeds the schedule budget are scanned on
an index stride.  First and last elements are always kept, so witnesses
spanning the full hull are never lost to subsampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import isqrt
from typing import Optional

import numpy as np

from .exact import cmp_ratio, pow_bracket
from .intset import IntegerSet, Interval

# pure-python scans (sets with elements beyond int64) get a tighter cap
_PY_BUDGET = 2_000_000
_MAX_CANDIDATES = 50_000
_EXACT_DEN_LIMIT = 64  # largest alpha denominator for integer cross-powers


class DegenerateSetError(ValueError):
    """Estimate requested for a set too small to carry one."""


@dataclass(frozen=True)
class ScanSchedule:
    """Controls how truncation intervals are enumerated.

    budget caps the number of (start, end) element pairs examined; sets
    whose full pair count exceeds it are scanned on an index stride with
    both endpoints always kept.  min_length discards intervals shorter
    than the given length; raising it above 2 filters out the trivial
    short witnesses that any set with a run of consecutive elements
    would otherwise produce.
    """

    budget: int = 50_000_000
    min_length: int = 2

    def __post_init__(self) -> None:
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.min_length < 1:
            raise ValueError("min_length must be >= 1")


@dataclass(frozen=True)
class DimensionEstimate:
    """Best log(count)/log(length) found, as a rational.

    alpha_hat is exact when the witness satisfies count**q == length**p
    for a small-denominator p/q (prefixes of power sets do); otherwise
    it is the float ratio converted at 12-digit precision.
    """

    alpha_hat: Fraction
    witness: Interval
    count: int
    pairs_scanned: int
    subsampled: bool

    @property
    def length(self) -> int:
        return self.witness.length

    @property
    def alpha_float(self) -> float:
        return float(self.alpha_hat)


@dataclass(frozen=True)
class MeasureEstimate:
    value: Fraction
    alpha: Fraction
    witness: Optional[Interval]
    count: int
    pairs_scanned: int
    subsampled: bool

    @property
    def length(self) -> int:
        return self.witness.length if self.witness is not None else 0


def _as_fraction(alpha) -> Fraction:
    a = Fraction(alpha)
    if a < 0 or a > 1:
        raise ValueError("alpha must lie in [0, 1]")
    return a


def _scan_positions(n: int, budget: int) -> tuple[list[int], bool]:
    """Element indices to use as interval endpoints, and a subsampled flag."""
    if n * (n + 1) // 2 <= budget:
        return list(range(n)), False
    m = (isqrt(8 * budget + 1) - 1) // 2
    m = max(m, 2)
    step = -(-n // m)
    pos = list(range(0, n, step))
    if pos[-1] != n - 1:
        pos.append(n - 1)
    return pos, True


# ---------------------------------------------------------------------------
# ratio objective: count / length**alpha


def _np_ratio_pass(
    xs: np.ndarray,
    pos: list[int],
    alpha_f: float,
    min_count: int,
    min_length: int,
) -> tuple[list[tuple[int, int, int, int]], int]:
    """Two-pass vectorized scan. Returns ((count, length, xi, xj) near-ties, pairs)."""
    idx = np.asarray(pos, dtype=np.int64)
    vals = xs[idx]
    rows = len(idx)
    pairs = 0
    row_best = np.full(rows, -1.0)
    for a in range(rows):
        counts = (idx[a:] - idx[a] + 1).astype(np.float64)
        lens = (vals[a:] - vals[a] + 1).astype(np.float64)
        pairs += rows - a
        ok = (counts >= min_count) & (lens >= min_length)
        if not ok.any():
            continue
        r = np.where(ok, counts * lens ** (-alpha_f), -1.0)
        row_best[a] = r.max()
    best = float(row_best.max())
    if best < 0:
        return [], pairs
    thr = best - abs(best) * 1e-9
    cands: list[tuple[int, int, int, int]] = []
    for a in np.nonzero(row_best >= thr)[0]:
        counts = (idx[a:] - idx[a] + 1).astype(np.float64)
        lens = (vals[a:] - vals[a] + 1).astype(np.float64)
        ok = (counts >= min_count) & (lens >= min_length)
        r = np.where(ok, counts * lens ** (-alpha_f), -1.0)
        for b in np.nonzero(r >= thr)[0]:
            xi = int(vals[a])
            xj = int(vals[a + b])
            cands.append((int(counts[b]), xj - xi + 1, xi, xj))
            if len(cands) >= _MAX_CANDIDATES:
                return cands, pairs
    return cands, pairs


def _py_ratio_pass(
    elements: tuple[int, ...],
    pos: list[int],
    alpha_f: float,
    min_count: int,
    min_length: int,
) -> tuple[list[tuple[int, int, int, int]], int]:
    """Pure-python scan for sets whose elements do not fit in int64."""
    log = math.log
    exp = math.exp
    best = -1.0
    cands: list[tuple[int, int, int, int]] = []
    pairs = 0
    for ai, i in enumerate(pos):
        xi = elements[i]
        for j in pos[ai:]:
            pairs += 1
            count = j - i + 1
            if count < min_count:
                continue
            length = elements[j] - xi + 1
            if length < min_length:
                continue
            r = count * exp(-alpha_f * log(length)) if length > 1 else float(count)
            if r > best + abs(best) * 1e-9:
                best = r
                thr = best - abs(best) * 1e-9
                cands = [c for c in cands if _py_ratio(c, alpha_f) >= thr]
                cands.append((count, length, xi, elements[j]))
            elif r >= best - abs(best) * 1e-9 and len(cands) < _MAX_CANDIDATES:
                cands.append((count, length, xi, elements[j]))
    return cands, pairs


def _py_ratio(cand: tuple[int, int, int, int], alpha_f: float) -> float:
    count, length = cand[0], cand[1]
    if length == 1:
        return float(count)
    return count * math.exp(-alpha_f * math.log(length))


def _cmp_ratio_any(c1: int, l1: int, c2: int, l2: int, alpha: Fraction) -> int:
    """Sign of c1/l1**alpha - c2/l2**alpha, exact when feasible."""
    if (
        alpha.denominator <= _EXACT_DEN_LIMIT
        and max(l1, l2).bit_length() * alpha.numerator <= 200_000
    ):
        return cmp_ratio(c1, l1, c2, l2, alpha)
    with localcontext() as ctx:
        ctx.prec = 60
        af = Decimal(alpha.numerator) / Decimal(alpha.denominator)
        r1 = Decimal(c1) / (af * Decimal(l1).ln()).exp()
        r2 = Decimal(c2) / (af * Decimal(l2).ln()).exp()
        diff = r1 - r2
        if abs(diff) < (r1 + r2) * Decimal(10) ** -50:
            return 0
        return 1 if diff > 0 else -1


def _pick_best_ratio(
    cands: list[tuple[int, int, int, int]], alpha: Fraction
) -> tuple[int, int, int, int]:
    """Exact max over candidates; ties broken by shorter length, then lower start."""
    best = cands[0]
    for cand in cands[1:]:
        s = _cmp_ratio_any(cand[0], cand[1], best[0], best[1], alpha)
        if s > 0 or (s == 0 and (cand[1], cand[2]) < (best[1], best[2])):
            best = cand
    return best


def _ratio_to_fraction(count: int, length: int, alpha: Fraction, digits: int = 40) -> Fraction:
    if length == 1:
        return Fraction(count)
    if (
        alpha.denominator <= _EXACT_DEN_LIMIT
        and length.bit_length() * alpha.numerator <= 200_000
    ):
        lo, hi = pow_bracket(length, alpha, digits)
        if lo == hi:
            return Fraction(count) / lo
        return (Fraction(count) / lo + Fraction(count) / hi) / 2
    with localcontext() as ctx:
        ctx.prec = digits + 20
        af = Decimal(alpha.numerator) / Decimal(alpha.denominator)
        d = Decimal(count) / (af * Decimal(length).ln()).exp()
        return Fraction(d)


def _ratio_scan(
    E: IntegerSet,
    alpha: Fraction,
    schedule: ScanSchedule,
    min_count: int,
) -> tuple[tuple[int, int, int, int], int, bool]:
    """Shared engine behind alpha-measure, density, and sup-ratio scans."""
    n = len(E)
    xs = E._np_view()
    if xs is not None:
        pos, sub = _scan_positions(n, schedule.budget)
        cands, pairs = _np_ratio_pass(xs, pos, float(alpha), min_count, schedule.min_length)
    else:
        pos, sub = _scan_positions(n, min(schedule.budget, _PY_BUDGET))
        cands, pairs = _py_ratio_pass(E.elements, pos, float(alpha), min_count, schedule.min_length)
    if not cands:
        raise DegenerateSetError(
            f"no interval with count >= {min_count} and length >= {schedule.min_length}"
        )
    return _pick_best_ratio(cands, alpha), pairs, sub


def alpha_measure_estimate(
    E: IntegerSet, alpha, schedule: ScanSchedule = ScanSchedule()
) -> MeasureEstimate:
    """Empirical alpha-measure: max of count / length**alpha over aligned intervals.

    Intervals must contain at least two elements, except that a
    one-element set is given measure 1 outright (its only interval is a
    single cell).
    """
    a = _as_fraction(alpha)
    if len(E) == 0:
        raise DegenerateSetError("empty set")
    if len(E) == 1:
        x = E.elements[0]
        return MeasureEstimate(Fraction(1), a, Interval(x - 1, x), 1, 1, False)
    (count, length, xi, xj), pairs, sub = _ratio_scan(E, a, schedule, min_count=2)
    return MeasureEstimate(
        _ratio_to_fraction(count, length, a),
        a,
        Interval(xi - 1, xj),
        count,
        pairs,
        sub,
    )


def density_estimate(E: IntegerSet, schedule: ScanSchedule = ScanSchedule()) -> MeasureEstimate:
    """Empirical upper Banach density: max of count / length, exact rational.

    The empty set gets the defined value 0 with no witness.
    """
    if len(E) == 0:
        return MeasureEstimate(Fraction(0), Fraction(1), None, 0, 0, False)
    return alpha_measure_estimate(E, Fraction(1), schedule)


# ---------------------------------------------------------------------------
# dimension objective: log(count) / log(length)


def _np_dim_pass(
    xs: np.ndarray, pos: list[int], min_length: int
) -> tuple[list[tuple[int, int, int, int]], int]:
    idx = np.asarray(pos, dtype=np.int64)
    vals = xs[idx]
    rows = len(idx)
    pairs = 0
    row_best = np.full(rows, -1.0)
    for a in range(rows):
        counts = (idx[a:] - idx[a] + 1).astype(np.float64)
        lens = (vals[a:] - vals[a] + 1).astype(np.float64)
        pairs += rows - a
        ok = (counts >= 2) & (lens >= max(2, min_length))
        if not ok.any():
            continue
        r = np.where(ok, np.log(counts) / np.log(np.maximum(lens, 2.0)), -1.0)
        row_best[a] = r.max()
    best = float(row_best.max())
    if best < 0:
        return [], pairs
    thr = best - 1e-12
    cands: list[tuple[int, int, int, int]] = []
    for a in np.nonzero(row_best >= thr)[0]:
        counts = (idx[a:] - idx[a] + 1).astype(np.float64)
        lens = (vals[a:] - vals[a] + 1).astype(np.float64)
        ok = (counts >= 2) & (lens >= max(2, min_length))
        r = np.where(ok, np.log(counts) / np.log(np.maximum(lens, 2.0)), -1.0)
        for b in np.nonzero(r >= thr)[0]:
            xi = int(vals[a])
            xj = int(vals[a + b])
            cands.append((int(counts[b]), xj - xi + 1, xi, xj))
            if len(cands) >= _MAX_CANDIDATES:
                return cands, pairs
    return cands, pairs


def _py_dim_pass(
    elements: tuple[int, ...], pos: list[int], min_length: int
) -> tuple[list[tuple[int, int, int, int]], int]:
    log = math.log
    best = -1.0
    cands: list[tuple[int, int, int, int]] = []
    pairs = 0
    min_length = max(2, min_length)
    for ai, i in enumerate(pos):
        xi = elements[i]
        for j in pos[ai + 1 :]:
            pairs += 1
            count = j - i + 1
            length = elements[j] - xi + 1
            if length < min_length:
                continue
            r = log(count) / log(length)
            if r > best + 1e-12:
                best = r
                cands = [c for c in cands if log(c[0]) / log(c[1]) >= best - 1e-12]
                cands.append((count, length, xi, elements[j]))
            elif r >= best - 1e-12 and len(cands) < _MAX_CANDIDATES:
                cands.append((count, length, xi, elements[j]))
    return cands, pairs


def _log_ratio_fraction(count: int, length: int) -> Fraction:
    """log(count)/log(length) as a Fraction, exact for true power relations."""
    r = math.log(count) / math.log(length)
    guess = Fraction(r).limit_denominator(_EXACT_DEN_LIMIT)
    if 0 <= guess <= 1 and count**guess.denominator == length**guess.numerator:
        return guess
    return Fraction(r).limit_denominator(10**12)


def dimension_estimate(
    E: IntegerSet, schedule: ScanSchedule = ScanSchedule()
) -> DimensionEstimate:
    """Empirical counting dimension: max of log(count)/log(length).

    Only intervals holding at least two elements count; a set with
    fewer than two elements has no meaningful estimate and raises
    DegenerateSetError.
    """
    n = len(E)
    if n < 2:
        raise DegenerateSetError("dimension needs at least 2 elements")
    xs = E._np_view()
    if xs is not None:
        pos, sub = _scan_positions(n, schedule.budget)
        cands, pairs = _np_dim_pass(xs, pos, schedule.min_length)
    else:
        pos, sub = _scan_positions(n, min(schedule.budget, _PY_BUDGET))
        cands, pairs = _py_dim_pass(E.elements, pos, schedule.min_length)
    if not cands:
        raise DegenerateSetError(
            f"no interval with count >= 2 and length >= {schedule.min_length}"
        )
    best = cands[0]
    best_r = math.log(best[0]) / math.log(best[1])
    for cand in cands[1:]:
        r = math.log(cand[0]) / math.log(cand[1])
        if r > best_r + 1e-12 or (
            abs(r - best_r) <= 1e-12 and (cand[1], cand[2]) < (best[1], best[2])
        ):
            best, best_r = cand, max(r, best_r)
    count, length, xi, xj = best
    return DimensionEstimate(
        _log_ratio_fraction(count, length),
        Interval(xi - 1, xj),
        count,
        pairs,
        sub,
    )


# ---------------------------------------------------------------------------


def monotonicity_check(
    E: IntegerSet, F: IntegerSet, schedule: ScanSchedule = ScanSchedule()
) -> bool:
    """Dimension monotonicity under inclusion: E subset of F implies
    estimate(E) <= estimate(F).

    Sets with fewer than two elements are treated as estimate 0.  F's
    estimate is floored by F's own ratio on E's witness interval (F has
    at least as many points there), so the comparison holds under any
    subsampling.
    """
    for x in E:
        if x not in F:
            raise ValueError("not a subset")
    try:
        dE = dimension_estimate(E, schedule)
    except DegenerateSetError:
        return True
    dF = dimension_estimate(F, schedule)
    best_f = float(dF.alpha_hat)
    w = dE.witness
    c = F.count_in(w)
    if c >= 2 and w.length >= 2:
        best_f = max(best_f, math.log(c) / math.log(w.length))
    return best_f >= float(dE.alpha_hat) - 1e-12
