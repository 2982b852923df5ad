"""Floor scaling, sumsets, the star product, and asymptotic interleaving.

The scaling parameter is always an exact rational: floor(lambda * n) is
computed as p*n // q, never through floating point, so every identity
downstream (window measures, double counting) stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .intset import IntegerSet

_INT64_LIMIT = 1 << 62
_BITMAP_SPAN = 150_000_000
_OUTER_PAIRS = 20_000_000


class SizeGuardError(ValueError):
    """A pairwise operation would exceed its size guard."""


def _short(text: str, limit: int = 80) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


def floor_scale(E: IntegerSet, lam) -> IntegerSet:
    """{floor(lambda * n) : n in E} with exact rational floors."""
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive (negative and zero scalings are reduced away)")
    p, q = lam.numerator, lam.denominator
    prov = f"scale({_short(E.provenance)}, {lam})"
    xs = E._np_view()
    if xs is not None and len(xs) and abs(int(xs[0])) * p < _INT64_LIMIT and abs(int(xs[-1])) * p < _INT64_LIMIT:
        vals = xs * p // q
        if p >= q:
            # gaps scale by at least 1, floors stay distinct and sorted
            return IntegerSet.from_sorted(tuple(int(x) for x in vals), prov)
        return IntegerSet.from_sorted(tuple(int(x) for x in np.unique(vals)), prov)
    out = sorted({(x * p) // q for x in E.elements})
    return IntegerSet.from_sorted(tuple(out), prov)


def sumset(E: IntegerSet, F: IntegerSet, max_pairs: int = 100_000_000) -> IntegerSet:
    """{a + b : a in E, b in F}, deduplicated.

    Refuses products above max_pairs.  Within the guard, a dense bitmap
    over the value span is used when the span is moderate; otherwise
    chunked outer sums merged through np.unique.
    """
    if len(E) == 0 or len(F) == 0:
        raise ValueError("sumset needs nonempty sets")
    pairs = len(E) * len(F)
    if pairs > max_pairs:
        raise SizeGuardError(
            f"sumset too large, restrict windows ({len(E)} x {len(F)} pairs)"
        )
    prov = f"sum({_short(E.provenance)}, {_short(F.provenance)})"
    if len(E) > len(F):
        E, F = F, E  # chunk the smaller set, vectorize over the larger
    xe = E._np_view()
    xf = F._np_view()
    if xe is not None and xf is not None:
        lo = int(xe[0]) + int(xf[0])
        hi = int(xe[-1]) + int(xf[-1])
        if -_INT64_LIMIT < lo and hi < _INT64_LIMIT:
            span = hi - lo + 1
            if pairs <= _OUTER_PAIRS:
                vals = np.unique((xe[:, None] + xf[None, :]).ravel())
                return IntegerSet.from_sorted(tuple(int(x) for x in vals), prov)
            if span <= _BITMAP_SPAN:
                hit = np.zeros(span, dtype=bool)
                chunk = max(1, 4_000_000 // len(xf))
                for i in range(0, len(xe), chunk):
                    idx = (xe[i : i + chunk, None] + xf[None, :]).ravel() - lo
                    hit[idx] = True
                vals = np.flatnonzero(hit) + lo
                return IntegerSet.from_sorted(tuple(int(x) for x in vals), prov)
            merged = np.empty(0, dtype=np.int64)
            chunk = max(1, _OUTER_PAIRS // len(xf))
            for i in range(0, len(xe), chunk):
                part = np.unique((xe[i : i + chunk, None] + xf[None, :]).ravel())
                merged = np.union1d(merged, part)
            return IntegerSet.from_sorted(tuple(int(x) for x in merged), prov)
    out = {a + b for a in E.elements for b in F.elements}
    return IntegerSet(out, prov)


def sum_scaled(E: IntegerSet, F: IntegerSet, lam, max_pairs: int = 100_000_000) -> IntegerSet:
    """E + floor(lambda * F)."""
    return sumset(E, floor_scale(F, lam), max_pairs=max_pairs)


def star(E: IntegerSet, F: IntegerSet) -> IntegerSet:
    """Subsequence selection: the n-th smallest element of E for each
    index n in F, indexing E from 1.

    Out-of-range indices in F are skipped; the skipped count lands in
    the provenance.  All indices out of range is an error.
    """
    if len(E) == 0:
        raise ValueError("empty star product")
    picked = [E.elements[n - 1] for n in F.elements if 1 <= n <= len(E)]
    skipped = len(F) - len(picked)
    if not picked:
        raise ValueError("empty star product")
    return IntegerSet.from_sorted(
        tuple(picked),
        f"star({_short(E.provenance)}, {_short(F.provenance)}, skipped={skipped})",
    )


@dataclass(frozen=True)
class AsymptoticReport:
    ok: bool
    first_violation: Optional[int]
    offset: int
    n_start: int
    n_stop: int

    def __bool__(self) -> bool:
        return self.ok


def asymptotic_check(E: IntegerSet, F: IntegerSet, i: int, n0: int = 1) -> AsymptoticReport:
    """Interleaving test a_{n-i} <= b_n <= a_{n+i} over the shared index window.

    Indices are 1-based over the truncations; the window runs from
    max(n0, i+1) to min(|F|, |E|-i).  Certifies only the window, not
    the bi-infinite statement.
    """
    if i < 0:
        raise ValueError("offset must be >= 0")
    a, b = E.elements, F.elements
    n_start = max(n0, i + 1)
    n_stop = min(len(b), len(a) - i)
    if n_start > n_stop:
        raise ValueError("window too short for this offset")
    for n in range(n_start, n_stop + 1):
        if not (a[n - i - 1] <= b[n - 1] <= a[n + i - 1]):
            return AsymptoticReport(False, n, i, n_start, n_stop)
    return AsymptoticReport(True, None, i, n_start, n_stop)
