"""Haplotype panel representation and interval arithmetic.

Positions, row ids and column numbers are 1-based everywhere in the public
model; intervals are closed on both ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class PanelError(ValueError):
    """Raised when a panel violates its invariants."""


class Interval(NamedTuple):
    """Closed interval [b, e] of 1-based positions."""

    b: int
    e: int

    def __len__(self) -> int:
        return self.e - self.b + 1


def intervals_overlap(a: Interval, b: Interval) -> bool:
    """True iff the closed intervals share at least one position."""
    return a.b <= b.e and b.b <= a.e


class IntervalList:
    """Ordered, contiguous intervals partitioning [1..n].

    ``sources`` optionally records, per interval, the 1-based index of the
    interval it was cut from in some coarser list (used by normalization
    and the sub-run builders).
    """

    __slots__ = ("items", "n", "sources")

    def __init__(self, items: Iterable[Interval | tuple[int, int]],
                 sources: list[int] | None = None, validate: bool = True):
        self.items: list[Interval] = [Interval(*iv) for iv in items]
        if not self.items:
            raise ValueError("empty interval list")
        self.n: int = self.items[-1].e
        self.sources = sources
        if validate:
            self._check_partition()
        if sources is not None and len(sources) != len(self.items):
            raise ValueError("sources length mismatch")

    def _check_partition(self) -> None:
        if self.items[0].b != 1:
            raise ValueError(f"first interval starts at {self.items[0].b}, not 1")
        prev_e = 0
        for iv in self.items:
            if iv.b != prev_e + 1:
                raise ValueError(f"gap or overlap before {iv}")
            if iv.e < iv.b:
                raise ValueError(f"inverted interval {iv}")
            prev_e = iv.e

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, k: int) -> Interval:
        return self.items[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalList) and self.items == other.items

    def __repr__(self) -> str:
        body = ", ".join(f"[{iv.b},{iv.e}]" for iv in self.items)
        return f"IntervalList({{{body}}})"

    def starts(self) -> np.ndarray:
        return np.fromiter((iv.b for iv in self.items), dtype=np.int64,
                           count=len(self.items))

    def index_of(self, pos: int) -> int:
        """1-based index of the interval containing ``pos``."""
        if not 1 <= pos <= self.n:
            raise ValueError(f"position {pos} outside [1..{self.n}]")
        lo, hi = 0, len(self.items) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.items[mid].b <= pos:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1


@dataclass
class Panel:
    """Haplotype matrix over the alphabet {0..sigma-1}.

    ``rows`` holds one int array per haplotype. In fixed-length mode all rows
    share one length; with ``ragged=True`` lengths may differ (each row is
    implicitly terminator-extended by the index builders).
    """

    rows: list[np.ndarray]
    sigma: int
    ragged: bool = False
    sigma_inferred: bool = field(default=False, repr=False)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], sigma: int | None = None,
                  ragged: bool = False) -> "Panel":
        arrs = [np.asarray(r, dtype=np.int64) for r in rows]
        inferred = sigma is None
        if inferred:
            top = max((int(a.max()) for a in arrs if a.size), default=-1)
            sigma = top + 1 if top >= 0 else 1
        return cls(rows=arrs, sigma=int(sigma), ragged=ragged, sigma_inferred=inferred)

    @classmethod
    def from_strings(cls, rows: Sequence[str], sigma: int | None = None,
                     ragged: bool = False) -> "Panel":
        return cls.from_rows([[int(c) for c in r] for r in rows], sigma, ragged)

    @property
    def h(self) -> int:
        return len(self.rows)

    @property
    def w(self) -> int:
        """Row length in fixed-length mode; max row length when ragged."""
        return max((len(r) for r in self.rows), default=0)

    def matrix(self) -> np.ndarray:
        """h×w array; fixed-length mode only."""
        return np.vstack(self.rows) if self.h else np.empty((0, 0), np.int64)

    def row_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(s) for s in r) for r in self.rows]


@dataclass
class PanelReport:
    h: int
    w: int | None               # None in ragged mode
    sigma: int
    sigma_inferred: bool
    lengths: list[int]
    ragged: bool


def validate_panel(p: Panel) -> PanelReport:
    """Check all panel invariants; raise PanelError on the first violation."""
    if p.h < 1:
        raise PanelError("empty panel")
    if p.sigma < 1:
        raise PanelError(f"alphabet size {p.sigma} < 1")
    lengths = [len(r) for r in p.rows]
    if not p.ragged:
        if len(set(lengths)) > 1:
            raise PanelError(f"mixed lengths {sorted(set(lengths))} in fixed-length mode")
        if lengths[0] < 1:
            raise PanelError("zero-length rows in fixed-length mode")
    for i, r in enumerate(p.rows, 1):
        if r.size and (int(r.min()) < 0 or int(r.max()) >= p.sigma):
            bad = int(r[(r < 0) | (r >= p.sigma)][0])
            raise PanelError(f"symbol out of range in row {i}: {bad} not in [0..{p.sigma - 1}]")
    return PanelReport(h=p.h, w=None if p.ragged else lengths[0], sigma=p.sigma,
                       sigma_inferred=p.sigma_inferred, lengths=lengths, ragged=p.ragged)
