"""Run-count statistics and the bounds they must satisfy.

For a fixed-length panel, the total run count is squeezed between the number
of adjacent distinct row pairs (plus one) and that quantity times the width;
per column, runs are no more numerous than the canonical blocks of fully
identical rows, whose count never grows from one column to the next.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .panel import Interval, IntervalList, Panel, validate_panel
from .pbwt import PbwtColumns, build_pbwt


def adjacent_distinct_pairs(p: Panel) -> int:
    """Count of i < h with row i differing from row i+1, in the given order."""
    rows = p.row_tuples()
    return sum(1 for a, b in zip(rows, rows[1:]) if a != b)


def canonical_intervals(pc: PbwtColumns, p: Panel, j: int) -> IntervalList:
    """Maximal blocks of column j's ordering whose full rows are identical."""
    rows = p.row_tuples()
    pa = pc.pa_col(j)
    items = []
    b = 1
    for i in range(2, pa.size + 1):
        if rows[pa[i - 1] - 1] != rows[pa[i - 2] - 1]:
            items.append(Interval(b, i - 1))
            b = i
    items.append(Interval(b, pa.size))
    return IntervalList(items)


@dataclass
class BoundsReport:
    h: int
    w: int
    h_pp: int                      # adjacent distinct pairs, input order
    h_pp_sorted: int               # same after lexicographic sorting
    distinct: int
    total_runs: int
    r_per_col: list[int]
    ell_per_col: list[int]
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        out = [f"h={self.h}", f"w={self.w}", f"h_pp={self.h_pp}",
               f"h_pp_sorted={self.h_pp_sorted}", f"distinct={self.distinct}",
               f"r_tilde={self.total_runs}",
               "r_per_col=" + ",".join(map(str, self.r_per_col)),
               "ell_per_col=" + ",".join(map(str, self.ell_per_col))]
        for name, ok in self.checks.items():
            out.append(f"check_{name}={'pass' if ok else 'FAIL'}")
        out.append(f"all_checks={'pass' if self.passed else 'FAIL'}")
        return out


def check_bounds(p: Panel, pc: PbwtColumns | None = None) -> BoundsReport:
    """Compute every bound ingredient and evaluate the inequalities.

    A failed check indicates an implementation bug, never an input property.
    """
    report_in = validate_panel(p)
    if report_in.ragged:
        raise ValueError("bounds are defined for fixed-length panels")
    if pc is None:
        pc = build_pbwt(p)
    h_pp = adjacent_distinct_pairs(p)
    rows_sorted = sorted(p.row_tuples())
    h_pp_sorted = sum(1 for a, b in zip(rows_sorted, rows_sorted[1:]) if a != b)
    distinct = len(set(p.row_tuples()))
    r_per_col = [len(pc.runs_at(j)) for j in range(1, pc.w + 1)]
    ell_per_col = [len(canonical_intervals(pc, p, j)) for j in range(1, pc.w + 1)]
    rt = pc.total_runs
    checks = {
        "lower_adjacent": rt >= h_pp + 1,
        "lower_distinct": rt >= distinct,
        "runs_le_canonical": all(r <= ell for r, ell in zip(r_per_col, ell_per_col)),
        "canonical_le_hpp1": all(ell <= h_pp + 1 for ell in ell_per_col),
        "upper_width": rt <= pc.w * (h_pp + 1),
        "canonical_monotone": all(b <= a for a, b in zip(ell_per_col, ell_per_col[1:])),
    }
    return BoundsReport(h=p.h, w=pc.w, h_pp=h_pp, h_pp_sorted=h_pp_sorted,
                        distinct=distinct, total_runs=rt, r_per_col=r_per_col,
                        ell_per_col=ell_per_col, checks=checks)
