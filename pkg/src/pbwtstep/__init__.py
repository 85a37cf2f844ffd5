"""Run-length compressed multi-allelic PBWT with constant-time stepping.

Builds per-column sub-run partitions whose forward/backward images obey a
three-overlap constraint, yielding O(total runs)-word tables that step a
(row, sub-run) pair between adjacent columns in O(1) and can be chained.
On top of that: prefix search (longest shared prefix, count, witness,
sorted-interval and enumeration variants, arbitrary-length rows via a
terminator) and whole-haplotype retrieval without the panel.
"""

from .bounds import BoundsReport, adjacent_distinct_pairs, canonical_intervals, check_bounds
from .io import IndexFile, IndexFormatError, build_index, load_index, load_panel, save_index
from .normalize import normalize, overlap_count
from .panel import (Interval, IntervalList, Panel, PanelError, PanelReport,
                    intervals_overlap, validate_panel)
from .pbwt import (PbwtColumns, build_pbwt, build_pbwt_reference, extract_runs,
                   naive_back, naive_fore)
from .prefixsearch import PrefixSearchIndex, SymbolPositions, build_prefix_index
from .retrieval import RetrievalIndex, build_retrieval_index, predecessor
from .stepindex import BackStepColumn, ForeStepColumn, StepIndex, build_step_index
from .subruns import (SubRunLists, back_map, build_back_subruns, build_fore_subruns,
                      build_subruns, fore_map, fore_map_by_sorting)

__version__ = "0.1.0"

__all__ = [
    "BoundsReport", "adjacent_distinct_pairs", "canonical_intervals", "check_bounds",
    "IndexFile", "IndexFormatError", "build_index", "load_index", "load_panel",
    "save_index", "normalize", "overlap_count", "Interval", "IntervalList", "Panel",
    "PanelError", "PanelReport", "intervals_overlap", "validate_panel", "PbwtColumns",
    "build_pbwt", "build_pbwt_reference", "extract_runs", "naive_back", "naive_fore",
    "PrefixSearchIndex", "SymbolPositions", "build_prefix_index", "RetrievalIndex",
    "build_retrieval_index", "predecessor", "BackStepColumn", "ForeStepColumn",
    "StepIndex", "build_step_index", "SubRunLists", "back_map", "build_back_subruns",
    "build_fore_subruns", "build_subruns", "fore_map", "fore_map_by_sorting",
    "__version__",
]
