"""Three-overlap normalization of one interval partition against another.

``normalize(parts, ref)`` splits intervals of ``parts`` so that every output
interval overlaps at most three intervals of ``ref``, adding at most
floor(len(ref)/2) cuts. Every cut lands on a right endpoint of ``ref``, and
the scan over both lists is a single monotone pass.
"""

from __future__ import annotations

from .panel import Interval, IntervalList


def overlap_count(iv: Interval, ref: IntervalList) -> int:
    """Number of ``ref`` intervals intersecting ``iv`` (iv within ref's range)."""
    return ref.index_of(iv.e) - ref.index_of(iv.b) + 1


def normalize(parts: IntervalList, ref: IntervalList) -> IntervalList:
    """Split ``parts`` to satisfy the three-overlap constraint against ``ref``.

    The output partitions the same range; its ``sources`` give, per interval,
    the 1-based index of the ``parts`` interval it came from. When
    ``len(ref) <= 3`` no interval can overlap more than three, so ``parts``
    is returned unchanged (as a copy).
    """
    if parts.n != ref.n:
        raise ValueError(f"mismatched ranges: [1..{parts.n}] vs [1..{ref.n}]")
    if len(ref) <= 3:
        return IntervalList(parts.items, sources=list(range(1, len(parts) + 1)),
                            validate=False)
    out: list[Interval] = []
    src: list[int] = []
    rit = ref.items
    qi = 0  # index of the ref interval containing the current left end
    for pi, iv in enumerate(parts.items, 1):
        b = iv.b
        while rit[qi].e < b:
            qi += 1
        # cut whenever a fourth ref interval would be overlapped
        while qi + 3 < len(rit) and rit[qi + 3].b <= iv.e:
            d = rit[qi + 2].e
            out.append(Interval(b, d))
            src.append(pi)
            b = d + 1
            qi += 3
        out.append(Interval(b, iv.e))
        src.append(pi)
    return IntervalList(out, sources=src)
