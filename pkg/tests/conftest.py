"""Shared generators and independent brute-force oracles for the test suite.

The oracles here deliberately avoid the library's fast paths: stepping is
checked against prefix-array position lookups, prefix search against a row
scan, normalization against an O(n^2) splitter.
"""

import numpy as np
import pytest

from pbwtstep.panel import Interval, IntervalList, Panel


def rand_partition(rng, n, max_parts=None):
    """Random partition of [1..n] into closed intervals."""
    if n == 1:
        return IntervalList([(1, 1)])
    k = rng.integers(0, n) if max_parts is None else rng.integers(0, max_parts)
    cuts = sorted(set(rng.integers(1, n, size=int(k)).tolist()))
    bounds = [0] + cuts + [n]
    return IntervalList([(a + 1, b) for a, b in zip(bounds, bounds[1:])])


def rand_panel(rng, h_max=16, w_max=12, sigma_max=4, ragged=False):
    """Random panel mixing uniform noise with mutated copies of base rows."""
    h = int(rng.integers(1, h_max + 1))
    w = int(rng.integers(1, w_max + 1))
    sigma = int(rng.integers(1, sigma_max + 1))
    style = int(rng.integers(0, 3))
    if style == 0:
        rows = rng.integers(0, sigma, size=(h, w))
    else:
        n_base = int(rng.integers(1, max(2, h // 2 + 1)))
        bases = rng.integers(0, sigma, size=(n_base, w))
        rows = bases[rng.integers(0, n_base, size=h)].copy()
        if style == 2:
            mut = rng.random(size=rows.shape) < 0.12
            rows[mut] = rng.integers(0, sigma, size=int(mut.sum()))
    row_list = [r for r in rows]
    if ragged:
        row_list = [r[:int(rng.integers(0, w + 1))] for r in row_list]
    return Panel.from_rows(row_list, sigma=sigma, ragged=ragged)


# ------------------------------------------------------------------- oracles

def pos_lookup_fore(pc):
    """fore tables from prefix-array position lookups only: out[j][i-1] is the
    1-based target of position i in column j, or 0 where undefined."""
    tables = []
    for j in range(1, pc.w):
        nxt = {int(rid): k for k, rid in enumerate(pc.pa_col(j + 1), 1)}
        cur = pc.pa_col(j)
        tables.append(np.array([nxt.get(int(rid), 0) for rid in cur], np.int64))
    return tables


def pos_lookup_back(pc):
    tables = [None]
    for j in range(2, pc.w + 1):
        prv = {int(rid): k for k, rid in enumerate(pc.pa_col(j - 1), 1)}
        cur = pc.pa_col(j)
        tables.append(np.array([prv[int(rid)] for rid in cur], np.int64))
    return tables


def scan_prefix(p: Panel, pattern):
    """Row-scan prefix oracle: (longest shared prefix, count, smallest id)."""
    pat = [int(c) for c in pattern]
    best = 0
    for row in p.rows:
        k = 0
        while k < len(pat) and k < len(row) and int(row[k]) == pat[k]:
            k += 1
        best = max(best, k)
    if best == 0:
        return 0, p.h, 1
    ids = [i for i in range(1, p.h + 1)
           if len(p.rows[i - 1]) >= best
           and [int(s) for s in p.rows[i - 1][:best]] == pat[:best]]
    return best, len(ids), ids[0]


def brute_overlaps(iv, items):
    """0-based indices of intervals intersecting iv, by linear scan."""
    return [k for k, q in enumerate(items) if q.b <= iv.e and iv.b <= q.e]


def brute_normalize(parts, ref):
    """O(n^2) splitter: cut after every third overlapped ref interval."""
    if len(ref) <= 3:
        return list(parts.items)
    out = []
    for iv in parts.items:
        b, e = iv.b, iv.e
        while True:
            ovl = brute_overlaps(Interval(b, e), ref.items)
            if len(ovl) <= 3:
                out.append(Interval(b, e))
                break
            d = ref.items[ovl[2]].e
            out.append(Interval(b, d))
            b = d + 1
    return out


def pattern_battery(rng, p: Panel, count=8):
    """Patterns biased toward interesting cases: row prefixes, mutated rows,
    uniform noise, over-length, out-of-alphabet, and the empty pattern."""
    pats = [[]]
    wmax = max(1, max((len(r) for r in p.rows), default=1))
    for _ in range(count):
        kind = int(rng.integers(0, 4))
        if kind == 0:
            row = p.rows[int(rng.integers(0, p.h))]
            cut = int(rng.integers(0, len(row) + 1)) if len(row) else 0
            pats.append([int(s) for s in row[:cut]])
        elif kind == 1:
            m = int(rng.integers(1, wmax + 3))
            pats.append([int(s) for s in rng.integers(0, p.sigma, size=m)])
        elif kind == 2:
            row = p.rows[int(rng.integers(0, p.h))]
            pat = [int(s) for s in row]
            if pat:
                pos = int(rng.integers(0, len(pat)))
                pat[pos] = (pat[pos] + 1) % max(p.sigma, 1)
            pats.append(pat)
        else:
            m = int(rng.integers(1, wmax + 1))
            pat = [int(s) for s in rng.integers(0, p.sigma, size=m)]
            pat[int(rng.integers(0, m))] = p.sigma  # out-of-alphabet symbol
            pats.append(pat)
    return pats


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
