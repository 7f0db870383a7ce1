"""2-opt and 3-opt local searches over k-nearest-neighbor candidate lists.

Both searches apply improving moves in first-improvement order, scanning
cities in tour order with don't-look bits, and finish with a clean
verification pass so that the returned tour admits no improving move within
the candidate-restricted neighborhood.  With full candidate lists
(``k >= n - 1``) the outputs are exactly 2-optimal respectively 3-optimal.
Segment reversals always flip the shorter arc.  Tour lengths are integers,
so every applied move strictly decreases the length and termination needs
no epsilon handling.

The inner loops are numba-compiled; the first call in a process pays a
one-off JIT cost (cached on disk afterwards).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .tour import Tour
from .tsplib import Instance

__all__ = [
    "DEFAULT_NEIGHBORS",
    "NeighborLists",
    "build_neighbor_lists",
    "two_opt_ls",
    "three_opt_ls",
]

#: Default candidate list size used by the GA and the benchmark harness.
DEFAULT_NEIGHBORS = 8


@dataclass
class NeighborLists:
    """Per-city nearest-neighbor candidates.

    ``lists[i]`` holds ``min(k, n - 1)`` distinct cities in nondecreasing
    distance from ``i``, distance ties broken by lower city index.
    """

    k: int
    lists: np.ndarray


def build_neighbor_lists(inst: Instance, k: int) -> NeighborLists:
    """Compute candidate lists for every city (deterministic)."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    d = inst.dist_matrix()
    n = inst.dimension
    k_eff = min(k, n - 1)
    idx = np.arange(n)
    lists = np.empty((n, k_eff), dtype=np.int64)
    for i in range(n):
        order = np.lexsort((idx, d[i]))
        lists[i] = order[order != i][:k_eff]
    return NeighborLists(k=k, lists=lists)


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

@njit(cache=True)
def _reverse_arc(tour, pos, i, j, n):
    """Reverse tour positions i..j (cyclic), flipping the shorter arc."""
    count = (j - i) % n + 1
    if 2 * count > n:
        i, j = (j + 1) % n, (i - 1) % n
        count = n - count
    for _ in range(count // 2):
        a, b = tour[i], tour[j]
        tour[i] = b
        tour[j] = a
        pos[a] = j
        pos[b] = i
        i += 1
        if i == n:
            i = 0
        j -= 1
        if j < 0:
            j = n - 1


@njit(cache=True)
def _scan_2opt(a, tour, pos, d, nl, dlb):
    """Apply the first improving candidate 2-opt move anchored at city a."""
    n = tour.shape[0]
    k = nl.shape[1]
    for direction in (1, -1):
        b = tour[(pos[a] + direction) % n]
        d_ab = d[a, b]
        for ci in range(k):
            c = nl[a, ci]
            d_ac = d[a, c]
            if d_ac >= d_ab:
                break
            e = tour[(pos[c] + direction) % n]
            if d_ac + d[b, e] - d_ab - d[c, e] < 0:
                if direction == 1:
                    _reverse_arc(tour, pos, pos[b], pos[c], n)
                else:
                    _reverse_arc(tour, pos, pos[c], pos[b], n)
                dlb[a] = 0
                dlb[b] = 0
                dlb[c] = 0
                dlb[e] = 0
                return True
    return False


@njit(cache=True)
def _two_opt_kernel(tour, pos, d, nl):
    n = tour.shape[0]
    dlb = np.zeros(n, dtype=np.uint8)
    while True:
        improved = False
        for idx in range(n):
            a = tour[idx]
            if dlb[a]:
                continue
            while _scan_2opt(a, tour, pos, d, nl, dlb):
                improved = True
            dlb[a] = 1
        if not improved:
            # Don't-look bits can rarely park a city whose neighborhood
            # changed indirectly; a clean pass restores exactness.
            clean = True
            for idx in range(n):
                a = tour[idx]
                while _scan_2opt(a, tour, pos, d, nl, dlb):
                    clean = False
            if clean:
                return


@njit(cache=True)
def _walk_3opt(n, q, s, r3, r4, r5, r6, seq_frag, seq_fwd):
    """Decide whether a candidate 3-opt reconnection is one Hamiltonian cycle.

    Works in "r-space", where position r counts steps from t2 along the
    search direction: the tour is the path 0..n-1 plus the removed closing
    edge (n-1, 0), the other removed edges are (q, q+1) and (s, s+1) with
    q < s, and the added edges are (0, r3), (r4, r5), (r6, n-1).  Removing
    the three edges leaves fragments F0 = [0, q], F1 = [q+1, s],
    F2 = [s+1, n-1]; the walk traverses fragments alternating with added
    edges, starting inside F0, and succeeds exactly when it closes back
    into F0 after consuming all three fragments.  On success the fragment
    visit order and orientations are left in ``seq_frag``/``seq_fwd``.
    """
    y_lo0, y_hi0 = 0, r3
    y_lo1 = r4 if r4 < r5 else r5
    y_hi1 = r5 if r4 < r5 else r4
    y_lo2, y_hi2 = r6, n - 1

    used0 = False
    used1 = False
    used2 = False
    f1_used = False
    f2_used = False
    seq_frag[0] = 0
    seq_fwd[0] = 1
    v = q  # exit end of F0 when traversed from position 0

    for step in range(1, 4):
        w = np.int64(-1)
        if not used0 and (y_lo0 == v or y_hi0 == v):
            used0 = True
            w = y_hi0 if y_lo0 == v else y_lo0
        elif not used1 and (y_lo1 == v or y_hi1 == v):
            used1 = True
            w = y_hi1 if y_lo1 == v else y_lo1
        elif not used2 and (y_lo2 == v or y_hi2 == v):
            used2 = True
            w = y_hi2 if y_lo2 == v else y_lo2
        if w < 0:
            return False
        if step == 3:
            return w == 0  # closes back into F0
        if w <= q:
            return False  # re-enters F0 before the other fragments
        if w <= s:
            if f1_used:
                return False
            f1_used = True
            frag, lo, hi = 1, q + 1, s
        else:
            if f2_used:
                return False
            f2_used = True
            frag, lo, hi = 2, s + 1, n - 1
        seq_frag[step] = frag
        seq_fwd[step] = 1 if w == lo else 0
        v = hi if w == lo else lo

    return False  # unreachable


@njit(cache=True)
def _materialize_3opt(tour, pos, p2, d1, n, q, s, seq_frag, seq_fwd, tmp):
    """Rewrite the tour according to a validated fragment sequence."""
    w = 0
    for i in range(3):
        frag = seq_frag[i]
        if frag == 0:
            lo, hi = 0, q
        elif frag == 1:
            lo, hi = q + 1, s
        else:
            lo, hi = s + 1, n - 1
        if seq_fwd[i]:
            for r in range(lo, hi + 1):
                tmp[w] = tour[(p2 + d1 * r) % n]
                w += 1
        else:
            for r in range(hi, lo - 1, -1):
                tmp[w] = tour[(p2 + d1 * r) % n]
                w += 1
    for i in range(n):
        tour[i] = tmp[i]
        pos[tour[i]] = i


@njit(cache=True)
def _clashes_removed(y_lo, y_hi, q, s, n):
    """True when an added edge coincides with a removed edge."""
    if y_lo == q and y_hi == q + 1:
        return True
    if y_lo == s and y_hi == s + 1:
        return True
    if y_lo == 0 and y_hi == n - 1:
        return True
    return False


@njit(cache=True)
def _scan_3opt(t1, tour, pos, d, nl, dlb, tmp, seq_frag, seq_fwd):
    """Apply the first improving candidate 3-opt move anchored at t1.

    Sequential search with positive partial gains: remove (t1, t2), add
    (t2, t3), remove (t3, t4), add (t4, t5), remove (t5, t6), close with
    (t6, t1).  Both tour directions are explored from every anchor and
    both tour edges of t3 and of t5 are tried, so with full candidate
    lists every improving 3-opt move has a discoverable representation.
    Reconnections that reuse a removed edge (pure 2-opt moves in
    disguise) are skipped.
    """
    n = tour.shape[0]
    k = nl.shape[1]
    for d1 in (1, -1):
        p2 = (pos[t1] + d1) % n
        t2 = tour[p2]
        g0 = d[t1, t2]
        for i3 in range(k):
            t3 = nl[t2, i3]
            if d[t2, t3] >= g0:
                break
            g1 = g0 - d[t2, t3]
            r3 = (d1 * (pos[t3] - p2)) % n
            if r3 == n - 1:
                continue  # t3 == t1
            for d2 in (1, -1):
                r4 = r3 + d2
                if r4 < 1 or r4 > n - 1:
                    continue
                t4 = tour[(p2 + d1 * r4) % n]
                g1b = g1 + d[t3, t4]
                for i5 in range(k):
                    t5 = nl[t4, i5]
                    if d[t4, t5] >= g1b:
                        break
                    r5 = (d1 * (pos[t5] - p2)) % n
                    if r5 == r3 or r5 == r4 or r5 == n - 1:
                        continue
                    g2 = g1b - d[t4, t5]
                    for d3 in (1, -1):
                        r6 = r5 + d3
                        if r6 < 0 or r6 > n - 2:
                            continue
                        t6 = tour[(p2 + d1 * r6) % n]
                        if g2 + d[t5, t6] - d[t6, t1] <= 0:
                            continue
                        e2 = r3 if r4 > r3 else r4
                        e3 = r5 if r6 > r5 else r6
                        if e2 == e3:
                            continue  # same removed edge twice
                        q = e2 if e2 < e3 else e3
                        s = e3 if e2 < e3 else e2
                        y2_lo = r4 if r4 < r5 else r5
                        y2_hi = r5 if r4 < r5 else r4
                        # Two added edges collapsing into one; (0,r3) and
                        # (r6,n-1) cannot coincide since r3 < n-1.
                        if y2_lo == 0 and y2_hi == r3:
                            continue
                        if y2_lo == r6 and y2_hi == n - 1:
                            continue
                        if (
                            _clashes_removed(0, r3, q, s, n)
                            or _clashes_removed(y2_lo, y2_hi, q, s, n)
                            or _clashes_removed(r6, n - 1, q, s, n)
                        ):
                            continue
                        if not _walk_3opt(n, q, s, r3, r4, r5, r6, seq_frag, seq_fwd):
                            continue
                        _materialize_3opt(
                            tour, pos, p2, d1, n, q, s, seq_frag, seq_fwd, tmp
                        )
                        dlb[t1] = 0
                        dlb[t2] = 0
                        dlb[t3] = 0
                        dlb[t4] = 0
                        dlb[t5] = 0
                        dlb[t6] = 0
                        return True
    return False


@njit(cache=True)
def _three_opt_kernel(tour, pos, d, nl):
    n = tour.shape[0]
    dlb = np.zeros(n, dtype=np.uint8)
    tmp = np.empty(n, dtype=np.int64)
    seq_frag = np.empty(3, dtype=np.int64)
    seq_fwd = np.empty(3, dtype=np.uint8)
    while True:
        improved = False
        for idx in range(n):
            a = tour[idx]
            if dlb[a]:
                continue
            while _scan_3opt(a, tour, pos, d, nl, dlb, tmp, seq_frag, seq_fwd):
                improved = True
            dlb[a] = 1
        if not improved:
            clean = True
            for idx in range(n):
                a = tour[idx]
                while _scan_3opt(a, tour, pos, d, nl, dlb, tmp, seq_frag, seq_fwd):
                    clean = False
            if clean:
                return


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def _run_kernel(kernel, t: Sequence[int], inst: Instance, nl: NeighborLists) -> Tour:
    tour = np.array(t, dtype=np.int64)
    pos = np.empty_like(tour)
    pos[tour] = np.arange(tour.shape[0], dtype=np.int64)
    kernel(tour, pos, inst.dist_matrix(), nl.lists)
    return tuple(int(c) for c in tour)


def two_opt_ls(t: Sequence[int], inst: Instance, nl: NeighborLists) -> Tour:
    """Candidate-restricted 2-opt descent; never lengthens the tour."""
    return _run_kernel(_two_opt_kernel, t, inst, nl)


def three_opt_ls(t: Sequence[int], inst: Instance, nl: NeighborLists) -> Tour:
    """Candidate-restricted sequential 3-opt descent."""
    return _run_kernel(_three_opt_kernel, t, inst, nl)
