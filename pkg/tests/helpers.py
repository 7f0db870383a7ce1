"""Shared test oracles: brute-force optima and exhaustive move enumeration.

Everything here is deliberately independent of the library's search code:
optima come from enumerating permutations, and local-search optimality is
checked by constructing every candidate reconnection explicitly.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from tspcross import Instance, RandomStream


def random_euc_instance(n: int, seed: int, name: str = "rand") -> Instance:
    """Random EUC_2D instance with integer coordinates."""
    rng = RandomStream(seed)
    coords = tuple((float(rng.randrange(500)), float(rng.randrange(500))) for _ in range(n))
    return Instance(name=f"{name}{n}-{seed}", dimension=n, edge_weight_type="EUC_2D", coords=coords)


def random_tour(n: int, seed: int) -> tuple[int, ...]:
    return RandomStream(seed).random_permutation(n)


def cycle_length(order, d) -> int:
    n = len(order)
    return int(sum(d[order[i], order[(i + 1) % n]] for i in range(n)))


def brute_force_optimum(inst: Instance) -> tuple[int, tuple[int, ...]]:
    """Exact optimum by enumerating all (n-1)!/2 distinct tours."""
    d = inst.dist_matrix()
    n = inst.dimension
    best_len, best = None, None
    for perm in permutations(range(1, n)):
        if perm[0] > perm[-1]:  # skip reflections
            continue
        tour = (0,) + perm
        length = cycle_length(tour, d)
        if best_len is None or length < best_len:
            best_len, best = length, tour
    return best_len, best


def improving_2opt_move_exists(order, d) -> bool:
    """Exhaustive 2-opt check: any segment reversal that shortens the tour."""
    n = len(order)
    for i in range(n - 1):
        a, b = order[i], order[i + 1]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # same edge pair as (i=0 edge, closing edge)
            c, e = order[j], order[(j + 1) % n]
            if d[a, c] + d[b, e] < d[a, b] + d[c, e]:
                return True
    return False


def _edge_set(order):
    n = len(order)
    return {frozenset((order[i], order[(i + 1) % n])) for i in range(n)}


def improving_3opt_move_exists(order, d) -> bool:
    """Exhaustive pure-3-opt check by explicit reconstruction.

    Cuts the cycle at every position triple, rebuilds the tour from the
    three segments in all seven non-identity arrangements, and counts only
    arrangements that exchange exactly three edges (pure 2-opt
    reconnections are the 2-opt oracle's business).
    """
    order = tuple(order)
    n = len(order)
    base_len = cycle_length(order, d)
    base_edges = _edge_set(order)
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            for k in range(j + 1, n):
                s1 = order[i + 1 : j + 1]
                s2 = order[j + 1 : k + 1]
                s3 = order[k + 1 :] + order[: i + 1]
                r1, r2 = s1[::-1], s2[::-1]
                for mid in (
                    s1 + r2, r1 + s2, r1 + r2,
                    s2 + s1, s2 + r1, r2 + s1, r2 + r1,
                ):
                    cand = s3 + mid
                    if cycle_length(cand, d) >= base_len:
                        continue
                    if len(base_edges - _edge_set(cand)) == 3:
                        return True
    return False
