"""Tour representation, length evaluation, validity and edge utilities.

A tour is a sequence of ``n`` distinct city indices interpreted cyclically
(the last city connects back to the first).  Internally all cities are
0-based; the dash-separated text form ("1-4-8-...") is 1-based.
Lengths are exact integers; the quality percentage is the only
floating-point quantity and is rounded at display time.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .tsplib import Instance

Tour = tuple[int, ...]

__all__ = [
    "Tour",
    "tour_length",
    "validate_tour",
    "quality_percent",
    "tour_edges",
    "common_edges",
    "canonical_cycle",
    "cyclic_equal",
    "rotate_to_start",
    "render_tour",
    "parse_tour",
]


def tour_length(order: Sequence[int], inst: Instance) -> int:
    """Total cycle length: consecutive distances plus the closing edge."""
    d = inst.dist_matrix()
    t = np.asarray(order, dtype=np.int64)
    return int(d[t, np.roll(t, -1)].sum())


def validate_tour(order: Sequence[int], n: int) -> str | None:
    """``None`` if ``order`` is a permutation of ``0..n-1``.

    Otherwise a description of the first violation.  City numbers in the
    message are 1-based, matching the textual tour notation.
    """
    seen = [False] * n
    for city in order:
        if not (0 <= city < n):
            return f"city {city + 1} out of range 1..{n}"
        if seen[city]:
            return f"city {city + 1} duplicated"
        seen[city] = True
    for city, present in enumerate(seen):
        if not present:
            return f"city {city + 1} missing"
    return None


def quality_percent(cost: float, optimum: int) -> float:
    """Percentage excess over the known optimum, rounded to 2 decimals."""
    if optimum <= 0:
        raise ValueError(f"optimum must be positive, got {optimum}")
    return round((cost - optimum) / optimum * 100.0, 2)


def tour_edges(order: Sequence[int]) -> set[tuple[int, int]]:
    """The n undirected edges of a tour, as sorted ``(a, b)`` pairs."""
    n = len(order)
    edges = set()
    for i in range(n):
        a, b = order[i], order[(i + 1) % n]
        edges.add((a, b) if a < b else (b, a))
    return edges


def common_edges(a: Sequence[int], b: Sequence[int]) -> set[tuple[int, int]]:
    """Undirected edges present in both tours."""
    if len(a) != len(b):
        raise ValueError(f"tour size mismatch: {len(a)} vs {len(b)}")
    return tour_edges(a) & tour_edges(b)


def rotate_to_start(order: Sequence[int], city: int) -> Tour:
    """The same cycle written starting from ``city``."""
    i = list(order).index(city)
    return tuple(order[i:]) + tuple(order[:i])


def canonical_cycle(order: Sequence[int]) -> Tour:
    """Canonical form under rotation and reflection.

    Rotates the cycle to start at city 0 and picks the lexicographically
    smaller of the two directions, so that two tours are cyclically equal
    iff their canonical forms compare equal.
    """
    fwd = rotate_to_start(order, min(order))
    rev = rotate_to_start(tuple(reversed(order)), min(order))
    return min(fwd, rev)


def cyclic_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff one tour is a rotation or reflection of the other."""
    return len(a) == len(b) and canonical_cycle(a) == canonical_cycle(b)


def render_tour(order: Iterable[int]) -> str:
    """Dash-separated 1-based text form, e.g. ``"1-4-8-6-5-3-7-2"``."""
    return "-".join(str(c + 1) for c in order)


def parse_tour(text: str, n: int | None = None) -> Tour:
    """Parse the dash-separated 1-based form back into a 0-based tour.

    When ``n`` is given the result is checked to be a valid tour of that
    size.
    """
    try:
        order = tuple(int(tok) - 1 for tok in text.replace(",", "-").split("-") if tok)
    except ValueError as exc:
        raise ValueError(f"unparseable tour text: {text!r}") from exc
    if n is not None:
        problem = validate_tour(order, n)
        if problem is not None:
            raise ValueError(f"invalid tour {text!r}: {problem}")
    return order
