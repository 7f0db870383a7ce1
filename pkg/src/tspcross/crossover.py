"""The nine tour crossover operators compared by the benchmark.

Every operator is a pure, deterministic function of its arguments: parents,
explicit cut/start parameters, the instance distances where the operator is
distance-guided, and a :class:`~tspcross.rng.RandomStream` where a fallback
or placement rule is randomized.  All operators produce valid tours for any
valid input; repair and fallback rules guarantee progress.

Operators that walk the parents step by step accept an optional ``trace``
list and append one :class:`TraceStep` per decision, which the CLI renders
as a step table for demonstration and debugging.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .rng import RandomStream
from .tour import Tour, common_edges, tour_length
from .tsplib import Instance

__all__ = [
    "TraceStep",
    "CrossoverSpec",
    "TABLE_CROSSOVERS",
    "pmx",
    "epmx",
    "gx",
    "uhx",
    "gsx",
    "dpx",
    "apply_crossover",
    "render_trace",
]

GX_VARIANTS = ("GX2", "GX34", "GX5", "VGX")


@dataclass
class TraceStep:
    """One row of an operator's step table (0-based cities)."""

    step: int
    candidates: tuple[int, ...]
    chosen: int
    note: str = ""


def render_trace(steps: Sequence[TraceStep]) -> str:
    """Human-readable step table with 1-based city numbers."""
    lines = []
    for s in steps:
        cand = "{" + ",".join(str(c + 1) for c in s.candidates) + "}" if s.candidates else "-"
        note = f"  ({s.note})" if s.note else ""
        lines.append(f"step {s.step}: candidates {cand} -> {s.chosen + 1}{note}")
    return "\n".join(lines)


def _positions(order: Sequence[int]) -> list[int]:
    pos = [0] * len(order)
    for i, c in enumerate(order):
        pos[c] = i
    return pos


# ---------------------------------------------------------------------------
# PMX / EPMX
# ---------------------------------------------------------------------------

def pmx(father: Sequence[int], mother: Sequence[int], cut1: int, cut2: int) -> tuple[Tour, Tour]:
    """Partially mapped crossover with two cut positions.

    The segments ``[cut1, cut2)`` are swapped between the parents; cities
    outside the segment are repaired through the segment's position-wise
    mapping, following mapping chains until an unconflicted city is found.
    Child 1 is the father carrying the mother's segment, child 2 the
    mother carrying the father's.
    """
    n = len(father)
    if not (0 <= cut1 < cut2 <= n):
        raise ValueError(f"invalid cut positions ({cut1}, {cut2}) for n={n}")

    def offspring(base: Sequence[int], donor: Sequence[int]) -> Tour:
        segment = donor[cut1:cut2]
        in_segment = set(segment)
        resolve = {donor[i]: base[i] for i in range(cut1, cut2)}
        child = list(base)
        child[cut1:cut2] = segment
        for i in list(range(0, cut1)) + list(range(cut2, n)):
            c = base[i]
            while c in in_segment:
                c = resolve[c]
            child[i] = c
        return tuple(child)

    return offspring(father, mother), offspring(mother, father)


def epmx(father: Sequence[int], mother: Sequence[int], point: int) -> tuple[Tour, Tour]:
    """Single-point PMX variant exchanging the cities unique to each prefix.

    The cities that appear in the father's first ``point`` positions but not
    in the mother's are paired positionally (i-th with i-th) with the cities
    unique to the mother's prefix.  Child 1 is the mother's prefix followed
    by the father's suffix with every paired city substituted by its
    partner; child 2 is the symmetric construction.
    """
    n = len(father)
    if not (1 <= point <= n):
        raise ValueError(f"invalid point {point} for n={n}")
    f_prefix, m_prefix = tuple(father[:point]), tuple(mother[:point])
    f_set, m_set = set(f_prefix), set(m_prefix)
    f_unique = [c for c in f_prefix if c not in m_set]
    m_unique = [c for c in m_prefix if c not in f_set]
    partner: dict[int, int] = {}
    for a, b in zip(f_unique, m_unique):
        partner[a] = b
        partner[b] = a
    child1 = m_prefix + tuple(partner.get(c, c) for c in father[point:])
    child2 = f_prefix + tuple(partner.get(c, c) for c in mother[point:])
    return child1, child2


# ---------------------------------------------------------------------------
# Greedy crossover family
# ---------------------------------------------------------------------------

def gx(
    variant: str,
    father: Sequence[int],
    mother: Sequence[int],
    start: int,
    inst: Instance,
    rng: RandomStream,
    trace: list[TraceStep] | None = None,
) -> Tour:
    """Greedy crossover: grow the child by the nearest parental neighbor.

    The candidate set and the fallback used when every candidate is already
    in the child depend on the variant:

    ======== ========================== ==============================
    variant  candidates of current city fallback
    ======== ========================== ==============================
    GX2      successor in each parent   uniformly random unvisited city
    GX34     successor in each parent   nearest unvisited city
    GX5      successor and predecessor  uniformly random unvisited city
    VGX      successor and predecessor  nearest unvisited city
    ======== ========================== ==============================

    Candidate ties are broken father-successor first, then
    father-predecessor, mother-successor, mother-predecessor.
    """
    if variant not in GX_VARIANTS:
        raise ValueError(f"unknown GX variant {variant!r}")
    n = len(father)
    d = inst.dist_matrix()
    pos_f, pos_m = _positions(father), _positions(mother)
    four = variant in ("GX5", "VGX")
    greedy_fallback = variant in ("GX34", "VGX")

    child = [start]
    visited = [False] * n
    visited[start] = True
    if trace is not None:
        trace.append(TraceStep(1, (), start, "start"))

    while len(child) < n:
        cur = child[-1]
        f_succ = father[(pos_f[cur] + 1) % n]
        f_pred = father[(pos_f[cur] - 1) % n]
        m_succ = mother[(pos_m[cur] + 1) % n]
        m_pred = mother[(pos_m[cur] - 1) % n]
        if four:
            display = (f_pred, f_succ, m_pred, m_succ)
            priority = (f_succ, f_pred, m_succ, m_pred)
        else:
            display = (f_succ, m_succ)
            priority = (f_succ, m_succ)

        best = None
        for rank, cand in enumerate(priority):
            if visited[cand]:
                continue
            key = (d[cur, cand], rank)
            if best is None or key < best[0]:
                best = (key, cand)
        if best is not None:
            chosen = best[1]
            note = ""
        elif greedy_fallback:
            unvisited = [c for c in range(n) if not visited[c]]
            chosen = min(unvisited, key=lambda c: (d[cur, c], c))
            note = "fallback: nearest unvisited"
        else:
            unvisited = [c for c in range(n) if not visited[c]]
            chosen = unvisited[rng.randrange(len(unvisited))]
            note = "fallback: random unvisited"

        child.append(chosen)
        visited[chosen] = True
        if trace is not None:
            trace.append(TraceStep(len(child), display, chosen, note))
    return tuple(child)


# ---------------------------------------------------------------------------
# Four-pointer heuristic crossover
# ---------------------------------------------------------------------------

class _Pointer:
    __slots__ = ("order", "pos", "step")

    def __init__(self, order: Sequence[int], pos: int, step: int):
        self.order = order
        self.pos = pos
        self.step = step  # +1 right, -1 left

    @property
    def city(self) -> int:
        return self.order[self.pos]

    def advance(self) -> None:
        self.pos = (self.pos + self.step) % len(self.order)

    def skip_visited(self, visited: list[bool]) -> None:
        n = len(self.order)
        for _ in range(n):
            if not visited[self.city]:
                return
            self.advance()


def uhx(
    father: Sequence[int],
    mother: Sequence[int],
    start: int,
    inst: Instance,
    trace: list[TraceStep] | None = None,
) -> Tour:
    """Heuristic crossover driven by four advancing cyclic pointers.

    Four pointers are placed on the left and right neighbors of the start
    city in each parent.  Each step appends the nearest not-yet-copied
    pointed city to the child; the pointer that supplied it advances one
    position in its own direction, and any other pointer left resting on
    the just-copied city skips forward in its direction until it reaches a
    city not yet in the child.  Distance ties are broken in the fixed order
    father-right, father-left, mother-right, mother-left.  If every pointed
    city is already in the child, all pointers skip forward to the next
    unvisited city before the choice is made.
    """
    n = len(father)
    d = inst.dist_matrix()
    pos_f, pos_m = _positions(father), _positions(mother)

    fr = _Pointer(father, (pos_f[start] + 1) % n, +1)
    fl = _Pointer(father, (pos_f[start] - 1) % n, -1)
    mr = _Pointer(mother, (pos_m[start] + 1) % n, +1)
    ml = _Pointer(mother, (pos_m[start] - 1) % n, -1)
    by_priority = (fr, fl, mr, ml)

    child = [start]
    visited = [False] * n
    visited[start] = True
    if trace is not None:
        trace.append(TraceStep(1, (), start, "start"))

    def pointed_display() -> tuple[int, ...]:
        f_pair = sorted((fl, fr), key=lambda p: p.pos)
        m_pair = sorted((ml, mr), key=lambda p: p.pos)
        return tuple(p.city for p in f_pair + m_pair)

    while len(child) < n:
        cur = child[-1]
        display = pointed_display()
        note = ""
        eligible = [p for p in by_priority if not visited[p.city]]
        if not eligible:
            for p in by_priority:
                p.skip_visited(visited)
            eligible = [p for p in by_priority if not visited[p.city]]
            note = "all pointed cities copied; pointers skipped"
        if eligible:
            best = min(
                enumerate(eligible),
                key=lambda item: (d[cur, item[1].city], item[0]),
            )[1]
            chosen = best.city
            best.advance()
        else:
            # Defensive only: skipping always finds an unvisited city while
            # one exists, so this fallback is unreachable in practice.
            chosen = min(
                (c for c in range(n) if not visited[c]),
                key=lambda c: (d[cur, c], c),
            )
            note = "fallback: nearest unvisited"
        child.append(chosen)
        visited[chosen] = True
        for p in by_priority:
            if p.city == chosen:
                p.skip_visited(visited)
        if trace is not None:
            trace.append(TraceStep(len(child), display, chosen, note))
    return tuple(child)


# ---------------------------------------------------------------------------
# Greedy subtour crossover family
# ---------------------------------------------------------------------------

def gsx(
    version: int,
    father: Sequence[int],
    mother: Sequence[int],
    start: int,
    rng: RandomStream,
    trace: list[TraceStep] | None = None,
) -> Tour:
    """Greedy subtour crossover, versions 0, 1 and 2.

    A subtour grows from the start city: each round first tries to extend
    the right end with the father-successor of the current right end, then
    the left end with the mother-predecessor of the current left end.  An
    extension direction closes as soon as its next city is already in the
    subtour.  The remaining cities are then appended according to the
    version: version 0 shuffles them with the seeded stream, versions 1
    and 2 keep the order in which they appear in the father.  Version 2
    additionally probes the neighbors of the start city before growing:
    when the father's right neighbor equals the mother's left neighbor the
    mother is traversed rightward instead, which prevents the version-1
    degeneration that reproduces the father unchanged.
    """
    if version not in (0, 1, 2):
        raise ValueError(f"unknown GSX version {version}")
    n = len(father)
    pos_f, pos_m = _positions(father), _positions(mother)

    def f_succ(c: int) -> int:
        return father[(pos_f[c] + 1) % n]

    mother_dir = -1
    if version == 2 and f_succ(start) == mother[(pos_m[start] - 1) % n]:
        mother_dir = +1

    def m_next(c: int) -> int:
        return mother[(pos_m[c] + mother_dir) % n]

    sub: list[int] = [start]
    in_sub = [False] * n
    in_sub[start] = True
    if trace is not None:
        dir_note = "mother leftward" if mother_dir < 0 else "mother flipped rightward"
        trace.append(TraceStep(1, (), start, f"start; {dir_note}"))

    right_open = left_open = True
    prepended = 0
    while (right_open or left_open) and len(sub) < n:
        if right_open:
            nxt = f_succ(sub[-1])
            if in_sub[nxt]:
                right_open = False
                if trace is not None:
                    trace.append(TraceStep(len(sub) + 1, (nxt,), sub[-1], "right side closed"))
            else:
                sub.append(nxt)
                in_sub[nxt] = True
                if trace is not None:
                    trace.append(TraceStep(len(sub), (nxt,), nxt, "extend right (father)"))
        if left_open and len(sub) < n:
            nxt = m_next(sub[0])
            if in_sub[nxt]:
                left_open = False
                if trace is not None:
                    trace.append(TraceStep(len(sub) + 1, (nxt,), sub[0], "left side closed"))
            else:
                sub.insert(0, nxt)
                in_sub[nxt] = True
                prepended += 1
                if trace is not None:
                    trace.append(TraceStep(len(sub), (nxt,), nxt, "extend left (mother)"))

    remaining = [c for c in father if not in_sub[c]]
    if version == 0:
        rng.shuffle(remaining)
        note = "remaining cities appended in shuffled order"
    else:
        note = "remaining cities appended in father order"
    if trace is not None and remaining:
        trace.append(TraceStep(len(sub) + 1, tuple(remaining), remaining[0], note))
    return tuple(sub + remaining)


# ---------------------------------------------------------------------------
# Distance-preserving crossover
# ---------------------------------------------------------------------------

def dpx(
    father: Sequence[int],
    mother: Sequence[int],
    inst: Instance,
    trace: list[TraceStep] | None = None,
) -> Tour:
    """Distance-preserving crossover.

    Splits the cities into fragments: maximal paths whose every edge occurs
    in both parents (isolated cities form singleton fragments).  Starting
    from the fragment containing the lowest city index, oriented to begin
    at its lower endpoint, the child is rebuilt by repeatedly connecting
    the current free endpoint to the nearest free endpoint of any unused
    fragment (ties to the lowest city index); the connected fragment is
    traversed from that endpoint to its other end.  Every edge common to
    both parents therefore survives into the child.
    """
    n = len(father)
    d = inst.dist_matrix()
    shared = common_edges(father, mother)
    if len(shared) == n:
        # All edges common: the parents are the same cycle.
        return tuple(father)

    adjacency: list[list[int]] = [[] for _ in range(n)]
    for a, b in shared:
        adjacency[a].append(b)
        adjacency[b].append(a)

    fragments: list[list[int]] = []
    assigned = [False] * n
    for c in range(n):
        if assigned[c] or len(adjacency[c]) == 2:
            continue
        frag = [c]
        assigned[c] = True
        prev, cur = c, (adjacency[c][0] if adjacency[c] else None)
        while cur is not None:
            frag.append(cur)
            assigned[cur] = True
            nxt = None
            for cand in adjacency[cur]:
                if cand != prev:
                    nxt = cand
            prev, cur = cur, nxt
        fragments.append(frag)
    # Walking from endpoints consumes every city: a proper subset of a
    # Hamiltonian cycle's edges cannot contain a cycle.
    fragments = [f for f in fragments if f[0] <= f[-1]] + [
        list(reversed(f)) for f in fragments if f[0] > f[-1]
    ]

    start_idx = next(i for i, f in enumerate(fragments) if 0 in f)
    path = fragments[start_idx]
    unused = [f for i, f in enumerate(fragments) if i != start_idx]
    if trace is not None:
        trace.append(
            TraceStep(1, tuple(path), path[0], f"{len(fragments)} fragments; start fragment")
        )

    step = 2
    while unused:
        tail = path[-1]
        best_key: tuple[int, int] | None = None
        best_frag = -1
        best_reversed = False
        for idx, frag in enumerate(unused):
            for endpoint, rev in ((frag[0], False), (frag[-1], True)):
                key = (int(d[tail, endpoint]), endpoint)
                if best_key is None or key < best_key:
                    best_key, best_frag, best_reversed = key, idx, rev
        frag = unused.pop(best_frag)
        if best_reversed and len(frag) > 1:
            frag = list(reversed(frag))
        path.extend(frag)
        if trace is not None:
            trace.append(TraceStep(step, tuple(frag), frag[0], f"connected to {tail + 1}"))
            step += 1
    return tuple(path)


# ---------------------------------------------------------------------------
# Operator selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossoverSpec:
    """Which crossover to run, plus its variant parameters."""

    kind: str  # PMX | EPMX | GX | UHX | GSX | DPX
    gx_variant: str | None = None  # GX2 | GX34 | GX5 | VGX, iff kind == GX
    gsx_version: int | None = None  # 0 | 1 | 2, iff kind == GSX

    def __post_init__(self):
        if self.kind not in ("PMX", "EPMX", "GX", "UHX", "GSX", "DPX"):
            raise ValueError(f"unknown crossover kind {self.kind!r}")
        if (self.kind == "GX") != (self.gx_variant is not None):
            raise ValueError("gx_variant must be set exactly when kind is GX")
        if self.kind == "GX" and self.gx_variant not in GX_VARIANTS:
            raise ValueError(f"unknown GX variant {self.gx_variant!r}")
        if (self.kind == "GSX") != (self.gsx_version is not None):
            raise ValueError("gsx_version must be set exactly when kind is GSX")
        if self.kind == "GSX" and self.gsx_version not in (0, 1, 2):
            raise ValueError(f"unknown GSX version {self.gsx_version!r}")

    @property
    def name(self) -> str:
        """Canonical display name, e.g. ``GX[3][4]`` or ``GSX-2``."""
        if self.kind == "GX":
            return {"GX2": "GX[2]", "GX34": "GX[3][4]", "GX5": "GX[5]", "VGX": "VGX"}[
                self.gx_variant  # type: ignore[index]
            ]
        if self.kind == "GSX":
            return f"GSX-{self.gsx_version}"
        return self.kind

    @classmethod
    def from_name(cls, text: str) -> "CrossoverSpec":
        """Parse a crossover name such as ``pmx``, ``GX[5]`` or ``gsx-2``."""
        key = text.strip().upper().replace("[", "").replace("]", "").replace("-", "")
        table = {
            "PMX": cls("PMX"),
            "EPMX": cls("EPMX"),
            "UHX": cls("UHX"),
            "DPX": cls("DPX"),
            "GX2": cls("GX", gx_variant="GX2"),
            "GX34": cls("GX", gx_variant="GX34"),
            "GX5": cls("GX", gx_variant="GX5"),
            "VGX": cls("GX", gx_variant="VGX"),
            "GSX0": cls("GSX", gsx_version=0),
            "GSX1": cls("GSX", gsx_version=1),
            "GSX2": cls("GSX", gsx_version=2),
        }
        if key not in table:
            raise ValueError(
                f"unknown crossover {text!r}; known: "
                + ", ".join(s.name for s in table.values())
            )
        return table[key]


#: The nine operators compared in the benchmark, in report order.
TABLE_CROSSOVERS: tuple[CrossoverSpec, ...] = (
    CrossoverSpec("PMX"),
    CrossoverSpec("EPMX"),
    CrossoverSpec("GSX", gsx_version=2),
    CrossoverSpec("GX", gx_variant="GX2"),
    CrossoverSpec("GX", gx_variant="GX34"),
    CrossoverSpec("GX", gx_variant="GX5"),
    CrossoverSpec("GX", gx_variant="VGX"),
    CrossoverSpec("UHX"),
    CrossoverSpec("DPX"),
)


def apply_crossover(
    spec: CrossoverSpec,
    father: Tour,
    mother: Tour,
    inst: Instance,
    rng: RandomStream,
) -> Tour:
    """Run one crossover application, drawing its parameters from ``rng``.

    Cut points, the single-point position and start cities are drawn
    uniformly.  Operators that produce two children contribute the shorter
    one (child 1 on a tie).
    """
    n = len(father)
    if spec.kind == "PMX":
        a, b = rng.pair(n + 1)
        cut1, cut2 = min(a, b), max(a, b)
        c1, c2 = pmx(father, mother, cut1, cut2)
        return c1 if tour_length(c1, inst) <= tour_length(c2, inst) else c2
    if spec.kind == "EPMX":
        point = 1 + rng.randrange(n)
        c1, c2 = epmx(father, mother, point)
        return c1 if tour_length(c1, inst) <= tour_length(c2, inst) else c2
    if spec.kind == "GX":
        return gx(spec.gx_variant, father, mother, rng.randrange(n), inst, rng)  # type: ignore[arg-type]
    if spec.kind == "UHX":
        return uhx(father, mother, rng.randrange(n), inst)
    if spec.kind == "GSX":
        return gsx(spec.gsx_version, father, mother, rng.randrange(n), rng)  # type: ignore[arg-type]
    return dpx(father, mother, inst)
