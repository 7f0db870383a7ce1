"""TSPLIB instance parsing and exact integer distances.

Supported formats are ``EDGE_WEIGHT_TYPE: EUC_2D`` (node coordinates, nint
rounding) and ``EDGE_WEIGHT_TYPE: EXPLICIT`` with ``EDGE_WEIGHT_FORMAT:
FULL_MATRIX`` (symmetric integer matrix, zero diagonal).  City indices are
1-based in the file format and 0-based everywhere inside the library.

A few instances ship with the package and can be loaded by name instead of
by path; see :func:`available_fixtures`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "TsplibError",
    "Instance",
    "parse_instance",
    "format_instance",
    "load_instance",
    "load_fixture",
    "available_fixtures",
    "resolve_instance",
    "KNOWN_OPTIMA",
]


class TsplibError(ValueError):
    """Raised for malformed or unsupported instance documents."""


#: Known optimal tour lengths, keyed by lower-cased instance name.  Used by
#: the quality metric; instances without an entry report no quality figures.
#: The paper8 value is the exact optimum over all 2520 distinct 8-city tours.
KNOWN_OPTIMA: dict[str, int] = {
    "paper8": 138,
    "eil51": 426,
    "eil76": 538,
    "kroa100": 21282,
    "kroa200": 29368,
    "a280": 2579,
    "lin318": 42029,
}


@dataclass
class Instance:
    """A symmetric TSP instance.

    Either ``coords`` (EUC_2D) or ``matrix`` (EXPLICIT/FULL_MATRIX) is set.
    Instances are immutable after parsing and safe for concurrent reads.
    """

    name: str
    dimension: int
    edge_weight_type: str
    coords: tuple[tuple[float, float], ...] | None = None
    matrix: tuple[tuple[int, ...], ...] | None = None
    optimum: int | None = None
    _dist: np.ndarray | None = field(default=None, repr=False, compare=False)

    def distance(self, i: int, j: int) -> int:
        """Exact integer distance between cities ``i`` and ``j`` (0-based)."""
        n = self.dimension
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"city index out of range: ({i}, {j}), n={n}")
        return int(self.dist_matrix()[i, j])

    def dist_matrix(self) -> np.ndarray:
        """Full ``n x n`` integer distance matrix (cached)."""
        if self._dist is None:
            if self.matrix is not None:
                d = np.array(self.matrix, dtype=np.int64)
            else:
                xy = np.array(self.coords, dtype=np.float64)
                diff = xy[:, None, :] - xy[None, :, :]
                d = np.floor(np.sqrt((diff * diff).sum(axis=2)) + 0.5).astype(np.int64)
            d.setflags(write=False)
            self._dist = d
        return self._dist


def _euc2d(a: tuple[float, float], b: tuple[float, float]) -> int:
    """TSPLIB nint rounding: nearest integer, halves away from zero."""
    return int(math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2) + 0.5)


def _tokenize_headers(text: str) -> tuple[dict[str, str], list[str]]:
    """Split a document into ``key: value`` headers and data-section lines."""
    headers: dict[str, str] = {}
    data_lines: list[str] = []
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.upper() == "EOF":
            break
        key = line.split(":", 1)[0].strip().upper() if ":" in line else line.upper()
        if section is None and key.endswith("_SECTION"):
            section = key
            headers[key] = ""
            continue
        if section is not None:
            data_lines.append(line)
            continue
        if ":" not in line:
            raise TsplibError(f"unparseable header line: {line!r}")
        name, value = line.split(":", 1)
        name = name.strip().upper()
        if name in headers:
            raise TsplibError(f"duplicate header {name}")
        headers[name] = value.strip()
    return headers, data_lines


def parse_instance(text: str) -> Instance:
    """Parse a TSPLIB document into an :class:`Instance`.

    Raises :class:`TsplibError` on missing or duplicate headers, dimension
    mismatches, unsupported edge weight types, or non-numeric data.
    """
    headers, data = _tokenize_headers(text)

    for required in ("NAME", "DIMENSION", "EDGE_WEIGHT_TYPE"):
        if required not in headers:
            raise TsplibError(f"missing header {required}")
    name = headers["NAME"]
    try:
        dimension = int(headers["DIMENSION"])
    except ValueError as exc:
        raise TsplibError(f"non-numeric DIMENSION: {headers['DIMENSION']!r}") from exc
    if dimension < 3:
        raise TsplibError(f"DIMENSION must be at least 3, got {dimension}")
    ewt = headers["EDGE_WEIGHT_TYPE"].upper()

    if ewt == "EUC_2D":
        if "NODE_COORD_SECTION" not in headers:
            raise TsplibError("missing header NODE_COORD_SECTION")
        coords = _parse_coords(data, dimension)
        inst = Instance(
            name=name,
            dimension=dimension,
            edge_weight_type="EUC_2D",
            coords=coords,
        )
    elif ewt == "EXPLICIT":
        fmt = headers.get("EDGE_WEIGHT_FORMAT", "").upper()
        if fmt != "FULL_MATRIX":
            raise TsplibError(f"unsupported EDGE_WEIGHT_FORMAT: {fmt or '(none)'}")
        if "EDGE_WEIGHT_SECTION" not in headers:
            raise TsplibError("missing header EDGE_WEIGHT_SECTION")
        matrix = _parse_full_matrix(data, dimension)
        inst = Instance(
            name=name,
            dimension=dimension,
            edge_weight_type="EXPLICIT",
            matrix=matrix,
        )
    else:
        raise TsplibError(f"unsupported EDGE_WEIGHT_TYPE: {ewt}")

    inst.optimum = KNOWN_OPTIMA.get(name.lower())
    return inst


def _parse_coords(lines: list[str], n: int) -> tuple[tuple[float, float], ...]:
    coords: list[tuple[float, float] | None] = [None] * n
    rows = 0
    for line in lines:
        parts = line.split()
        if len(parts) != 3:
            raise TsplibError(f"bad coordinate row: {line!r}")
        try:
            idx, x, y = int(parts[0]), float(parts[1]), float(parts[2])
        except ValueError as exc:
            raise TsplibError(f"non-numeric coordinate row: {line!r}") from exc
        if not (1 <= idx <= n):
            raise TsplibError(f"city id {idx} outside 1..{n}")
        if coords[idx - 1] is not None:
            raise TsplibError(f"duplicate coordinate row for city {idx}")
        coords[idx - 1] = (x, y)
        rows += 1
    if rows != n:
        raise TsplibError(f"expected {n} coordinate rows, got {rows}")
    return tuple(coords)  # type: ignore[arg-type]


def _parse_full_matrix(lines: list[str], n: int) -> tuple[tuple[int, ...], ...]:
    values: list[int] = []
    for line in lines:
        for tok in line.split():
            try:
                values.append(int(tok))
            except ValueError as exc:
                raise TsplibError(f"non-numeric matrix entry: {tok!r}") from exc
    if len(values) != n * n:
        raise TsplibError(f"expected {n * n} matrix entries, got {len(values)}")
    matrix = tuple(tuple(values[i * n : (i + 1) * n]) for i in range(n))
    for i in range(n):
        if matrix[i][i] != 0:
            raise TsplibError(f"nonzero diagonal entry at city {i + 1}")
        for j in range(i + 1, n):
            if matrix[i][j] != matrix[j][i]:
                raise TsplibError(f"asymmetric entries at ({i + 1}, {j + 1})")
            if matrix[i][j] < 0:
                raise TsplibError(f"negative weight at ({i + 1}, {j + 1})")
    return matrix


def format_instance(inst: Instance) -> str:
    """Serialize an instance back to TSPLIB text (round-trip safe)."""
    lines = [
        f"NAME: {inst.name}",
        "TYPE: TSP",
        f"DIMENSION: {inst.dimension}",
        f"EDGE_WEIGHT_TYPE: {inst.edge_weight_type}",
    ]
    if inst.edge_weight_type == "EXPLICIT":
        lines.append("EDGE_WEIGHT_FORMAT: FULL_MATRIX")
        lines.append("EDGE_WEIGHT_SECTION")
        assert inst.matrix is not None
        for row in inst.matrix:
            lines.append(" ".join(str(v) for v in row))
    else:
        lines.append("NODE_COORD_SECTION")
        assert inst.coords is not None
        for i, (x, y) in enumerate(inst.coords, start=1):
            lines.append(f"{i} {x:g} {y:g}")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def load_instance(path: str | Path) -> Instance:
    """Load an instance from a TSPLIB file on disk."""
    return parse_instance(Path(path).read_text())


def _fixture_dir():
    return resources.files("tspcross") / "instances"


def available_fixtures() -> list[str]:
    """Names of the instances bundled with the package."""
    return sorted(p.name[: -len(".tsp")] for p in _fixture_dir().iterdir() if p.name.endswith(".tsp"))


def load_fixture(name: str) -> Instance:
    """Load a bundled instance by name (e.g. ``paper8``, ``eil51``)."""
    entry = _fixture_dir() / f"{name}.tsp"
    if not entry.is_file():
        raise TsplibError(f"unknown fixture {name!r}; available: {', '.join(available_fixtures())}")
    return parse_instance(entry.read_text())


def resolve_instance(spec: str) -> Instance:
    """Load an instance given either a bundled fixture name or a file path."""
    if (_fixture_dir() / f"{spec}.tsp").is_file():
        return load_fixture(spec)
    path = Path(spec)
    if path.is_file():
        return load_instance(path)
    raise TsplibError(f"no such instance file or fixture: {spec!r}")
