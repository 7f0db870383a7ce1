"""Crossover operators, a memetic GA and a benchmark harness for the STSP."""

from .bench import BenchmarkReport, BenchRow, emit_report, parse_report_csv, run_benchmark
from .crossover import (
    TABLE_CROSSOVERS,
    CrossoverSpec,
    TraceStep,
    apply_crossover,
    dpx,
    epmx,
    gsx,
    gx,
    pmx,
    render_trace,
    uhx,
)
from .ga import GaConfig, GaResult, reduce_population, run_ga, select_parents
from .localsearch import (
    DEFAULT_NEIGHBORS,
    NeighborLists,
    build_neighbor_lists,
    three_opt_ls,
    two_opt_ls,
)
from .rng import RandomStream
from .tour import (
    Tour,
    canonical_cycle,
    common_edges,
    cyclic_equal,
    parse_tour,
    quality_percent,
    render_tour,
    rotate_to_start,
    tour_edges,
    tour_length,
    validate_tour,
)
from .tsplib import (
    KNOWN_OPTIMA,
    Instance,
    TsplibError,
    available_fixtures,
    format_instance,
    load_fixture,
    load_instance,
    parse_instance,
    resolve_instance,
)

__version__ = "0.1.0"
