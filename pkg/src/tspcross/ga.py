"""Generational GA with local-search children and change-driven termination.

One run initializes a population of random tours, then repeats an outer
iteration that breeds ``generation_size`` children (crossover followed by
2-opt and 3-opt descent), merges them with the population and truncates
back to ``population_size``.  The outer loop continues while the population
keeps changing, measured on the multiset of member tour lengths; the number
of outer iterations is part of the result, serving as the convergence-effort
metric next to wall time.

There is no mutation operator beyond the two local searches, and parent
selection is uniform: selection pressure comes entirely from the
sorted-truncation survivor rule.  Duplicate tours are removed under cyclic
equality (rotations and reflections collapse) so the population cannot fill
up with copies of one cycle; when deduplication leaves fewer members than
``population_size``, the best removed duplicates are padded back in.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .crossover import CrossoverSpec, apply_crossover
from .localsearch import DEFAULT_NEIGHBORS, build_neighbor_lists, three_opt_ls, two_opt_ls
from .rng import RandomStream
from .tour import Tour, canonical_cycle, tour_length
from .tsplib import Instance

__all__ = ["GaConfig", "GaResult", "Individual", "select_parents", "reduce_population", "run_ga"]

logger = logging.getLogger("tspcross.ga")

#: Population member: (tour length, tour).  Kept sorted ascending by length.
Individual = tuple[int, Tour]


@dataclass(frozen=True)
class GaConfig:
    """Parameters of one GA run."""

    crossover: CrossoverSpec
    population_size: int = 50
    generation_size: int = 500
    neighbor_k: int = DEFAULT_NEIGHBORS
    seed: int = 0
    max_while_iterations: int = 10_000  # safety cap, never hit in normal runs

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if self.generation_size < 1:
            raise ValueError("generation_size must be at least 1")
        if self.max_while_iterations < 1:
            raise ValueError("max_while_iterations must be at least 1")


@dataclass
class GaResult:
    """Outcome of one GA run."""

    best_tour: Tour
    best_length: int
    while_loop_count: int
    elapsed_seconds: float
    generations_evaluated: int
    hit_iteration_cap: bool = False
    config: GaConfig | None = field(default=None, repr=False)


def select_parents(population: list[Individual], rng: RandomStream) -> tuple[Individual, Individual]:
    """Draw two distinct population members uniformly without replacement."""
    if len(population) < 2:
        raise ValueError("population must hold at least 2 members")
    i, j = rng.pair(len(population))
    return population[i], population[j]


def reduce_population(pool: list[Individual], population_size: int) -> list[Individual]:
    """Survivor selection: sort, drop cyclic duplicates, truncate.

    The pool is sorted by ascending length (stable, so incumbents precede
    equal-length children), duplicates under cyclic equality are removed
    keeping the first occurrence, and the best ``population_size`` members
    survive.  If deduplication leaves too few, the best removed duplicates
    fill the remaining slots.
    """
    ranked = sorted(pool, key=lambda ind: ind[0])
    survivors: list[Individual] = []
    duplicates: list[Individual] = []
    seen: set[Tour] = set()
    for ind in ranked:
        key = canonical_cycle(ind[1])
        if key in seen:
            duplicates.append(ind)
        else:
            seen.add(key)
            survivors.append(ind)
        if len(survivors) == population_size:
            break
    while len(survivors) < population_size and duplicates:
        survivors.append(duplicates.pop(0))
    survivors.sort(key=lambda ind: ind[0])
    return survivors


def run_ga(cfg: GaConfig, inst: Instance) -> GaResult:
    """Run the GA to convergence and return the best tour found."""
    started = time.perf_counter()
    rng = RandomStream(cfg.seed)
    nl = build_neighbor_lists(inst, cfg.neighbor_k)
    n = inst.dimension

    population: list[Individual] = []
    for _ in range(cfg.population_size):
        order = rng.random_permutation(n)
        population.append((tour_length(order, inst), order))
    population.sort(key=lambda ind: ind[0])

    previous_lengths = [length for length, _ in population]
    loop_count = 0
    hit_cap = False
    while True:
        loop_count += 1
        pool = list(population)
        for _ in range(cfg.generation_size):
            (_, father), (_, mother) = select_parents(population, rng)
            child = apply_crossover(cfg.crossover, father, mother, inst, rng)
            child = two_opt_ls(child, inst, nl)
            child = three_opt_ls(child, inst, nl)
            pool.append((tour_length(child, inst), child))
        population = reduce_population(pool, cfg.population_size)
        lengths = [length for length, _ in population]
        changed = lengths != previous_lengths
        previous_lengths = lengths
        logger.info(
            "while-loop %d: best=%d changed=%s", loop_count, lengths[0], changed
        )
        if not changed:
            break
        if loop_count >= cfg.max_while_iterations:
            hit_cap = True
            logger.warning("iteration cap %d reached", cfg.max_while_iterations)
            break

    best_length, best_tour = population[0]
    return GaResult(
        best_tour=best_tour,
        best_length=best_length,
        while_loop_count=loop_count,
        elapsed_seconds=time.perf_counter() - started,
        generations_evaluated=loop_count * cfg.generation_size,
        hit_iteration_cap=hit_cap,
        config=cfg,
    )
