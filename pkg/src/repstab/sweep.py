"""Seeded experiment sweeps over perturbation size, exponent, and seeds.

Cells are independent pure computations keyed by (preset, eps, p, seed)
indices; each derives its own random stream from the master seed, so the
CSV output is byte-identical across reruns and worker counts, except for
the runtime column. Failures are recorded per cell and do not stop the
sweep.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import RepStabError, ValidationError
from .graphs import perturb
from .rng import derived_generator
from .stabilize import (DEFAULT_GUARD, CorrectionContext, realize, stabilize,
                        uniform_lambda)

CSV_HEADER = ("preset", "seed", "p", "dim", "epsilon_in", "delta",
              "epsilon_out", "cone_gap", "runtime_ms", "error")
THREADS_ENV = "REPSTAB_THREADS"

DEFAULT_EPS_GRID = (1e-1, 1e-2, 1e-3, 1e-4)
DEFAULT_P_GRID = (1.0, 2.0, 4.0)


@dataclass(frozen=True)
class SweepConfig:
    """Grid description for one sweep run."""

    presets: tuple[str, ...]
    dim: int = 6
    eps_grid: tuple[float, ...] = DEFAULT_EPS_GRID
    p_grid: tuple[float, ...] = DEFAULT_P_GRID
    seeds_per_cell: int = 20
    master_seed: int = 0
    mode: str = "edges-only"
    guard: float = DEFAULT_GUARD
    lam_blocks: tuple | None = None   # explicit per-vertex blocks, else uniform recipe

    def __post_init__(self):
        if not self.presets or not self.eps_grid or not self.p_grid:
            raise ValidationError("sweep grids must be nonempty")
        if any(e < 0 for e in self.eps_grid):
            raise ValidationError("perturbation sizes must be nonnegative")
        if any(p < 1 for p in self.p_grid):
            raise ValidationError("Schatten exponents must be >= 1")
        if self.seeds_per_cell <= 0 or self.dim <= 0:
            raise ValidationError("seeds per cell and dimension must be positive")


@dataclass(frozen=True)
class SweepRow:
    preset: str
    seed: int
    p: float
    dim: int
    epsilon_in: float
    delta: float | None
    epsilon_out: float | None
    cone_gap: float | None
    runtime_ms: float | None
    error: str = ""


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _worker_count() -> int:
    env = os.environ.get(THREADS_ENV, "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return min(4, os.cpu_count() or 1)


def run_sweep(config: SweepConfig, graphs=None) -> list[SweepRow]:
    """Execute every cell of the grid; one row per (preset, eps, p, seed).

    `graphs` maps preset names to GraphOfGroups; by default names are
    resolved through the preset registry.
    """
    from .presets import graph_preset
    if graphs is None:
        graphs = {name: graph_preset(name) for name in config.presets}

    contexts = {}
    lambdas = {}
    for name in config.presets:
        for p in config.p_grid:
            ctx = CorrectionContext.build(graphs[name], p=p, seed=config.master_seed)
            contexts[(name, p)] = ctx
            if config.lam_blocks is not None:
                from .cones import MultiplicityVector
                lambdas[(name, p)] = MultiplicityVector("vertex", config.lam_blocks)
            else:
                lambdas[(name, p)] = uniform_lambda(ctx, config.dim)

    cells = []
    for pi, name in enumerate(config.presets):
        for ei, eps in enumerate(config.eps_grid):
            for qi, p in enumerate(config.p_grid):
                for si in range(config.seeds_per_cell):
                    cells.append((pi, ei, qi, si, name, eps, p))

    def run_cell(cell) -> SweepRow:
        pi, ei, qi, si, name, eps, p = cell
        ctx = contexts[(name, p)]
        rng = derived_generator(config.master_seed, pi, ei, qi, si)
        try:
            base = realize(lambdas[(name, p)], ctx, seed=rng)
            inst = perturb(base, ctx.gog, eps, mode=config.mode, rng=rng)
            tic = time.perf_counter()
            _, report = stabilize(inst, ctx, seed=rng, guard=config.guard)
            runtime = (time.perf_counter() - tic) * 1e3
            return SweepRow(preset=name, seed=si, p=p, dim=report.dim,
                            epsilon_in=eps, delta=report.delta,
                            epsilon_out=report.epsilon,
                            cone_gap=float(report.cone_gap), runtime_ms=runtime)
        except RepStabError as exc:
            return SweepRow(preset=name, seed=si, p=p, dim=config.dim,
                            epsilon_in=eps, delta=None, epsilon_out=None,
                            cone_gap=None, runtime_ms=None,
                            error=f"{type(exc).__name__}: {exc}")

    workers = _worker_count()
    if workers == 1:
        results = [run_cell(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_cell, cells))
    return results


def write_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([row.preset, row.seed, _fmt(row.p), row.dim,
                             _fmt(row.epsilon_in), _fmt(row.delta),
                             _fmt(row.epsilon_out), _fmt(row.cone_gap),
                             _fmt(row.runtime_ms), row.error])
