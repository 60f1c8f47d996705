"""Benchmark harness: kernel accuracy against the oracles, timings and
product counts, and convergence ladders for the Riccati integrators.

Reports are written as CSV with a fixed column order and mirrored as JSON.
"""

import csv
import io
import json
import math
import statistics
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from .densecore import DEFAULT_SEED, relative_error
from .gallery import (CASE_NAMES, fdm_advection_diffusion, gallery_case, laplacian_1d,
                      load_vector_indicator, random_symmetric)
from .integrators import DREProblem, integrate
from .kernel import phi_lyap
from .oracle import MAX_ORACLE_N, phi_reference, phi_reference_spectral

__all__ = [
    "CSV_COLUMNS",
    "BenchRow",
    "RunReport",
    "median_time",
    "bench_phi",
    "run_phi_bench",
    "run_integrate_ladder",
    "convergence_slope",
    "build_case",
    "dre_problem",
    "parse_range",
    "parse_ladder",
]

CSV_COLUMNS = ("case", "l_or_scheme", "error", "products", "m", "s", "wall_time", "oracle")
TOLERANCE = 2.0**-53
REPEATS = 5


@dataclass
class BenchRow:
    case: str
    l_or_scheme: str
    error: float | None
    products: int | None
    m: int | None
    s: int | None
    wall_time: float
    oracle: str

    def csv_fields(self):
        def num(v, fmt):
            return "" if v is None else format(v, fmt)
        return [self.case, self.l_or_scheme, num(self.error, ".6e"), num(self.products, "d"),
                num(self.m, "d"), num(self.s, "d"), num(self.wall_time, ".6e"), self.oracle]


@dataclass
class RunReport:
    rows: list[BenchRow]
    metadata: dict = field(default_factory=dict)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.csv_fields())
        return buf.getvalue()

    def json_text(self) -> str:
        return json.dumps({"metadata": self.metadata,
                           "columns": list(CSV_COLUMNS),
                           "rows": [asdict(r) for r in self.rows]}, indent=2)

    def write(self, stem) -> tuple[str, str]:
        """Write ``<stem>.csv`` and ``<stem>.json``; returns both paths."""
        stem = str(stem)
        if stem.endswith(".csv"):
            stem = stem[:-4]
        paths = (stem + ".csv", stem + ".json")
        with open(paths[0], "w") as fh:
            fh.write(self.csv_text())
        with open(paths[1], "w") as fh:
            fh.write(self.json_text())
        return paths

    @property
    def errors(self):
        return [r.error for r in self.rows]


def _metadata(seed, **extra):
    from . import __version__
    meta = {"seed": seed, "tolerance": TOLERANCE,
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "version": __version__}
    meta.update(extra)
    return meta


def median_time(fn, repeats: int = REPEATS, warmup: int = 1):
    """Median wall time of `repeats` calls after `warmup` discarded calls.
    Returns ``(median_seconds, last_result)``."""
    out = None
    for _ in range(warmup):
        out = fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def _reference(A, Q, l):
    if A.shape[0] <= MAX_ORACLE_N:
        return phi_reference(A, Q, l), "kron"
    if np.array_equal(A, A.T):
        return phi_reference_spectral(A, Q, l), "spectral"
    return None, "none"


def bench_phi(name, A, Q, l, *, oracle=True, repeats=REPEATS) -> BenchRow:
    """One row: time ``phi_lyap(A, Q, l)`` and compare with a reference."""
    wall, res = median_time(lambda: phi_lyap(A, Q, l), repeats)
    err, tag = None, "off"
    if oracle:
        ref, tag = _reference(A, Q, l)
        if ref is None:
            warnings.warn(f"{name}, l={l}: oracle scale exceeded, row has no error", stacklevel=2)
        else:
            err = relative_error(ref, res.top)
    return BenchRow(name, str(l), err, res.products_used, res.params.m, res.params.s, wall, tag)


def build_case(suite, name, n, seed, scale=1.0):
    """``(A, Q)`` for a suite member. The ``laplacian1d`` suite is the single
    matrix ``scale * tridiag(1, -2, 1)`` with a seeded random symmetric Q."""
    if suite == "laplacian1d":
        return laplacian_1d(n, scale), random_symmetric(n, seed)
    case = gallery_case(name, n, seed)
    return case.A, case.Q


def _task(args):
    suite, name, n, seed, scale, l, oracle, repeats = args
    A, Q = build_case(suite, name, n, seed, scale)
    return bench_phi(name, A, Q, l, oracle=oracle, repeats=repeats)


def run_phi_bench(suite="structured", n=8, ls=range(1, 9), *, seed=DEFAULT_SEED,
                  oracle=True, scale=1.0, cases=None, repeats=REPEATS,
                  workers=1) -> RunReport:
    """Accuracy and cost table over a suite.

    Rows are sorted by ``(case, l)`` whatever order the workers finish in.
    """
    if suite == "structured":
        names = list(cases) if cases else list(CASE_NAMES)
    elif suite == "laplacian1d":
        names = ["laplacian1d"]
    else:
        raise ValueError(f"unknown suite {suite!r}")
    tasks = [(suite, name, n, seed, scale, l, oracle, repeats) for name in names for l in ls]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_task, tasks))
    else:
        rows = [_task(t) for t in tasks]
    rows.sort(key=lambda r: (r.case, int(r.l_or_scheme)))
    return RunReport(rows, _metadata(seed, suite=suite, n=n, scale=scale, repeats=repeats))


def convergence_slope(steps, errors) -> float:
    """Least-squares slope of ``log(error)`` against ``log(h)``."""
    h = 1.0 / np.asarray(steps, dtype=float)
    return float(np.polyfit(np.log(h), np.log(np.asarray(errors, dtype=float)), 1)[0])


def dre_problem(n0=10, axis="x", b_band=(0.1, 0.3), c_band=(0.7, 0.9)) -> DREProblem:
    """Riccati problem on the advection-diffusion grid with indicator inputs
    and outputs and ``X(0) = I``."""
    A = fdm_advection_diffusion(n0)
    B = load_vector_indicator(n0, axis, *b_band)
    C = load_vector_indicator(n0, axis, *c_band)
    return DREProblem(A, B, C, np.eye(n0 * n0))


def run_integrate_ladder(scheme, steps_list, *, t_end=0.05, n0=10, ref_steps=8192,
                         axis="x", b_band=(0.1, 0.3), c_band=(0.7, 0.9),
                         reference=None, seed=DEFAULT_SEED) -> RunReport:
    """Final-state errors of `scheme` for each step count against an
    ``exprb3`` run with `ref_steps` steps. ``wall_time`` is per step."""
    problem = dre_problem(n0, axis, b_band, c_band)
    if reference is None:
        reference = integrate(problem, "exprb3", t_end / ref_steps, t_end, record=False).final
    rows = []
    for n in sorted(steps_list):
        t0 = time.perf_counter()
        X = integrate(problem, scheme, t_end / n, t_end, record=False).final
        wall = (time.perf_counter() - t0) / n
        rows.append(BenchRow(f"dre_n0={n0}", f"{scheme}/{n}", relative_error(reference, X),
                             None, None, None, wall, f"exprb3/{ref_steps}"))
    meta = _metadata(seed, scheme=scheme, n0=n0, t_end=t_end, ref_steps=ref_steps)
    if len(rows) > 1:
        meta["slope"] = convergence_slope(sorted(steps_list), [r.error for r in rows])
    return RunReport(rows, meta)


def parse_range(text: str) -> list[int]:
    """``"1..8"`` or ``"1,3,5"`` to a list of integers."""
    text = text.strip()
    if ".." in text:
        lo, hi = (int(t) for t in text.split("..", 1))
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(t) for t in text.split(",") if t.strip()]


def parse_ladder(text: str) -> list[int]:
    """``"16..512"`` is the doubling ladder 16, 32, ..., 512."""
    if ".." not in text:
        return parse_range(text)
    lo, hi = (int(t) for t in text.split("..", 1))
    if lo < 1 or hi < lo:
        raise ValueError(f"bad ladder {text!r}")
    k = int(math.log2(hi / lo) + 1e-9)
    return [lo * 2**i for i in range(k + 1)]
