"""Temperature selection: hit a target average length, sweep, or go cold.

The expected path length of the delta-pinned bridge is strictly increasing
in temperature (its T-derivative is Var/T^2), ranging from the minimal
feasible length at T -> 0 to the plain average over the admissible path
family at T -> infinity.  Calibration inverts that map by bisection on
log T; the endpoints are reported as explicit symbolic outcomes, never as
sentinel floats.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bridge import BridgeSolution, SolverConfig, as_marginal, path_probability, \
    solve_schrodinger
from .errors import ConvergenceError, InfeasibleBudgetError, InfeasibleError, \
    NetbridgeError
from .graph import PATH_CAP, DirectedGraph, Path, count_feasible_paths, \
    enumerate_feasible_paths, path_length
from .metrics import PathMeasure, average_path_length, entropy
from .oracle import measure_from_bridge
from .prior import boltzmann_prior

BRACKET_START = (1e-2, 1e2)
BRACKET_LIMIT = (1e-6, 1e6)
VARIANCE_ENUM_CAP = 100_000


class TemperatureLimit(enum.Enum):
    """Symbolic endpoints of the temperature axis."""

    ZERO = "zero"
    INFINITY = "infinity"


@dataclass(frozen=True)
class LengthBudget:
    """A target average path length, optionally annotated with its feasible range."""

    value: float
    bounds: tuple[float, float] | None = None

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError(f"budget must be finite, got {self.value}")


@dataclass(frozen=True)
class CalibrationResult:
    """Outcome of inverting the expected-length map.

    `temperature` is a positive float for interior solutions or a
    TemperatureLimit when the budget sits on (or beyond reach of) an end of
    the attainable range.
    """

    temperature: float | TemperatureLimit
    achieved_length: float
    bounds: tuple[float, float] | None
    iterations: int

    @property
    def at_bound(self) -> bool:
        return isinstance(self.temperature, TemperatureLimit)


@dataclass(frozen=True)
class SweepRow:
    """One temperature of a sweep; numeric fields are NaN when `error` is set."""

    temperature: float
    average_length: float
    entropy: float
    variance: float
    path_masses: dict[Path, float] = field(default_factory=dict)
    marginal_flow: np.ndarray | None = None
    error: str | None = None


def expected_length_at(g: DirectedGraph, nu0, nuN, N: int, T: float,
                       config: SolverConfig | None = None) -> float:
    """Average path length of the bridge at temperature T."""
    sol = solve_schrodinger(boltzmann_prior(g, T, N), nu0, nuN, config)
    return average_path_length(sol, g)


def length_variance(sol: BridgeSolution, g: DirectedGraph,
                    enumeration_cap: int = VARIANCE_ENUM_CAP) -> float:
    """Variance of the total path length under a solved bridge.

    Uses direct enumeration up to `enumeration_cap` paths, otherwise an
    exact forward second-moment recursion over the chain.
    """
    sources = [int(i) + 1 for i in np.flatnonzero(sol.marginals[0] > 0)]
    total_paths = sum(count_feasible_paths(g, sol.N, source=s) for s in sources)
    if total_paths <= enumeration_cap:
        m0 = m1 = m2 = 0.0
        for s in sources:
            for p in enumerate_feasible_paths(g, sol.N, source=s):
                w = path_probability(sol, p)
                if w == 0.0:
                    continue
                l = path_length(g, p)
                m0 += w
                m1 += w * l
                m2 += w * l * l
        if m0 <= 0.0:
            return 0.0
        mean = m1 / m0
        return max(m2 / m0 - mean * mean, 0.0)
    return _variance_by_recursion(sol, g)


def _variance_by_recursion(sol: BridgeSolution, g: DirectedGraph) -> float:
    # per-node accumulators: occupation w, E[L; X_t=i] a, E[L^2; X_t=i] b
    L = g.length_matrix
    w = sol.marginals[0].copy()
    a = np.zeros(sol.n)
    b = np.zeros(sol.n)
    for t in range(sol.N):
        P = sol.transitions[t]
        step = np.where(P > 0.0, np.where(np.isfinite(L), L, 0.0), 0.0)
        w_next = w @ P
        a_next = a @ P + (w[:, None] * P * step).sum(axis=0)
        b_next = (b @ P + 2.0 * (a[:, None] * P * step).sum(axis=0)
                  + (w[:, None] * P * step * step).sum(axis=0))
        w, a, b = w_next, a_next, b_next
    total = w.sum()
    if total <= 0.0:
        return 0.0
    mean = a.sum() / total
    return max(b.sum() / total - mean * mean, 0.0)


def _delta_family_lengths(g: DirectedGraph, nu0: np.ndarray, nuN: np.ndarray,
                          N: int) -> list[float] | None:
    """Sorted path lengths of the admissible family for a delta-pinned pair."""
    s0 = np.flatnonzero(nu0 > 0)
    sN = np.flatnonzero(nuN > 0)
    if len(s0) != 1 or len(sN) != 1:
        return None
    paths = enumerate_feasible_paths(g, N, source=int(s0[0]) + 1,
                                     target=int(sN[0]) + 1, cap=PATH_CAP)
    if not paths:
        raise InfeasibleError(
            f"no {N}-step path from node {int(s0[0]) + 1} to node {int(sN[0]) + 1}"
        )
    return sorted(path_length(g, p) for p in paths)


def calibrate_temperature(g: DirectedGraph, nu0, nuN, N: int, budget,
                          tol: float = 1e-8,
                          config: SolverConfig | None = None) -> CalibrationResult:
    """Find the temperature whose bridge attains a target average length.

    For delta-pinned marginals the attainable range is [minimal feasible
    length, plain mean over the admissible family]; budgets below it raise
    InfeasibleBudgetError, budgets at or above the mean return the symbolic
    infinite-temperature (uniform) outcome, and a budget equal to the
    minimum returns the symbolic zero-temperature outcome.  A family whose
    paths all share one length admits no interior solution and is rejected.

    Interior solutions come from bisection on log T, starting on the bracket
    [1e-2, 1e2] and doubling the exponent range up to [1e-6, 1e6] before an
    end is declared out of reach.
    """
    if not (tol > 0):
        raise ValueError(f"tol must be positive, got {tol}")
    target = budget.value if isinstance(budget, LengthBudget) else float(budget)
    if not np.isfinite(target):
        raise ValueError(f"budget must be finite, got {target}")
    nu0 = as_marginal(nu0, g.n)
    nuN = as_marginal(nuN, g.n)

    bounds = None
    lengths = _delta_family_lengths(g, nu0, nuN, N)
    if lengths is not None:
        lmin, lmax = lengths[0], lengths[-1]
        mean = float(np.mean(lengths))
        bounds = (lmin, mean)
        if lmax - lmin <= 1e-12 * max(1.0, abs(lmax)):
            raise InfeasibleError(
                "every admissible path has the same length; the expected "
                "length does not depend on temperature", )
        if target < lmin - 1e-12:
            raise InfeasibleBudgetError(
                f"budget {target} is below the minimal feasible length {lmin}",
                bounds=bounds,
            )
        if abs(target - lmin) <= 1e-12:
            return CalibrationResult(TemperatureLimit.ZERO, lmin, bounds, 0)
        if target >= mean - 1e-12:
            return CalibrationResult(TemperatureLimit.INFINITY, mean, bounds, 0)

    def probe(T: float) -> float | None:
        try:
            return expected_length_at(g, nu0, nuN, N, T, config)
        except (ConvergenceError, InfeasibleError):
            return None  # numeric breakdown at an extreme temperature

    lo, hi = BRACKET_START
    e_lo = probe(lo)
    while (e_lo is None or e_lo > target) and lo > BRACKET_LIMIT[0] * 1.0001:
        lo = max(lo * lo, BRACKET_LIMIT[0])  # double the exponent
        e_lo = probe(lo)
    e_hi = probe(hi)
    while (e_hi is None or e_hi < target) and hi < BRACKET_LIMIT[1] * 0.9999:
        hi = min(hi * hi, BRACKET_LIMIT[1])
        e_hi = probe(hi)

    if e_lo is None and e_hi is None:
        raise ConvergenceError("expected length could not be evaluated anywhere "
                               "on the temperature bracket")
    if e_lo is None or e_lo > target:
        achieved = bounds[0] if bounds else (e_lo if e_lo is not None else float("nan"))
        return CalibrationResult(TemperatureLimit.ZERO, achieved, bounds, 0)
    if e_hi is None or e_hi < target:
        achieved = bounds[1] if bounds else (e_hi if e_hi is not None else float("nan"))
        return CalibrationResult(TemperatureLimit.INFINITY, achieved, bounds, 0)

    iterations = 0
    mid, e_mid = lo, e_lo
    for iterations in range(1, 201):
        mid = float(np.sqrt(lo * hi))
        e_mid = probe(mid)
        if e_mid is None:
            raise ConvergenceError(f"expected length failed to evaluate at T={mid}")
        if abs(e_mid - target) <= 0.25 * tol:
            break
        if e_mid < target:
            lo = mid
        else:
            hi = mid
        if hi / lo <= 1.0 + 1e-15:
            break
    if abs(e_mid - target) > tol:
        raise ConvergenceError(
            f"bisection stalled: best |L - budget| = {abs(e_mid - target):.3e}",
            residual=abs(e_mid - target), iterations=iterations,
        )
    return CalibrationResult(float(mid), float(e_mid), bounds, iterations)


def _sweep_workers(requested: int | None, rows: int) -> int:
    limit = os.cpu_count() or 1
    env = os.environ.get("NETBRIDGE_THREADS")
    if env is not None:
        try:
            limit = min(limit, max(1, int(env)))
        except ValueError:
            raise ValueError(f"NETBRIDGE_THREADS must be an integer, got {env!r}")
    if requested is not None:
        limit = min(limit, max(1, requested))
    return max(1, min(limit, rows))


def temperature_sweep(g: DirectedGraph, nu0, nuN, N: int, temperatures,
                      tracked_paths=None, config: SolverConfig | None = None,
                      max_workers: int | None = None) -> list[SweepRow]:
    """Solve the bridge on a grid of temperatures.

    Rows come back ordered by temperature; a failure at one temperature is
    recorded on its row instead of aborting the sweep.  Row evaluation may
    run on a thread pool, capped by the NETBRIDGE_THREADS environment
    variable.
    """
    temps = sorted(float(T) for T in temperatures)
    if not temps:
        raise ValueError("temperature grid is empty")
    for T in temps:
        if not (T > 0) or not np.isfinite(T):
            raise ValueError(f"temperatures must be positive and finite, got {T}")
    tracked = [tuple(int(x) for x in p) for p in (tracked_paths or [])]
    nu0 = as_marginal(nu0, g.n)
    nuN = as_marginal(nuN, g.n)

    def run(T: float) -> SweepRow:
        try:
            sol = solve_schrodinger(boltzmann_prior(g, T, N), nu0, nuN, config)
            masses = {p: path_probability(sol, p) for p in tracked}
            return SweepRow(
                temperature=T,
                average_length=average_path_length(sol, g),
                entropy=entropy(sol),
                variance=length_variance(sol, g),
                path_masses=masses,
                marginal_flow=sol.marginals,
            )
        except NetbridgeError as exc:
            nan = float("nan")
            return SweepRow(T, nan, nan, nan, {p: nan for p in tracked},
                            error=f"{type(exc).__name__}: {exc}")

    workers = _sweep_workers(max_workers, len(temps))
    if workers <= 1:
        return [run(T) for T in temps]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, temps))


@dataclass(frozen=True)
class TransportApproximation:
    """Near-zero-temperature bridge concentrating on minimal-length routes."""

    temperature: float
    measure: PathMeasure
    minimal_length: float
    minimal_paths: tuple[Path, ...]
    minimal_mass: float


def omt_approximation(g: DirectedGraph, nu0, nuN, N: int,
                      T_small: float | None = None,
                      config: SolverConfig | None = None,
                      cap: int = PATH_CAP) -> TransportApproximation:
    """Approximate the optimal-transport limit by solving at a small temperature.

    The default temperature is 0.05 times the smallest positive edge length.
    Reports the minimal-length path set and how much bridge mass it carries;
    as T decreases that fraction approaches 1.
    """
    nu0 = as_marginal(nu0, g.n)
    nuN = as_marginal(nuN, g.n)
    if T_small is None:
        positive = [w for _, _, w in g.edges if w > 0]
        if not positive:
            raise InfeasibleError("all edges have zero length; the transport "
                                  "limit is degenerate")
        T_small = 0.05 * min(positive)
    T_small = float(T_small)
    if not (T_small > 0):
        raise ValueError(f"T_small must be positive, got {T_small}")
    sol = solve_schrodinger(boltzmann_prior(g, T_small, N), nu0, nuN, config)
    measure = measure_from_bridge(sol, g, cap=cap)
    lengths = {p: path_length(g, p) for p in measure.masses}
    lmin = min(lengths.values())
    minimal = tuple(sorted(p for p, l in lengths.items() if l <= lmin + 1e-9))
    mass = sum(measure.masses[p] for p in minimal) / measure.total()
    return TransportApproximation(
        temperature=T_small, measure=measure, minimal_length=lmin,
        minimal_paths=minimal, minimal_mass=float(mass),
    )
