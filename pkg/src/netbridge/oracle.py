"""Brute-force reference solutions used to cross-check the main solver.

The oracle works on the n x n endpoint kernel instead of the (N+1)-stage
potential recursion: the bridge factorizes into endpoint scalings of the
prior, so alternating row/column scaling of the kernel followed by
distributing each endpoint mass over the conditioned prior paths gives the
exact answer by a deliberately different route.  Everything here enumerates
paths and refuses oversized instances rather than sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numeric import logsumexp
from .bridge import BridgeSolution, SolverConfig, as_marginal, delta_marginal, \
    path_probability, solve_schrodinger, support_paths
from .errors import ConvergenceError, InfeasibleError
from .graph import PATH_CAP, DirectedGraph, Path, enumerate_feasible_paths, path_length
from .metrics import PathMeasure
from .prior import PriorChain, check_temperature, ruelle_bowen_chain

ORACLE_TOL = 1e-13
ORACLE_MAX_SWEEPS = 1_000_000


def _log_transition_product(prior: PriorChain, p: Path) -> float:
    """log of prod_t M(t)[x_t, x_{t+1}] (true scale, mu0 excluded); -inf if infeasible."""
    total = sum(prior.log_scales)
    for t, (a, b) in enumerate(zip(p[:-1], p[1:])):
        m = prior.matrices[t][a - 1, b - 1]
        if m == 0.0:
            return float("-inf")
        total += float(np.log(m))
    return total


@dataclass(frozen=True)
class EndpointKernel:
    """n x n matrix G with G[i, j] = total transition-product mass of i -> j paths."""

    N: int
    matrix: np.ndarray


def endpoint_kernel(prior: PriorChain, cap: int = PATH_CAP) -> EndpointKernel:
    """Aggregate the prior over interior nodes, keeping endpoints only.

    Computed twice on purpose: once by enumerating paths over the prior's
    support and once as the ordered matrix product of the step matrices.
    The two routes must agree to 1e-12; disagreement means a bookkeeping
    bug, so it is asserted rather than returned.
    """
    n = prior.n
    by_enum = np.zeros((n, n))
    for p in support_paths(prior, cap=cap):
        by_enum[p[0] - 1, p[-1] - 1] += np.exp(_log_transition_product(prior, p))
    prod = np.eye(n)
    for t in range(prior.N):
        prod = prod @ prior.matrix(t)
    gap = float(np.abs(by_enum - prod).max())
    scale = max(1.0, float(np.abs(prod).max()))
    assert gap <= 1e-12 * scale, f"endpoint kernel routes disagree by {gap}"
    return EndpointKernel(N=prior.N, matrix=prod)


def oracle_bridge(prior: PriorChain, g: DirectedGraph, nu0, nuN,
                  tol: float = ORACLE_TOL, max_sweeps: int = ORACLE_MAX_SWEEPS,
                  cap: int = PATH_CAP) -> PathMeasure:
    """Solve the two-marginal problem by scaling the endpoint kernel.

    Finds positive diagonal scalings a, b with diag(a) G diag(b) having row
    sums nu0 and column sums nuN, then spreads each endpoint mass over the
    conditioned prior paths.  Exact or absent: instances whose enumeration
    exceeds `cap` are refused.
    """
    n = prior.n
    nu0 = as_marginal(nu0, n)
    nuN = as_marginal(nuN, n)
    if prior.N == 0:
        if float(np.abs(nu0 - nuN).max()) > 1e-12:
            raise InfeasibleError("N=0 requires identical endpoint marginals")
        masses = {(i + 1,): float(nu0[i]) for i in np.flatnonzero(nu0 > 0)}
        return PathMeasure(0, masses)
    G = endpoint_kernel(prior, cap=cap).matrix
    supp0 = nu0 > 0.0
    suppN = nuN > 0.0
    block = G[np.ix_(supp0, suppN)]
    if np.any(block == 0.0):
        bi, bj = np.argwhere(block == 0.0)[0]
        i = int(np.flatnonzero(supp0)[bi]) + 1
        j = int(np.flatnonzero(suppN)[bj]) + 1
        raise InfeasibleError(
            f"no {prior.N}-step route with positive prior mass from node {i} to node {j}"
        )
    a = np.zeros(n)
    b = np.where(suppN, 1.0, 0.0)
    for _ in range(max_sweeps):
        Gb = G @ b
        a = np.where(supp0, nu0 / np.where(supp0, Gb, 1.0), 0.0)
        Ga = G.T @ a
        b = np.where(suppN, nuN / np.where(suppN, Ga, 1.0), 0.0)
        row_err = float(np.abs(a * (G @ b) - nu0).max())
        col_err = float(np.abs(b * (G.T @ a) - nuN).max())
        if max(row_err, col_err) <= tol:
            break
    else:
        raise ConvergenceError(
            f"kernel scaling did not converge in {max_sweeps} sweeps",
            residual=max(row_err, col_err), iterations=max_sweeps,
        )
    masses: dict[Path, float] = {}
    for p in support_paths(prior, cap=cap):
        if a[p[0] - 1] == 0.0 or b[p[-1] - 1] == 0.0:
            continue
        log_m = _log_transition_product(prior, p)
        mass = a[p[0] - 1] * b[p[-1] - 1] * float(np.exp(log_m))
        if mass > 0.0:
            masses[p] = mass
    return PathMeasure(prior.N, masses)


def conditioned_boltzmann(g: DirectedGraph, T: float, N: int,
                          source: int, target: int,
                          cap: int = PATH_CAP) -> PathMeasure:
    """Boltzmann measure exp(-l/T)/Z restricted to source -> target N-step paths.

    This is the closed-form answer for a delta-pinned bridge over the
    Boltzmann prior; normalization happens in log space.
    """
    check_temperature(T)
    paths = enumerate_feasible_paths(g, N, source=source, target=target, cap=cap)
    if not paths:
        raise InfeasibleError(f"no {N}-step path from node {source} to node {target}")
    logw = np.array([-path_length(g, p) / T for p in paths])
    logz = logsumexp(logw)
    return PathMeasure(N, {p: float(np.exp(lw - logz)) for p, lw in zip(paths, logw)})


def boltzmann_path_measure(g: DirectedGraph, T: float, N: int,
                           cap: int = PATH_CAP) -> PathMeasure:
    """Normalized Boltzmann measure over all feasible N-step paths (any endpoints)."""
    check_temperature(T)
    paths = enumerate_feasible_paths(g, N, cap=cap)
    if not paths:
        raise InfeasibleError(f"no feasible {N}-step paths")
    logw = np.array([-path_length(g, p) / T for p in paths])
    logz = logsumexp(logw)
    return PathMeasure(N, {p: float(np.exp(lw - logz)) for p, lw in zip(paths, logw)})


def measure_from_bridge(sol: BridgeSolution, g: DirectedGraph,
                        cap: int = PATH_CAP) -> PathMeasure:
    """Expand a solved bridge into its explicit path measure by enumeration."""
    masses: dict[Path, float] = {}
    for i in np.flatnonzero(sol.marginals[0] > 0):
        for p in enumerate_feasible_paths(g, sol.N, source=int(i) + 1, cap=cap):
            m = path_probability(sol, p)
            if m > 0.0:
                masses[p] = m
    return PathMeasure(sol.N, masses)


def measure_from_chain(prior: PriorChain, cap: int = PATH_CAP) -> PathMeasure:
    """Expand a prior chain into its explicit (possibly unnormalized) path measure."""
    from .prior import chain_path_mass
    masses: dict[Path, float] = {}
    for p in support_paths(prior, cap=cap):
        m = chain_path_mass(prior, p)
        if m > 0.0:
            masses[p] = m
    return PathMeasure(prior.N, masses)


@dataclass(frozen=True)
class EqualLengthReport:
    """Equal-mass check for equal-length paths under the stationary-chain bridge."""

    pairs_checked: int
    max_spread: float
    minimal_group_dominates: bool
    max_dominance_gap: float


def verify_equal_length_masses(g: DirectedGraph, T: float, N: int,
                               config: SolverConfig | None = None,
                               cap: int = PATH_CAP) -> EqualLengthReport:
    """Bridge every connected delta pair over the stationary chain and check
    that paths of equal length carry equal mass.

    Groups source -> target path masses by total length; reports the largest
    within-group relative spread and whether the minimal-length group
    dominates every longer group's masses for each pair.
    """
    prior = ruelle_bowen_chain(g, T, N)
    cfg = config or SolverConfig()
    A = g.adjacency
    reach = np.eye(g.n, dtype=bool)
    for _ in range(N):
        reach = (reach.astype(np.uint8) @ A.astype(np.uint8)) > 0
    pairs = 0
    max_spread = 0.0
    dominates = True
    max_gap = 0.0
    for i in range(1, g.n + 1):
        for j in range(1, g.n + 1):
            if not reach[i - 1, j - 1]:
                continue
            pairs += 1
            sol = solve_schrodinger(prior, delta_marginal(g.n, i),
                                    delta_marginal(g.n, j), cfg)
            groups: dict[float, list[float]] = {}
            for p in enumerate_feasible_paths(g, N, source=i, target=j, cap=cap):
                groups.setdefault(round(path_length(g, p), 9), []).append(
                    path_probability(sol, p))
            for members in groups.values():
                top = max(members)
                if top > 0.0:
                    max_spread = max(max_spread, (top - min(members)) / top)
            lmin = min(groups)
            floor = min(groups[lmin])
            for l, members in groups.items():
                if l == lmin:
                    continue
                gap = max(members) - floor
                if gap > 1e-9 * max(floor, 1e-300):
                    dominates = False
                max_gap = max(max_gap, gap)
    return EqualLengthReport(
        pairs_checked=pairs, max_spread=max_spread,
        minimal_group_dominates=dominates, max_dominance_gap=max_gap,
    )
