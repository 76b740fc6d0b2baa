"""Schrodinger bridge solver: entropy-minimal path measures with pinned marginals.

Given a prior chain and endpoint distributions nu0, nuN, the solver finds
the Markov measure closest to the prior in relative entropy among all path
measures with those marginals.  The scheme alternates backward/forward
potential propagation with boundary corrections (iterative proportional
fitting); convergence is monitored in the Hilbert projective metric, which
is the natural scale-invariant contraction metric for this iteration.

Everything here works on the prior's stored (max-normalized) matrices: the
transition matrices and time marginals of the bridge are invariant under
per-step rescaling of the prior, so the scale factors never need to be
reapplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._numeric import hilbert_distance
from .errors import ConvergenceError, EnumerationCapError, InfeasibleError
from .graph import PATH_CAP, DirectedGraph, Path, enumerate_feasible_paths
from .prior import PriorChain, _scaled_product, chain_path_mass


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances for the fitting loop."""

    tol: float = 1e-12
    max_iter: int = 100_000

    def __post_init__(self):
        if not (self.tol > 0):
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass(frozen=True)
class BridgeSolution:
    """Solved bridge: potentials, transition matrices and time marginals.

    phi and phi_hat are (N+1) x n with phi[t] * phi_hat[t] = marginals[t];
    transitions[t] is row-stochastic on rows carrying marginal mass and zero
    elsewhere; marginals[0] equals nu0 exactly and marginals[N] matches nuN
    within `residual`.
    """

    phi: np.ndarray
    phi_hat: np.ndarray
    transitions: tuple[np.ndarray, ...]
    marginals: np.ndarray
    iterations: int
    residual: float

    @property
    def N(self) -> int:
        return len(self.transitions)

    @property
    def n(self) -> int:
        return self.marginals.shape[1]


def as_marginal(weights, n: int) -> np.ndarray:
    """Validate a distribution over nodes: length n, nonnegative, sums to 1."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise ValueError(f"marginal must have length {n}, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError("marginal entries must be finite and nonnegative")
    s = float(w.sum())
    if abs(s - 1.0) > 1e-12:
        raise ValueError(f"marginal must sum to 1 (got {s!r})")
    return w


def delta_marginal(n: int, node: int) -> np.ndarray:
    """Point mass at `node` (1-based)."""
    if not (1 <= node <= n):
        raise ValueError(f"node {node} out of range 1..{n}")
    w = np.zeros(n)
    w[node - 1] = 1.0
    return w


def _check_feasible(prior: PriorChain, supp0: np.ndarray, suppN: np.ndarray) -> None:
    # positivity of the N-step kernel is only needed between supported endpoints
    P, _ = _scaled_product(prior.matrices, (0.0,) * prior.N, prior.n)
    block = P[np.ix_(supp0, suppN)]
    if np.any(block == 0.0):
        bi, bj = np.argwhere(block == 0.0)[0]
        i = int(np.flatnonzero(supp0)[bi]) + 1
        j = int(np.flatnonzero(suppN)[bj]) + 1
        raise InfeasibleError(
            f"no {prior.N}-step route with positive prior mass from node {i} to node {j}"
        )


def solve_schrodinger(prior: PriorChain, nu0, nuN,
                      config: SolverConfig | None = None) -> BridgeSolution:
    """Solve the two-marginal problem over `prior`.

    Parameters
    ----------
    prior : PriorChain
        Reference chain; only its transition weights matter (the bridge is
        invariant under rescaling of mu0 and of each step matrix).
    nu0, nuN : array-like
        Prescribed initial and terminal node distributions.
    config : SolverConfig, optional
        Convergence tolerance (Hilbert-metric change of the terminal
        potential) and sweep cap.

    Raises
    ------
    InfeasibleError
        If some supported endpoint pair is not connected by an N-step route
        of positive prior mass.
    ConvergenceError
        If the sweep cap is reached, or potentials underflow.
    """
    cfg = config or SolverConfig()
    n = prior.n
    N = prior.N
    nu0 = as_marginal(nu0, n)
    nuN = as_marginal(nuN, n)

    if N == 0:
        if float(np.abs(nu0 - nuN).max()) > 1e-12:
            raise InfeasibleError("N=0 requires identical endpoint marginals")
        phi = np.ones((1, n))
        return BridgeSolution(
            phi=phi, phi_hat=nu0[None, :].copy(), transitions=(),
            marginals=nu0[None, :].copy(), iterations=0,
            residual=float(np.abs(nu0 - nuN).max()),
        )

    supp0 = nu0 > 0.0
    suppN = nuN > 0.0
    _check_feasible(prior, supp0, suppN)

    mats = prior.matrices
    phi = np.zeros((N + 1, n))
    phi_hat = np.zeros((N + 1, n))
    phi_N = np.ones(n)
    iterations = 0
    delta = float("inf")
    while True:
        iterations += 1
        phi[N] = phi_N
        for t in range(N - 1, -1, -1):
            phi[t] = mats[t] @ phi[t + 1]
        if np.any(phi[0][supp0] == 0.0):
            raise ConvergenceError(
                "source potential underflowed to zero on supported nodes; "
                "temperature is too low for this horizon",
                iterations=iterations,
            )
        phi_hat[0] = np.where(supp0, nu0 / np.where(supp0, phi[0], 1.0), 0.0)
        for t in range(N):
            phi_hat[t + 1] = mats[t].T @ phi_hat[t]
        if np.any(phi_hat[N][suppN] == 0.0):
            raise ConvergenceError(
                "terminal potential underflowed to zero on supported nodes",
                iterations=iterations,
            )
        phi_N_new = np.where(suppN, nuN / np.where(suppN, phi_hat[N], 1.0), 0.0)
        delta = hilbert_distance(phi_N_new, phi_N)
        if delta <= cfg.tol:
            break
        if iterations >= cfg.max_iter:
            raise ConvergenceError(
                f"fitting did not converge in {cfg.max_iter} sweeps "
                f"(last Hilbert-metric change {delta:.3e})",
                residual=delta, iterations=iterations,
            )
        phi_N = phi_N_new / phi_N_new.max()

    transitions = []
    for t in range(N):
        rows = phi[t] > 0.0
        P = np.zeros((n, n))
        P[rows] = mats[t][rows] * phi[t + 1][None, :] / phi[t][rows, None]
        transitions.append(P)
    marginals = phi * phi_hat
    residual = float(np.abs(marginals[N] - nuN).max())
    return BridgeSolution(
        phi=phi, phi_hat=phi_hat, transitions=tuple(transitions),
        marginals=marginals, iterations=iterations, residual=residual,
    )


def marginal_flow(sol: BridgeSolution) -> np.ndarray:
    """(N+1) x n node-occupation table of the bridge; each row sums to 1."""
    return sol.marginals.copy()


def path_probability(sol: BridgeSolution, p: Sequence[int]) -> float:
    """Mass of one path under the bridge: nu0(x0) times the transition entries."""
    p = tuple(p)
    if len(p) != sol.N + 1:
        raise ValueError(f"path has {len(p) - 1} steps, solution expects {sol.N}")
    n = sol.n
    for x in p:
        if not (1 <= x <= n):
            raise ValueError(f"node {x} out of range 1..{n}")
    prob = float(sol.marginals[0][p[0] - 1])
    for t, (a, b) in enumerate(zip(p[:-1], p[1:])):
        if prob == 0.0:
            return 0.0
        prob *= float(sol.transitions[t][a - 1, b - 1])
    return prob


def support_paths(prior: PriorChain, source: int | None = None,
                  target: int | None = None, cap: int = PATH_CAP) -> list[Path]:
    """All N-step paths with positive transition weight at every step.

    Like graph enumeration, but against the (possibly time-dependent)
    support of a prior chain; mu0 is ignored.
    """
    N = prior.N
    n = prior.n
    for name, x in (("source", source), ("target", target)):
        if x is not None and not (1 <= x <= n):
            raise ValueError(f"{name} node {x} out of range 1..{n}")
    ok = [np.zeros(n, dtype=bool) for _ in range(N + 1)]
    if target is None:
        ok[N][:] = True
    else:
        ok[N][target - 1] = True
    for t in range(N - 1, -1, -1):
        ok[t] = ((prior.matrices[t] > 0) & ok[t + 1]).any(axis=1)
    out: list[Path] = []
    stack: list[int] = []

    def visit(v: int, t: int):
        stack.append(v)
        if t == N:
            if len(out) >= cap:
                raise EnumerationCapError(f"more than {cap} feasible paths")
            out.append(tuple(stack))
        else:
            row = prior.matrices[t][v - 1]
            for w in range(1, n + 1):
                if row[w - 1] > 0 and ok[t + 1][w - 1]:
                    visit(w, t + 1)
        stack.pop()

    starts = range(1, n + 1) if source is None else [source]
    for s in starts:
        if ok[0][s - 1]:
            visit(s, 0)
    return out


def most_probable_paths(g: DirectedGraph, measure, source: int, target: int,
                        rel_tol: float = 1e-9) -> list[Path]:
    """Paths from source to target whose mass is within (1 - rel_tol) of the maximum.

    `measure` may be a BridgeSolution, a PriorChain, or anything with a
    `masses` mapping (a path measure).  Returns the argmax set in
    lexicographic order; an empty list if every candidate path has zero mass.
    """
    if isinstance(measure, BridgeSolution):
        paths = enumerate_feasible_paths(g, measure.N, source=source, target=target)
        masses = {p: path_probability(measure, p) for p in paths}
    elif isinstance(measure, PriorChain):
        paths = support_paths(measure, source=source, target=target)
        masses = {p: chain_path_mass(measure, p) for p in paths}
    elif hasattr(measure, "masses"):
        masses = {p: m for p, m in measure.masses.items()
                  if p[0] == source and p[-1] == target}
        paths = sorted(masses)
    else:
        raise TypeError(f"unsupported measure type: {type(measure).__name__}")
    if not paths:
        raise InfeasibleError(f"no path from node {source} to node {target}")
    top = max(masses.values())
    if top == 0.0:
        return []
    return [p for p in sorted(masses) if masses[p] >= (1.0 - rel_tol) * top]


def iterated_bridge_check(prior: PriorChain, first, second,
                          config: SolverConfig | None = None) -> float:
    """Max transition-matrix deviation between bridging over the prior directly
    and bridging over an intermediate bridge.

    `first` and `second` are (nu0, nuN) pairs.  The bridge of `second` over
    the bridge of `first` must coincide with the bridge of `second` over the
    original prior; returns the largest absolute entrywise difference.
    """
    nu0_1, nuN_1 = first
    nu0_2, nuN_2 = second
    sol_first = solve_schrodinger(prior, nu0_1, nuN_1, config)
    inner = PriorChain(matrices=sol_first.transitions, mu0=sol_first.marginals[0])
    direct = solve_schrodinger(prior, nu0_2, nuN_2, config)
    nested = solve_schrodinger(inner, nu0_2, nuN_2, config)
    dev = 0.0
    for A, B in zip(direct.transitions, nested.transitions):
        dev = max(dev, float(np.abs(A - B).max()))
    return dev


def restriction_ratio_check(prior: PriorChain, sol: BridgeSolution,
                            source: int, target: int) -> float:
    """Relative spread of the bridge/prior mass ratio over source->target paths.

    For a bridge pinned by delta marginals the ratio is the same for every
    path (it telescopes to a function of the endpoints only), so the spread
    (max - min)/max should vanish up to solver tolerance.
    """
    paths = support_paths(prior, source=source, target=target)
    ratios = []
    for p in paths:
        q = chain_path_mass(prior, p)
        if q > 0.0:
            ratios.append(path_probability(sol, p) / q)
    if len(ratios) < 2:
        raise InfeasibleError(
            f"need at least two {source}->{target} paths with positive prior mass"
        )
    top = max(ratios)
    if top == 0.0:
        return 0.0
    return (top - min(ratios)) / top
