"""Reference path measures: Boltzmann chains and the Ruelle-Bowen chain.

A prior is a Markov chain on the graph's nodes given by an initial
distribution and one transition-weight matrix per step.  Matrices are kept
max-entry-normalized with a separate log scale factor so that very low
temperatures (entries like exp(-40) and below) stay representable; every
consumer that needs true masses works in log space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._numeric import hilbert_distance
from .errors import ConvergenceError, InfeasibleError, PrimitivityError
from .graph import DirectedGraph

PERRON_TOL = 1e-12
PERRON_MAX_ITER = 100_000


@dataclass(frozen=True)
class PriorChain:
    """Markov reference measure on N-step paths.

    True step weights are exp(log_scales[t]) * matrices[t]; the stored
    matrices carry the shape of the weights, the scales carry the magnitude.
    mu0 must be nonnegative with positive total mass.  (Strict positivity is
    the standard assumption but is deliberately not enforced: the invariant
    measure of the Ruelle-Bowen chain on a graph with an absorbing node is a
    point mass, and none of the bridge recursions divide by mu0.)
    """

    matrices: tuple[np.ndarray, ...]
    mu0: np.ndarray
    log_scales: tuple[float, ...] = ()

    def __post_init__(self):
        mats = tuple(np.asarray(M, dtype=float) for M in self.matrices)
        mu0_arr = np.asarray(self.mu0, dtype=float)
        n = mats[0].shape[0] if mats else mu0_arr.shape[0]
        for t, M in enumerate(mats):
            if M.shape != (n, n):
                raise ValueError(f"matrices[{t}] must be {n}x{n}, got {M.shape}")
            if not np.all(np.isfinite(M)) or np.any(M < 0):
                raise ValueError(f"matrices[{t}] must be finite and nonnegative")
        mu0 = mu0_arr
        if mu0.shape != (n,):
            raise ValueError(f"mu0 must have length {n}, got shape {mu0.shape}")
        if np.any(mu0 < 0) or not np.all(np.isfinite(mu0)) or mu0.sum() <= 0:
            raise ValueError("mu0 must be nonnegative with positive total mass")
        scales = tuple(float(s) for s in self.log_scales) or (0.0,) * len(mats)
        if len(scales) != len(mats):
            raise ValueError("log_scales must match the number of matrices")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "mu0", mu0)
        object.__setattr__(self, "log_scales", scales)

    @property
    def N(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0] if self.matrices else self.mu0.shape[0]

    def matrix(self, t: int) -> np.ndarray:
        """True (unscaled) transition-weight matrix for step t."""
        return np.exp(self.log_scales[t]) * self.matrices[t]


@dataclass(frozen=True)
class PerronTriple:
    """Dominant eigenvalue with left/right eigenvectors, sum(u * v) = 1."""

    lam: float
    u: np.ndarray
    v: np.ndarray
    iterations: int = 0
    primitive: bool | None = None

    def __post_init__(self):
        if not (self.lam > 0):
            raise ValueError(f"dominant eigenvalue must be positive, got {self.lam}")


def check_temperature(T: float) -> float:
    T = float(T)
    if not np.isfinite(T) or T <= 0:
        raise ValueError(f"temperature must be a positive finite number, got {T}")
    return T


def _boltzmann_matrix(g: DirectedGraph, T: float) -> tuple[np.ndarray, float]:
    """Edge weights exp(-l_ij / T), max-entry-normalized; returns (stored, log_scale)."""
    L = g.length_matrix
    mask = np.isfinite(L)
    if not mask.any():
        raise InfeasibleError("graph has no edges")
    lmin = L[mask].min()
    log_scale = -lmin / T
    M = np.zeros_like(L)
    M[mask] = np.exp(-(L[mask] - lmin) / T)
    return M, log_scale


def boltzmann_prior(g: DirectedGraph, T: float, N: int) -> PriorChain:
    """Time-homogeneous chain weighting each edge by exp(-length / T).

    Path mass is proportional to exp(-l(path) / T).  The initial distribution
    is uniform (1/n); the bridge is invariant under positive rescaling of
    mu0, so reported relative entropies against this prior differ from those
    against the probability-normalized Boltzmann measure by ln Z - ln(1/n)
    only.
    """
    check_temperature(T)
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    mu0 = np.full(g.n, 1.0 / g.n)
    if N == 0:
        return PriorChain(matrices=(), mu0=mu0)
    M, log_scale = _boltzmann_matrix(g, T)
    return PriorChain(matrices=(M,) * N, mu0=mu0, log_scales=(log_scale,) * N)


def chain_path_mass(prior: PriorChain, p: Sequence[int]) -> float:
    """Mass mu0(x0) * prod_t M(t)[x_t, x_{t+1}] of one path; 0 if infeasible.

    Evaluated in log space so long low-temperature products do not underflow
    step by step.
    """
    p = tuple(p)
    if len(p) != prior.N + 1:
        raise ValueError(f"path has {len(p) - 1} steps, prior expects {prior.N}")
    n = prior.n
    for x in p:
        if not (1 <= x <= n):
            raise ValueError(f"node {x} out of range 1..{n}")
    if prior.mu0[p[0] - 1] == 0.0:
        return 0.0
    log_mass = np.log(prior.mu0[p[0] - 1]) + sum(prior.log_scales)
    for t, (a, b) in enumerate(zip(p[:-1], p[1:])):
        m = prior.matrices[t][a - 1, b - 1]
        if m == 0.0:
            return 0.0
        log_mass += np.log(m)
    return float(np.exp(log_mass))


def _scaled_product(matrices: Sequence[np.ndarray], log_scales: Sequence[float],
                    n: int) -> tuple[np.ndarray, float]:
    """Chain product with running max-normalization; true product = exp(log_c) * P."""
    P = np.eye(n)
    log_c = 0.0
    for M, ls in zip(matrices, log_scales):
        P = P @ M
        log_c += ls
        m = P.max()
        if m == 0.0:
            return P, float("-inf")
        P /= m
        log_c += np.log(m)
    return P, log_c


def partition_function(g: DirectedGraph, T: float, N: int) -> float:
    """Sum of exp(-l(x)/T) over all feasible N-step paths from every start node.

    Computed from matrix powers of the edge-weight matrix, so tests can check
    it against direct path enumeration.
    """
    check_temperature(T)
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    M, log_scale = _boltzmann_matrix(g, T)
    P, log_c = _scaled_product((M,) * N, (log_scale,) * N, g.n)
    total = P.sum()
    if total == 0.0:
        raise InfeasibleError(f"no feasible {N}-step paths")
    return float(np.exp(log_c + np.log(total)))


def _primitivity_witness(B: np.ndarray) -> tuple[bool, tuple[int, int, int] | None]:
    """Check whether some power of B is entrywise positive.

    Returns (True, None) if primitive, else (False, (i, j, k)) where entry
    (i, j) of B^k is zero at a power k at or beyond the Wielandt bound
    n^2 - 2n + 2.
    """
    n = B.shape[0]
    bound = n * n - 2 * n + 2
    P = B > 0
    k = 1
    while k < bound:
        if P.all():
            return True, None
        P = (P.astype(np.uint8) @ P.astype(np.uint8)) > 0
        k *= 2
    if P.all():
        return True, None
    i, j = np.argwhere(~P)[0]
    return False, (int(i) + 1, int(j) + 1, k)


def perron(B, tol: float = PERRON_TOL, max_iter: int = PERRON_MAX_ITER,
           require_primitive: bool = False) -> PerronTriple:
    """Dominant eigenvalue and positive eigenvectors by power iteration.

    Iterates B and its transpose with sup-norm normalization until the
    Hilbert projective distance between successive iterates is below `tol`
    and the eigen-residuals satisfy ||Bv - lam v||_inf <= tol * lam * ||v||_inf
    (symmetrically for u).  The returned vectors satisfy sum(u * v) = 1 with
    ||v||_1 = 1.

    With require_primitive=True a Wielandt-bound check runs first and a
    non-primitive matrix is rejected, naming a zero entry of the tested
    power.  By default reducible matrices are accepted as long as the
    iteration converges with a strictly positive right eigenvector; the left
    eigenvector may then contain zeros (graphs with an absorbing component).
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"B must be square, got shape {B.shape}")
    if np.any(B < 0) or not np.all(np.isfinite(B)):
        raise ValueError("B must be entrywise nonnegative and finite")
    n = B.shape[0]
    primitive, witness = _primitivity_witness(B)
    if require_primitive and not primitive:
        i, j, k = witness
        raise PrimitivityError(
            f"matrix is not primitive: entry ({i}, {j}) of B^{k} is zero"
        )

    Bt = B.T
    v = np.ones(n)
    u = np.ones(n)
    lam = 0.0
    res_u = res_v = float("inf")
    iterations = 0
    for iterations in range(1, max_iter + 1):
        Bv = B @ v
        Btu = Bt @ u
        nv = Bv.max()
        nu = Btu.max()
        if nv <= 0.0 or nu <= 0.0:
            raise ConvergenceError(
                "power iteration collapsed to zero; spectral radius is 0",
                iterations=iterations,
            )
        v_new = Bv / nv
        u_new = Btu / nu
        dv = hilbert_distance(v_new, v)
        du = hilbert_distance(u_new, u)
        v, u = v_new, u_new
        if dv <= tol and du <= tol:
            denom = float(u @ v)
            if denom <= 0.0:
                raise ConvergenceError(
                    "left and right iterates have disjoint supports; "
                    "dominant eigenspace is degenerate",
                    iterations=iterations,
                )
            lam = float(u @ (B @ v)) / denom
            res_v = float(np.abs(B @ v - lam * v).max())
            res_u = float(np.abs(Bt @ u - lam * u).max())
            bound_v = tol * lam * float(np.abs(v).max())
            bound_u = tol * lam * float(np.abs(u).max())
            if res_v <= bound_v and res_u <= bound_u:
                break
    else:
        raise ConvergenceError(
            f"power iteration did not converge in {max_iter} iterations",
            residual=max(res_u, res_v), iterations=max_iter,
        )

    # polish: keep iterating while the residuals still improve, so downstream
    # stochastic-matrix constructions inherit near-machine accuracy
    for _ in range(1000):
        improved = False
        v_try = B @ v
        m = v_try.max()
        if m > 0:
            v_try /= m
            r = float(np.abs(B @ v_try - lam * v_try).max())
            if r < res_v:
                v, res_v, improved = v_try, r, True
        u_try = Bt @ u
        m = u_try.max()
        if m > 0:
            u_try /= m
            r = float(np.abs(Bt @ u_try - lam * u_try).max())
            if r < res_u:
                u, res_u, improved = u_try, r, True
        if not improved:
            break
    denom = float(u @ v)
    if denom <= 0.0:
        raise ConvergenceError("dominant eigenspace is degenerate", iterations=iterations)
    lam = float(u @ (B @ v)) / denom
    if lam <= 0.0:
        raise ConvergenceError("dominant eigenvalue is not positive", iterations=iterations)
    v = v / v.sum()
    u = u / float(u @ v)
    return PerronTriple(lam=lam, u=u, v=v, iterations=iterations, primitive=primitive)


def ruelle_bowen_chain(g: DirectedGraph, T: float, N: int,
                       tol: float = PERRON_TOL) -> PriorChain:
    """Stationary chain assigning equal mass to equal-length paths.

    Conjugates the edge-weight matrix B = [exp(-l_ij/T)] by its right Perron
    vector: R = diag(v)^{-1} B diag(v) / lam, started from the invariant
    measure mu(i) = u_i v_i.  Under this prior the mass of any path depends
    on its endpoints and total length only.
    """
    check_temperature(T)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    for i, succ in enumerate(g.successors):
        if not succ:
            raise InfeasibleError(f"node {i + 1} has no outgoing edges")
    B, _ = _boltzmann_matrix(g, T)  # scale cancels in the conjugation
    trip = perron(B, tol=tol)
    if np.any(trip.v <= 0):
        i = int(np.argmin(trip.v)) + 1
        raise InfeasibleError(
            f"right Perron vector vanishes at node {i}; no stationary chain exists"
        )
    R = (B * trip.v[None, :]) / (trip.lam * trip.v[:, None])
    mu = trip.u * trip.v
    mu = mu / mu.sum()
    return PriorChain(matrices=(R,) * N, mu0=mu)
