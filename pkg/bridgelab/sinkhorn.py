"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: sinkhorn.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Log-domain Sinkhorn solver for discrete entropic optimal transport, and the density discretisation feeding it.
# // AR
# +==== END bridgelab =================+
"""

from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np
from scipy.special import logsumexp

try:
    from . import constants as CONST
    from .rogger import RI
except ImportError:
    import constants as CONST
    from rogger import RI


def _check_simplex(weights: np.ndarray, name: str) -> np.ndarray:
    weights = np.asarray(weights, dtype=np.float64)
    if weights.ndim != 1 or weights.size == 0:
        raise CONST.DomainError(f"{name} must be a nonempty vector")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)) or abs(weights.sum() - 1.0) > 1e-9:
        raise CONST.DomainError(f"{name} must be nonnegative and sum to 1")
    return weights


@dataclass(frozen=True, eq=False)
class DiscreteEOTProblem:
    """min <P, C> - eps H(P) over plans with marginals mu and nu."""
    mu: np.ndarray
    nu: np.ndarray
    cost: np.ndarray
    eps: float

    def __post_init__(self) -> None:
        mu = _check_simplex(self.mu, "mu")
        nu = _check_simplex(self.nu, "nu")
        cost = np.asarray(self.cost, dtype=np.float64)
        if cost.shape != (mu.size, nu.size) or not np.all(np.isfinite(cost)):
            raise CONST.DomainError(f"cost must be a finite {mu.size}x{nu.size} matrix, got {cost.shape}")
        if not self.eps > 0:
            raise CONST.DomainError(f"eps must be positive, got {self.eps!r}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "eps", float(self.eps))

    @classmethod
    def on_grids(cls, mu: np.ndarray, nu: np.ndarray, x: np.ndarray, y: np.ndarray, eps: float) -> "DiscreteEOTProblem":
        """Problem with the squared Euclidean cost between the support points x and y."""
        return cls(mu=mu, nu=nu, cost=squared_cost(x, y), eps=eps)

    def transposed(self) -> "DiscreteEOTProblem":
        return DiscreteEOTProblem(mu=self.nu, nu=self.mu, cost=self.cost.T, eps=self.eps)


@dataclass(frozen=True, eq=False)
class DiscreteCoupling:
    """Solver output.

    Attributes:
        plan: (m, n) transport plan.
        f, g: dual potentials, -inf where the marginal has no mass.
        iterations: iterations used.
        residual: final L1 marginal residual.
        converged: residual <= tol was reached.
        residual_history: residual after every iteration.
    """
    plan: np.ndarray
    f: np.ndarray
    g: np.ndarray
    iterations: int
    residual: float
    converged: bool
    residual_history: List[float] = field(default_factory=list)

    def marginals(self) -> "tuple[np.ndarray, np.ndarray]":
        return self.plan.sum(axis=1), self.plan.sum(axis=0)


def squared_cost(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """|x_i - y_j|^2 for 1D grids or (n, d) point sets."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim == 1:
        return (x[:, None] - y[None, :]) ** 2
    return np.sum((x[:, None, :] - y[None, :, :]) ** 2, axis=2)


def sinkhorn_solve(problem: DiscreteEOTProblem, tol: float = CONST.SINKHORN_TOL, max_iter: int = CONST.SINKHORN_MAX_ITER) -> DiscreteCoupling:
    """Alternate exact potential updates in log space until the L1 marginal residual is below tol.

    Each iteration updates f then g, so the column marginal is exact and the
    residual is the row one. Only the support of mu and nu takes part.
    The transposed problem yields the transposed plan once both solves are
    converged to rounding; at a looser tol the two stopping iterates differ
    by a small multiple of tol.

    Arguments:
        problem (DiscreteEOTProblem): The problem.
        tol (float): Target L1 residual. Default: CONST.SINKHORN_TOL
        max_iter (int): Iteration cap; reaching it returns a result flagged not converged. Default: CONST.SINKHORN_MAX_ITER

    Returns:
        DiscreteCoupling: Plan exp((f_i + g_j - C_ij) / eps) and diagnostics.
    """
    rows = problem.mu > 0
    cols = problem.nu > 0
    eps = problem.eps
    scaled = -problem.cost[np.ix_(rows, cols)] / eps
    log_mu = np.log(problem.mu[rows])
    log_nu = np.log(problem.nu[cols])
    mu = problem.mu[rows]

    f = np.zeros(log_mu.size)
    g = np.zeros(log_nu.size)
    history: List[float] = []
    residual = np.inf
    iterations = 0
    row_lse = logsumexp(scaled + g[None, :] / eps, axis=1)
    while iterations < max_iter:
        f = eps * (log_mu - row_lse)
        g = eps * (log_nu - logsumexp(scaled + f[:, None] / eps, axis=0))
        iterations += 1
        row_lse = logsumexp(scaled + g[None, :] / eps, axis=1)
        residual = float(np.abs(np.exp(f / eps + row_lse) - mu).sum())
        history.append(residual)
        if residual <= tol:
            break
    converged = residual <= tol
    if converged:
        RI.log_debug(f"sinkhorn converged in {iterations} iterations, residual {residual:.3e}")
    else:
        RI.log_warning(f"sinkhorn stopped at max_iter={max_iter} with residual {residual:.3e}")

    plan = np.zeros(problem.cost.shape)
    plan[np.ix_(rows, cols)] = np.exp(scaled + (f[:, None] + g[None, :]) / eps)
    f_full = np.full(problem.mu.size, -np.inf)
    g_full = np.full(problem.nu.size, -np.inf)
    f_full[rows] = f
    g_full[cols] = g
    return DiscreteCoupling(
        plan=plan, f=f_full, g=g_full, iterations=iterations,
        residual=residual, converged=converged, residual_history=history,
    )


def bin_widths(grid: np.ndarray) -> np.ndarray:
    """Widths of the cells around sorted points, split at midpoints, end cells mirrored."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise CONST.DomainError("grid must hold at least two strictly increasing points")
    edges = np.empty(grid.size + 1)
    edges[1:-1] = 0.5 * (grid[1:] + grid[:-1])
    edges[0] = grid[0] - 0.5 * (grid[1] - grid[0])
    edges[-1] = grid[-1] + 0.5 * (grid[-1] - grid[-2])
    return np.diff(edges)


def bin_masses(density: Callable[[np.ndarray], np.ndarray], grid: np.ndarray) -> np.ndarray:
    """Unnormalised midpoint-rule mass of every cell."""
    grid = np.asarray(grid, dtype=np.float64)
    values = np.asarray(density(grid), dtype=np.float64)
    if values.shape != grid.shape or np.any(values < 0) or not np.all(np.isfinite(values)):
        raise CONST.DomainError("density must return finite nonnegative values, one per grid point")
    return values * bin_widths(grid)


def discretize_density(density: Callable[[np.ndarray], np.ndarray], grid: np.ndarray) -> np.ndarray:
    """Simplex weights of a density on sorted grid points.

    Raises:
        DomainError: the density has no mass on the grid.
    """
    masses = bin_masses(density, grid)
    total = masses.sum()
    if not total > 0:
        raise CONST.DomainError("density has zero mass on the grid")
    return masses / total


def plan_correlation(plan: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """Correlation of (X, Y) under a plan supported on the 1D grids x and y."""
    plan = np.asarray(plan, dtype=np.float64)
    mass = plan.sum()
    px = plan.sum(axis=1) / mass
    py = plan.sum(axis=0) / mass
    mean_x = px @ x
    mean_y = py @ y
    var_x = px @ (x - mean_x) ** 2
    var_y = py @ (y - mean_y) ** 2
    cross = (x - mean_x) @ (plan / mass) @ (y - mean_y)
    return float(cross / np.sqrt(var_x * var_y))
