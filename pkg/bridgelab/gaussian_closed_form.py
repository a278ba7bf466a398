"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: gaussian_closed_form.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Exact Gaussian bridge arithmetic for the reference dX = sigma dW on [0, 1]: entropic OT coupling, closed-form IDBM and IPF iterations, the 1D correlation map and the Gaussian KL divergence. This is the ground truth every sampling procedure is checked against.
# // AR
# +==== END bridgelab =================+
"""

import math
import cmath
from dataclasses import dataclass
from typing import Callable, List, Optional, Union

import numpy as np

try:
    from . import constants as CONST
    from .rogger import RI
except ImportError:
    import constants as CONST
    from rogger import RI


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.T)


def _is_psd(matrix: np.ndarray) -> bool:
    eigenvalues = np.linalg.eigvalsh(_symmetrize(matrix))
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    return bool(eigenvalues.min() >= -CONST.PSD_TOLERANCE * scale)


def sqrtm_spd(matrix: np.ndarray) -> np.ndarray:
    """Principal square root of a symmetric positive semidefinite matrix."""
    eigenvalues, eigenvectors = np.linalg.eigh(_symmetrize(matrix))
    root = (eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))) @ eigenvectors.T
    return _symmetrize(root)


@dataclass(frozen=True, eq=False)
class GaussianDist:
    """N(mean, cov) with an SPD covariance."""
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = np.atleast_1d(np.asarray(self.mean, dtype=np.float64))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=np.float64))
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise CONST.DomainError(f"mean {mean.shape} and cov {cov.shape} do not match")
        if not np.all(np.isfinite(cov)) or not np.allclose(cov, cov.T, atol=1e-12 * max(1.0, float(np.abs(cov).max()))):
            raise CONST.DomainError("covariance must be finite and symmetric")
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as error:
            raise CONST.DomainError("covariance must be positive definite") from error
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", _symmetrize(cov))

    @property
    def dim(self) -> int:
        return int(self.mean.size)

    @classmethod
    def scalar(cls, mean: float, variance: float) -> "GaussianDist":
        return cls(mean=np.array([mean]), cov=np.array([[variance]]))

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        chol = np.linalg.cholesky(self.cov)
        return self.mean + rng.standard_normal((n, self.dim)) @ chol.T


@dataclass(frozen=True, eq=False)
class JointGaussian:
    """A block Gaussian whose covariance may be singular (PSD)."""
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = np.atleast_1d(np.asarray(self.mean, dtype=np.float64))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=np.float64))
        if cov.shape != (mean.size, mean.size):
            raise CONST.DomainError(f"mean {mean.shape} and cov {cov.shape} do not match")
        if not np.all(np.isfinite(cov)) or not _is_psd(cov):
            raise CONST.DomainError("joint covariance must be finite and positive semidefinite")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", _symmetrize(cov))

    @property
    def dim(self) -> int:
        return int(self.mean.size)

    def block(self, i: int, j: int, d: int) -> np.ndarray:
        """Covariance block (i, j) for blocks of size d."""
        return self.cov[i * d:(i + 1) * d, j * d:(j + 1) * d]

    def block_mean(self, i: int, d: int) -> np.ndarray:
        return self.mean[i * d:(i + 1) * d]

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        root = sqrtm_spd(self.cov)
        return self.mean + rng.standard_normal((n, self.dim)) @ root


@dataclass(frozen=True, eq=False)
class GaussianCoupling:
    """A Gaussian coupling of marg0 and marg1 with cross-covariance Cov(X0, X1) = cross."""
    marg0: GaussianDist
    marg1: GaussianDist
    cross: np.ndarray

    def __post_init__(self) -> None:
        if self.marg0.dim != self.marg1.dim:
            raise CONST.DomainError("coupling marginals must share a dimension")
        cross = np.atleast_2d(np.asarray(self.cross, dtype=np.float64))
        d = self.marg0.dim
        if cross.shape != (d, d):
            raise CONST.DomainError(f"cross covariance must be {d}x{d}, got {cross.shape}")
        object.__setattr__(self, "cross", cross)
        if not _is_psd(self._block_cov()):
            raise CONST.DomainError("coupling block covariance is not positive semidefinite")

    @property
    def dim(self) -> int:
        return self.marg0.dim

    def _block_cov(self) -> np.ndarray:
        return np.block([[self.marg0.cov, self.cross], [self.cross.T, self.marg1.cov]])

    def joint(self) -> JointGaussian:
        return JointGaussian(
            mean=np.concatenate([self.marg0.mean, self.marg1.mean]),
            cov=self._block_cov(),
        )

    def correlation(self) -> float:
        """Correlation coefficient of a 1D coupling."""
        if self.dim != 1:
            raise CONST.DomainError("correlation is defined for 1D couplings only")
        return float(self.cross[0, 0] / math.sqrt(self.marg0.cov[0, 0] * self.marg1.cov[0, 0]))

    @classmethod
    def independent(cls, marg0: GaussianDist, marg1: GaussianDist) -> "GaussianCoupling":
        return cls(marg0=marg0, marg1=marg1, cross=np.zeros((marg0.dim, marg0.dim)))

    @classmethod
    def from_joint(cls, joint: JointGaussian) -> "GaussianCoupling":
        d = joint.dim // 2
        return cls(
            marg0=GaussianDist(joint.block_mean(0, d), joint.block(0, 0, d)),
            marg1=GaussianDist(joint.block_mean(1, d), joint.block(1, 1, d)),
            cross=joint.block(0, 1, d),
        )


BlockGaussian = Union[GaussianDist, JointGaussian, GaussianCoupling]


def _check_sigma(sigma: float) -> float:
    sigma = float(sigma)
    if not (math.isfinite(sigma) and sigma >= 0):
        raise CONST.DomainError(f"sigma must be finite and nonnegative, got {sigma!r}")
    return sigma


def eot_gaussian(gamma: GaussianDist, upsilon: GaussianDist, sigma: float) -> GaussianCoupling:
    """Entropic OT coupling of two Gaussians for the reference sigma W (sigma = 0 is the OT limit).

    cross = Sigma0^1/2 sqrt(Sigma0^1/2 Sigma1 Sigma0^1/2 + sigma^4/4 I) Sigma0^-1/2 - sigma^2/2 I

    Arguments:
        gamma (GaussianDist): First marginal.
        upsilon (GaussianDist): Second marginal.
        sigma (float): Reference noise level, >= 0.

    Returns:
        GaussianCoupling: The optimal coupling.

    Raises:
        DomainError: dimension mismatch or invalid sigma.
    """
    sigma = _check_sigma(sigma)
    if gamma.dim != upsilon.dim:
        raise CONST.DomainError("eot_gaussian needs marginals of equal dimension")
    d = gamma.dim
    root0 = sqrtm_spd(gamma.cov)
    root0_inv = np.linalg.inv(root0)
    inner = _symmetrize(root0 @ upsilon.cov @ root0) + (sigma ** 4 / 4.0) * np.eye(d)
    cross = root0 @ sqrtm_spd(inner) @ root0_inv - (sigma ** 2 / 2.0) * np.eye(d)
    return GaussianCoupling(marg0=gamma, marg1=upsilon, cross=cross)


def _pi_moments(c: GaussianCoupling, sigma: float, t: float) -> "tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]":
    """(mu_t, Sigma_{0,t}, Sigma_{t,t}, Sigma_{t,1}) of the bridge mixture over c, no validation."""
    d = c.dim
    sigma_c = c.cross
    mu_t = (1.0 - t) * c.marg0.mean + t * c.marg1.mean
    cov_0t = (1.0 - t) * c.marg0.cov + t * sigma_c
    cov_tt = (
        (1.0 - t) ** 2 * c.marg0.cov
        + t ** 2 * c.marg1.cov
        + t * (1.0 - t) * (sigma_c + sigma_c.T + sigma ** 2 * np.eye(d))
    )
    cov_t1 = (1.0 - t) * sigma_c + t * c.marg1.cov
    return mu_t, cov_0t, _symmetrize(cov_tt), cov_t1


def pi_joint(c: GaussianCoupling, sigma: float, t: float) -> JointGaussian:
    """Joint law of (X0, X_t, X1) for the bridge mixture of sigma W over the coupling c.

    Raises:
        DomainError: t outside (0, 1).
    """
    sigma = _check_sigma(sigma)
    if not 0.0 < t < 1.0:
        raise CONST.DomainError(f"pi_joint needs t in (0, 1), got {t!r}")
    mu_t, cov_0t, cov_tt, cov_t1 = _pi_moments(c, sigma, t)
    cov = np.block([
        [c.marg0.cov, cov_0t, c.cross],
        [cov_0t.T, cov_tt, cov_t1],
        [c.cross.T, cov_t1.T, c.marg1.cov],
    ])
    return JointGaussian(mean=np.concatenate([c.marg0.mean, mu_t, c.marg1.mean]), cov=cov)


def _linear_coefficients(c: GaussianCoupling, sigma: float, t: float) -> "tuple[np.ndarray, np.ndarray]":
    mu_t, _, cov_tt, cov_t1 = _pi_moments(c, sigma, t)
    # gain^T = Sigma_{t,1}^T Sigma_{t,t}^-1
    gain = np.linalg.solve(cov_tt, cov_t1).T
    a_t = (gain - np.eye(c.dim)) / (1.0 - t)
    c_t = (c.marg1.mean - gain @ mu_t) / (1.0 - t)
    return a_t, c_t


def dbm_linear_coefficients(c: GaussianCoupling, sigma: float, t: float) -> "tuple[np.ndarray, np.ndarray]":
    """Drift of the DBM transport over a Gaussian coupling, A_t x + c_t.

    Arguments:
        c (GaussianCoupling): The coupling bridged by sigma W.
        sigma (float): Reference noise level.
        t (float): Time in [0, 1 - eps_end).

    Returns:
        tuple[np.ndarray, np.ndarray]: (A_t, c_t).

    Raises:
        DomainError: t outside [0, 1 - eps_end).
        NumericalFailure: singular Sigma_{t,t}.
    """
    sigma = _check_sigma(sigma)
    if not 0.0 <= t < 1.0 - CONST.ODE_EPS_END:
        raise CONST.DomainError(f"dbm_linear_coefficients needs t in [0, 1 - {CONST.ODE_EPS_END}), got {t!r}")
    try:
        return _linear_coefficients(c, sigma, t)
    except np.linalg.LinAlgError as error:
        raise CONST.NumericalFailure("singular bridge marginal covariance", at_time=t) from error


def transfer_ode_grid(uniform_steps: int = CONST.ODE_UNIFORM_STEPS, geometric_steps: int = CONST.ODE_GEOMETRIC_STEPS, eps_end: float = CONST.ODE_EPS_END) -> np.ndarray:
    """Time grid of the transfer ODE: uniform up to 0.99 then geometric down to 1 - eps_end."""
    uniform = np.linspace(0.0, CONST.ODE_UNIFORM_END, uniform_steps + 1)
    gap = 1.0 - CONST.ODE_UNIFORM_END
    k = np.arange(1, geometric_steps + 1, dtype=np.float64)
    geometric = 1.0 - gap * (eps_end / gap) ** (k / geometric_steps)
    return np.concatenate([uniform, geometric])


def integrate_transfer_ode(
    c: GaussianCoupling,
    sigma: float,
    *,
    uniform_steps: int = CONST.ODE_UNIFORM_STEPS,
    geometric_steps: int = CONST.ODE_GEOMETRIC_STEPS,
    eps_end: float = CONST.ODE_EPS_END
) -> np.ndarray:
    """Solve dP/dt = A_t P, P_0 = I with RK4 and return P_1.

    The last eps_end of the interval is closed with a single explicit step
    at 1 - eps_end, so A_t is never evaluated at its 0/0 endpoint.

    Keyword Arguments:
        uniform_steps (int): RK4 steps on [0, 0.99]. Default: 10 000
        geometric_steps (int): Geometrically shrinking steps after 0.99. Default: 200
        eps_end (float): Distance to 1 of the last RK4 node. Default: 1e-6

    Returns:
        np.ndarray: P_1 (d x d).

    Raises:
        NumericalFailure: A_t is non-finite somewhere, carrying that t.
    """
    sigma = _check_sigma(sigma)
    d = c.dim
    eye = np.eye(d)
    symmetric_part = c.cross + c.cross.T + sigma ** 2 * eye
    sigma0 = c.marg0.cov
    sigma1 = c.marg1.cov

    def drift_matrix(t: float) -> np.ndarray:
        cov_tt = (1.0 - t) ** 2 * sigma0 + t ** 2 * sigma1 + t * (1.0 - t) * symmetric_part
        cov_t1 = (1.0 - t) * c.cross + t * sigma1
        try:
            matrix = (np.linalg.solve(cov_tt, cov_t1).T - eye) / (1.0 - t)
        except np.linalg.LinAlgError as error:
            raise CONST.NumericalFailure("singular bridge marginal covariance in transfer ODE", at_time=t) from error
        if not np.all(np.isfinite(matrix)):
            raise CONST.NumericalFailure("non-finite drift matrix in transfer ODE", at_time=t)
        return matrix

    grid = transfer_ode_grid(uniform_steps, geometric_steps, eps_end)
    p = eye.copy()
    a_left = drift_matrix(grid[0])
    for left, right in zip(grid[:-1], grid[1:]):
        h = right - left
        a_mid = drift_matrix(left + 0.5 * h)
        a_right = drift_matrix(right)
        k1 = a_left @ p
        k2 = a_mid @ (p + 0.5 * h * k1)
        k3 = a_mid @ (p + 0.5 * h * k2)
        k4 = a_right @ (p + h * k3)
        p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        a_left = a_right
    p = p + (1.0 - grid[-1]) * (a_left @ p)
    if not np.all(np.isfinite(p)):
        raise CONST.NumericalFailure("transfer ODE produced a non-finite solution", at_time=1.0)
    return p


def idbm_step_gaussian(c: GaussianCoupling, sigma: float, **ode_options: int) -> GaussianCoupling:
    """One IDBM iteration in closed form: the cross covariance becomes Sigma0 P_1^T."""
    p1 = integrate_transfer_ode(c, sigma, **ode_options)
    return GaussianCoupling(marg0=c.marg0, marg1=c.marg1, cross=c.marg0.cov @ p1.T)


def rho_star_1d(s0: float, s1: float, sigma: float) -> float:
    """Correlation of the 1D entropic OT coupling for standard deviations s0, s1."""
    product = s0 * s1
    return (math.sqrt(product ** 2 + sigma ** 4 / 4.0) - sigma ** 2 / 2.0) / product


def rho_m_1d(rho_c: float, s0: float, s1: float, sigma: float) -> float:
    """Correlation after one IDBM iteration in 1D, in closed form.

    s0 and s1 are the marginal standard deviations. The result is
    exp(-(sigma^2 / c3) (artanh(c1 / c3) + artanh(c2 / c3))), which equals
    exp(-(sigma^2 / 2) int_0^1 dt / Var(X_t)).

    Arguments:
        rho_c (float): Correlation of the input coupling, in [-1, 1].
        s0 (float): Standard deviation of the first marginal, > 0.
        s1 (float): Standard deviation of the second marginal, > 0.
        sigma (float): Reference noise level, >= 0.

    Returns:
        float: The new correlation, in (0, 1].

    Raises:
        DomainError: parameters outside their ranges.
    """
    sigma = _check_sigma(sigma)
    if not (s0 > 0 and s1 > 0):
        raise CONST.DomainError(f"standard deviations must be positive, got ({s0!r}, {s1!r})")
    if not -1.0 <= rho_c <= 1.0:
        raise CONST.DomainError(f"rho_c must lie in [-1, 1], got {rho_c!r}")
    if sigma == 0.0:
        return 1.0
    cov = rho_c * s0 * s1
    sigma2 = sigma ** 2
    c1 = sigma2 + 2.0 * s1 * (rho_c * s0 - s1)
    c2 = sigma2 + 2.0 * s0 * (rho_c * s1 - s0)
    c3_sq = sigma2 ** 2 + 4.0 * sigma2 * cov + 4.0 * cov ** 2 - 4.0 * s0 ** 2 * s1 ** 2
    # Var(X_t) = s0^2 + c2 t + quad t^2
    quad = s0 ** 2 + s1 ** 2 - 2.0 * cov - sigma2
    scale = s0 ** 2 + s1 ** 2 + sigma2
    if abs(quad) <= 1e-7 * scale:
        # Var(X_t) is affine in t
        if abs(c2) <= 1e-14 * scale:
            integral = 1.0 / s0 ** 2
        else:
            integral = math.log1p(c2 / s0 ** 2) / c2
        return math.exp(-0.5 * sigma2 * integral)
    if abs(c3_sq) <= 1e-14 * scale ** 2:
        exponent = -sigma2 * (1.0 / c1 + 1.0 / c2)
    elif c3_sq > 0:
        c3 = math.sqrt(c3_sq)
        x = c1 / c3
        y = c2 / c3
        # artanh(x) + artanh(y) as a real logarithm, valid on either side of 1
        artanh_sum = 0.5 * math.log(abs(((1.0 + x) * (1.0 + y)) / ((1.0 - x) * (1.0 - y))))
        exponent = -sigma2 * artanh_sum / c3
    else:
        c3 = 1j * math.sqrt(-c3_sq)
        complex_exponent = -sigma2 * (cmath.atanh(c1 / c3) + cmath.atanh(c2 / c3)) / c3
        if abs(complex_exponent.imag) > CONST.COMPLEX_RESIDUAL_TOLERANCE * max(1.0, abs(complex_exponent.real)):
            raise CONST.NumericalFailure(
                f"complex branch left an imaginary residual {complex_exponent.imag!r}"
            )
        exponent = complex_exponent.real
    return math.exp(exponent)


def ipf_initial(gamma: GaussianDist, sigma: float) -> JointGaussian:
    """F(0) = Gamma R: X0 ~ Gamma and X1 = X0 + sigma W_1."""
    sigma = _check_sigma(sigma)
    d = gamma.dim
    cov = np.block([[gamma.cov, gamma.cov], [gamma.cov, gamma.cov + sigma ** 2 * np.eye(d)]])
    return JointGaussian(mean=np.concatenate([gamma.mean, gamma.mean]), cov=cov)


def ipf_step_gaussian(joint: JointGaussian, target: GaussianDist, side: CONST.IpfSide) -> JointGaussian:
    """Replace one marginal of a 2d-block Gaussian, keeping the conditional of the other block.

    Arguments:
        joint (JointGaussian): The current law of (X0, X1).
        target (GaussianDist): The new marginal of the selected block.
        side (CONST.IpfSide): FIRST replaces X0 (forward half bridge), SECOND replaces X1 (backward).

    Returns:
        JointGaussian: The projected law.

    Raises:
        DomainError: dimension mismatch or singular covariance of the replaced block.
    """
    d = target.dim
    if joint.dim != 2 * d:
        raise CONST.DomainError(f"joint of dimension {joint.dim} cannot take a {d}-dimensional marginal")
    x, y = (0, 1) if side == CONST.IpfSide.FIRST else (1, 0)
    mu_x = joint.block_mean(x, d)
    mu_y = joint.block_mean(y, d)
    cov_xx = joint.block(x, x, d)
    cov_yx = joint.block(y, x, d)
    cov_yy = joint.block(y, y, d)
    try:
        np.linalg.cholesky(cov_xx)
    except np.linalg.LinAlgError as error:
        raise CONST.DomainError("the replaced marginal has a singular covariance") from error
    gain = np.linalg.solve(cov_xx, cov_yx.T).T
    conditional = _symmetrize(cov_yy - gain @ cov_yx.T)
    new_mu_y = mu_y + gain @ (target.mean - mu_x)
    new_cov_yx = gain @ target.cov
    new_cov_yy = conditional + gain @ target.cov @ gain.T
    blocks = [[None, None], [None, None]]
    blocks[x][x] = target.cov
    blocks[y][x] = new_cov_yx
    blocks[x][y] = new_cov_yx.T
    blocks[y][y] = new_cov_yy
    means = [None, None]
    means[x] = target.mean
    means[y] = new_mu_y
    return JointGaussian(mean=np.concatenate(means), cov=np.block(blocks))


def _as_joint(value: BlockGaussian) -> "tuple[np.ndarray, np.ndarray]":
    if isinstance(value, GaussianCoupling):
        joint = value.joint()
        return joint.mean, joint.cov
    return value.mean, value.cov


def gaussian_kl(p: BlockGaussian, q: BlockGaussian) -> float:
    """KL(p || q) between Gaussians; infinite when p is singular.

    Raises:
        DomainError: dimension mismatch or singular q.
    """
    mean_p, cov_p = _as_joint(p)
    mean_q, cov_q = _as_joint(q)
    if mean_p.shape != mean_q.shape:
        raise CONST.DomainError(f"KL needs equal dimensions, got {mean_p.size} and {mean_q.size}")
    sign_q, logdet_q = np.linalg.slogdet(cov_q)
    if sign_q <= 0 or not np.isfinite(logdet_q):
        raise CONST.DomainError("KL reference distribution q is singular")
    sign_p, logdet_p = np.linalg.slogdet(cov_p)
    if sign_p <= 0 or not np.isfinite(logdet_p):
        return math.inf
    k = mean_p.size
    delta = mean_q - mean_p
    trace = float(np.trace(np.linalg.solve(cov_q, cov_p)))
    quad = float(delta @ np.linalg.solve(cov_q, delta))
    return max(0.0, 0.5 * (trace + quad - k + logdet_q - logdet_p))


def kl_limit_constant() -> float:
    """Supremum of the first IDBM iterate KL from the independent coupling in 1D."""
    return 0.25 * (math.pi + math.log(4.0) - 2.0 * (1.0 + math.log(math.pi)))


def idbm_trajectory(
    gamma: GaussianDist,
    upsilon: GaussianDist,
    sigma: float,
    n_iterations: int,
    initial_cross: Optional[np.ndarray] = None,
    **ode_options: int
) -> List[GaussianCoupling]:
    """Couplings C(0), ..., C(n) of the closed-form IDBM iteration.

    1D problems use the exact correlation map; higher dimensions integrate the transfer ODE.
    """
    if initial_cross is None:
        coupling = GaussianCoupling.independent(gamma, upsilon)
    else:
        coupling = GaussianCoupling(gamma, upsilon, initial_cross)
    couplings = [coupling]
    s0 = math.sqrt(float(gamma.cov[0, 0]))
    s1 = math.sqrt(float(upsilon.cov[0, 0]))
    for iteration in range(1, n_iterations + 1):
        if gamma.dim == 1 and not ode_options:
            rho = rho_m_1d(float(np.clip(coupling.correlation(), -1.0, 1.0)), s0, s1, sigma)
            coupling = GaussianCoupling(gamma, upsilon, np.array([[rho * s0 * s1]]))
        else:
            coupling = idbm_step_gaussian(coupling, sigma, **ode_options)
        RI.log_debug(f"closed-form idbm iteration {iteration} done")
        couplings.append(coupling)
    return couplings


def ipf_trajectory(gamma: GaussianDist, upsilon: GaussianDist, sigma: float, n_iterations: int) -> List[JointGaussian]:
    """Laws F(0), ..., F(n) of the closed-form IPF iteration (odd: backward, even: forward)."""
    joint = ipf_initial(gamma, sigma)
    joints = [joint]
    for iteration in range(1, n_iterations + 1):
        if iteration % 2 == 1:
            joint = ipf_step_gaussian(joint, upsilon, CONST.IpfSide.SECOND)
        else:
            joint = ipf_step_gaussian(joint, gamma, CONST.IpfSide.FIRST)
        joints.append(joint)
    return joints


def kl_trajectory(laws: List[BlockGaussian], reference: GaussianCoupling) -> List[float]:
    """KL of each law to the reference coupling."""
    target = reference.joint()
    return [gaussian_kl(law, target) for law in laws]


def idbm_kl_trajectory(gamma: GaussianDist, upsilon: GaussianDist, sigma: float, n_iterations: int, **ode_options: int) -> List[float]:
    """KL(C(i) || S*) for i = 0..n of the closed-form IDBM iteration from the independent coupling."""
    optimal = eot_gaussian(gamma, upsilon, sigma)
    return kl_trajectory(idbm_trajectory(gamma, upsilon, sigma, n_iterations, **ode_options), optimal)


def ipf_kl_trajectory(gamma: GaussianDist, upsilon: GaussianDist, sigma: float, n_iterations: int) -> List[float]:
    """KL(F(i) || S*) for i = 0..n of the closed-form IPF iteration."""
    optimal = eot_gaussian(gamma, upsilon, sigma)
    return kl_trajectory(ipf_trajectory(gamma, upsilon, sigma, n_iterations), optimal)


def conditional_terminal_mean(c: GaussianCoupling, sigma: float, t: float) -> Callable[[np.ndarray], np.ndarray]:
    """x -> E[X1 | X_t = x] under the bridge mixture over c."""
    mu_t, _, cov_tt, cov_t1 = _pi_moments(c, _check_sigma(sigma), t)
    gain = np.linalg.solve(cov_tt, cov_t1).T
    mean1 = c.marg1.mean

    def predict(x: np.ndarray) -> np.ndarray:
        return mean1 + (np.asarray(x, dtype=np.float64) - mu_t) @ gain.T

    return predict
