"""Optimal noise-shaping design and rate-distortion analysis.

Setting: a quantizer with error feedback reshapes its (input-proportional)
quantization noise through a shaping response r(omega) before it reaches
the plant p(omega). With gamma the quantizer's signal-to-error variance
ratio and nu = gamma + 1, the output MSE per unit input variance is

    mse(r) = ||p*r||^2 / (nu - ||r||^2),

minimized over responses with zero log-mean (realizable, unity-head
filters) and ||r||^2 < nu. The minimizer is the regularized inverse

    r_alpha(omega) = theta(alpha) / sqrt(p^2(omega) + alpha),

where theta normalizes the log-mean to zero, and the optimal alpha solves
theta^2(alpha)/alpha = nu; the quantity theta^2/alpha is strictly
decreasing, so a bracketing bisection (polished by Newton in log-space)
finds it reliably. At the optimum the achieved MSE equals alpha itself.

Oversampling by an integer factor bandlimits the plant response to
[0, pi/lambda]; the resulting distortion obeys the collapse identity
D(nu, lambda) = D(nu^lambda, 1) and the bound D <= ||p||^2/(nu^lambda - 1),
both of which are exercised by the verification suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, NumericalError
from .spectral import (
    AmplitudeResponse,
    band_mean,
    is_almost_constant,
    l2_norm_sq,
    log_geometric_mean,
    oversample_response,
)

# Tolerance below which a plant response counts as constant, triggering the
# degenerate branch where feedback cannot help and r = 1 is returned directly.
ALMOST_CONSTANT_TOL = 1e-9

ROOT_REL_TOL = 1e-12
MAX_BRACKET_STEPS = 200


def db(ratio: float) -> float:
    """Power quantity in decibels: 10*log10(ratio)."""
    return 10.0 * math.log10(ratio)


@dataclass(frozen=True)
class DesignProblem:
    """Plant amplitude response plus the quantizer noise-ratio gamma."""

    p: AmplitudeResponse
    gamma: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if not np.any(self.p.values > 0) and not (self.p.cutoff is not None and self.p.edge_below > 0):
            raise ValueError("plant response must not be identically zero")

    @property
    def nu(self) -> float:
        return self.gamma + 1.0


@dataclass(frozen=True)
class OptimalDesign:
    """Solution of the shaping optimization at the optimal regularization."""

    alpha_opt: float
    theta_opt: float
    r_opt: AmplitudeResponse
    distortion: float  # output MSE per unit input variance
    norm_r_sq: float  # ||r_opt||^2
    n_of_alpha: float  # ||p * r_opt||^2


@dataclass(frozen=True)
class QuantizerSpec:
    """Mid-rise quantizer geometry and its noise-ratio model.

    The saturation level and step obey 2L = (2^bits - 1)*d, and gamma is
    the white-noise model value 3*(2^bits - 1)^2 / loading_factor^2.
    """

    bits: int
    loading_factor: float
    step: float
    saturation: float
    gamma: float

    @classmethod
    def for_sigma_u(cls, bits: int, loading_factor: float, sigma_u: float = 1.0) -> "QuantizerSpec":
        """Size the quantizer so saturation = loading_factor * sigma_u."""
        if bits < 1 or int(bits) != bits:
            raise ValueError("bits must be a positive integer")
        if loading_factor <= 0:
            raise ValueError("loading_factor must be positive")
        if sigma_u <= 0:
            raise ValueError("sigma_u must be positive")
        levels = (1 << int(bits)) - 1
        saturation = loading_factor * sigma_u
        step = 2.0 * saturation / levels
        return cls(
            bits=int(bits),
            loading_factor=float(loading_factor),
            step=step,
            saturation=saturation,
            gamma=gamma_from_bits(int(bits), loading_factor),
        )


def gamma_from_bits(bits: int, loading_factor: float) -> float:
    """Noise-ratio gamma = sigma_u^2/sigma_w^2 for a b-bit mid-rise quantizer
    under the white uniform-error model (sigma_w^2 = d^2/12) with saturation
    at loading_factor standard deviations of the input."""
    if bits < 1 or int(bits) != bits:
        raise ValueError("bits must be a positive integer")
    if loading_factor <= 0:
        raise ValueError("loading_factor must be positive")
    levels = (1 << int(bits)) - 1
    return 3.0 * levels * levels / (loading_factor * loading_factor)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return alpha


def geomean_amplitude(alpha: float, p: AmplitudeResponse) -> float:
    """theta(alpha): geometric-mean amplitude of sqrt(p^2 + alpha).

    This is the unique scale making the shaped response
    theta/sqrt(p^2+alpha) have zero log-mean.
    """
    alpha = _check_alpha(alpha)
    return math.exp(0.5 * band_mean(p, lambda om, v: np.log(v * v + alpha)))


def shaped_noise_gain(alpha: float, p: AmplitudeResponse) -> float:
    """||p * r_alpha||^2: shaped-noise power per unit quantizer-error variance."""
    alpha = _check_alpha(alpha)
    theta2 = geomean_amplitude(alpha, p) ** 2
    return theta2 * band_mean(p, lambda om, v: v * v / (v * v + alpha))


def shaper_norm_sq(alpha: float, p: AmplitudeResponse) -> float:
    """||r_alpha||^2: squared norm of the optimal shaping response."""
    alpha = _check_alpha(alpha)
    theta2 = geomean_amplitude(alpha, p) ** 2
    return theta2 * band_mean(p, lambda om, v: 1.0 / (v * v + alpha))


def _noise_fraction(alpha: float, p: AmplitudeResponse) -> float:
    """Mean of p^2/(p^2+alpha) in (0, 1); also the negative log-log slope of
    theta^2(alpha)/alpha, used for Newton polishing."""
    return band_mean(p, lambda om, v: v * v / (v * v + alpha))


def design_mse(alpha: float, prob: DesignProblem) -> float:
    """Output MSE per unit input variance using the shaper r_alpha."""
    alpha = _check_alpha(alpha)
    n_val = shaped_noise_gain(alpha, prob.p)
    c_val = shaper_norm_sq(alpha, prob.p)
    if c_val >= prob.nu:
        raise InfeasibleError(
            f"shaper norm^2 {c_val:.6g} is not below nu = {prob.nu:.6g} at alpha = {alpha:.6g}"
        )
    return n_val / (prob.nu - c_val)


def optimal_shaper(alpha: float, p: AmplitudeResponse) -> AmplitudeResponse:
    """The shaping response theta(alpha)/sqrt(p^2 + alpha) on p's grid."""
    alpha = _check_alpha(alpha)
    theta = geomean_amplitude(alpha, p)
    values = theta / np.sqrt(p.values * p.values + alpha)
    if p.cutoff is None:
        return AmplitudeResponse(p.grid, values)
    return AmplitudeResponse(
        p.grid,
        values,
        cutoff=p.cutoff,
        edge_below=theta / math.sqrt(p.edge_below**2 + alpha),
        edge_above=theta / math.sqrt(p.edge_above**2 + alpha),
    )


def solve_min_mse(prob: DesignProblem) -> OptimalDesign:
    """Minimize the shaped-noise MSE over feasible shaping responses.

    Finds the root of theta^2(alpha)/alpha = nu by bracket expansion and
    log-space bisection (the quantity is strictly decreasing), then Newton
    polish; returns the full design at that alpha.
    """
    p, nu = prob.p, prob.nu

    if is_almost_constant(p, ALMOST_CONSTANT_TOL):
        # Feedback cannot improve on a flat plant: the optimal shaper is 1.
        c_sq = l2_norm_sq(p)
        alpha = c_sq / (nu - 1.0)
        return OptimalDesign(
            alpha_opt=alpha,
            theta_opt=math.sqrt(c_sq + alpha),
            r_opt=p.constant_like(1.0),
            distortion=alpha,
            norm_r_sq=1.0,
            n_of_alpha=c_sq,
        )

    def log_ratio(alpha: float) -> float:
        # ln(theta^2/alpha) - ln(nu); strictly decreasing in alpha
        return 2.0 * math.log(geomean_amplitude(alpha, p)) - math.log(alpha) - math.log(nu)

    lo, hi = 1e-12, 1.0
    for _ in range(MAX_BRACKET_STEPS):
        if log_ratio(hi) < 0:
            break
        hi *= 2.0
    else:
        raise NumericalError("failed to bracket the optimal alpha from above")
    for _ in range(MAX_BRACKET_STEPS):
        if log_ratio(lo) > 0:
            break
        lo /= 2.0
    else:
        raise NumericalError("failed to bracket the optimal alpha from below")

    for _ in range(MAX_BRACKET_STEPS):
        if hi / lo - 1.0 <= ROOT_REL_TOL:
            break
        mid = math.sqrt(lo * hi)
        if log_ratio(mid) > 0:
            lo = mid
        else:
            hi = mid

    x = 0.5 * (math.log(lo) + math.log(hi))
    for _ in range(4):
        alpha = math.exp(x)
        slope = -_noise_fraction(alpha, p)
        if slope == 0.0:
            break
        x -= log_ratio(alpha) / slope
        x = min(max(x, math.log(lo) - 1.0), math.log(hi) + 1.0)
    alpha = math.exp(x)

    theta = geomean_amplitude(alpha, p)
    c_val = shaper_norm_sq(alpha, p)
    n_val = shaped_noise_gain(alpha, p)
    if c_val >= nu:
        raise NumericalError(
            f"solved design is infeasible: shaper norm^2 {c_val:.12g} >= nu {nu:.12g}"
        )
    return OptimalDesign(
        alpha_opt=alpha,
        theta_opt=theta,
        r_opt=optimal_shaper(alpha, p),
        distortion=n_val / (nu - c_val),
        norm_r_sq=c_val,
        n_of_alpha=n_val,
    )


def predicted_sigma_w_sq(design: OptimalDesign, prob: DesignProblem, sigma_x_sq: float = 1.0) -> float:
    """Quantizer-error variance implied by the variance balance:
    sigma_x^2 / (nu - ||r||^2)."""
    if sigma_x_sq < 0:
        raise ValueError("sigma_x_sq must be nonnegative")
    slack = prob.nu - design.norm_r_sq
    if slack <= 0:
        raise InfeasibleError(f"design is infeasible: nu - ||r||^2 = {slack:.6g}")
    return sigma_x_sq / slack


def predicted_output_mse(design: OptimalDesign, prob: DesignProblem, sigma_x_sq: float = 1.0) -> float:
    """Predicted output error power ||p*r||^2 * sigma_w^2."""
    return design.n_of_alpha * predicted_sigma_w_sq(design, prob, sigma_x_sq)


def design_for_nu(p_base: AmplitudeResponse, nu: float, oversampling: int = 1) -> OptimalDesign:
    """Solve the design at a given nu on the oversampled plant response."""
    if nu <= 1:
        raise ValueError(f"nu must exceed 1, got {nu}")
    p_lam = oversample_response(p_base, oversampling)
    return solve_min_mse(DesignProblem(p=p_lam, gamma=nu - 1.0))


def rd_point(
    p_base: AmplitudeResponse, oversampling: int, bits: int, loading_factor: float
) -> tuple[float, float]:
    """Distortion (MSE per unit input variance) and alpha at one operating
    point (bit depth, oversampling factor)."""
    gamma = gamma_from_bits(bits, loading_factor)
    design = design_for_nu(p_base, gamma + 1.0, oversampling)
    return design.distortion, design.alpha_opt


def upper_bound(nu: float, oversampling: int, p_base: AmplitudeResponse) -> float:
    """Closed-form distortion bound ||p||^2/(nu^lambda - 1); ||p||^2 is the
    norm of the non-oversampled base response."""
    if nu <= 1:
        raise ValueError(f"nu must exceed 1, got {nu}")
    if oversampling < 1 or int(oversampling) != oversampling:
        raise ValueError("oversampling factor must be a positive integer")
    return l2_norm_sq(p_base) / (nu ** int(oversampling) - 1.0)


@dataclass(frozen=True)
class RDRow:
    """One operating point of a rate-distortion sweep (MSEs per unit sigma_x^2)."""

    bits: int
    oversampling: int
    gamma: float
    distortion: float  # optimal error feedback
    d_uniform: float  # no feedback (r = 1) on the same bandlimited plant
    bound: float  # closed-form upper bound
    identity_residual: float  # |D(nu,lam) - D(nu^lam,1)| / D(nu,lam)

    @property
    def distortion_db(self) -> float:
        return db(self.distortion)

    @property
    def d_uniform_db(self) -> float:
        return db(self.d_uniform)

    @property
    def bound_db(self) -> float:
        return db(self.bound)

    @property
    def gain_db(self) -> float:
        """Advantage of optimal feedback over the uniform quantizer."""
        return db(self.d_uniform / self.distortion)


def rd_curve(
    p_base: AmplitudeResponse,
    bits_list: list[int],
    lambda_list: list[int],
    loading_factor: float,
) -> list[RDRow]:
    """Rate-distortion table over the (bits, oversampling) product grid.

    Rows are ordered by bits, then oversampling factor. Each row also
    carries the relative residual of the oversampling collapse identity
    D(nu, lam) = D(nu^lam, 1), a cheap full-pipeline self-check.
    """
    if not bits_list or not lambda_list:
        raise ValueError("bits_list and lambda_list must be nonempty")
    rows = []
    for bits in sorted(set(int(b) for b in bits_list)):
        gamma = gamma_from_bits(bits, loading_factor)
        nu = gamma + 1.0
        for lam in sorted(set(int(v) for v in lambda_list)):
            design = design_for_nu(p_base, nu, lam)
            d_collapsed = design_for_nu(p_base, nu**lam, 1).distortion if lam > 1 else design.distortion
            p_lam = oversample_response(p_base, lam)
            rows.append(
                RDRow(
                    bits=bits,
                    oversampling=lam,
                    gamma=gamma,
                    distortion=design.distortion,
                    d_uniform=l2_norm_sq(p_lam) / gamma,
                    bound=upper_bound(nu, lam, p_base),
                    identity_residual=abs(design.distortion - d_collapsed) / design.distortion,
                )
            )
    return rows
