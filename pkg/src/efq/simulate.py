"""Time-domain validation of the shaped quantizer loop.

The loop under test: a mid-rise quantizer whose input is the signal plus
its own past quantization errors filtered through R[z] - 1 (strictly
causal because R has unity head). Per sample,

    u_k = x_k + (R[z]-1) w | past,   v_k = Q(u_k),   w_k = v_k - u_k,

so the quantized output satisfies v = x + R[z] w identically, and the final
output error after the plant is P[z](v - x) = P[z] R[z] w. This module
generates test inputs with prescribed second-order statistics, runs the
loop sample by sample, and compares measured error power against the
analytic prediction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .design import QuantizerSpec
from .fitting import FIRFilter, as_discrete_tf
from .transfer import ContinuousTF, RationalDiscreteTF

HEAD_TOL = 1e-12


@dataclass(frozen=True)
class MidRiseQuantizer:
    """Uniform mid-rise quantizer: outputs odd multiples of step/2, saturating
    at +-saturation; inputs beyond saturation + step/2 count as overloads."""

    step: float
    saturation: float

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.saturation <= 0:
            raise ValueError("saturation must be positive")
        # The clip value must itself be an output level (odd multiple of
        # step/2), otherwise saturated samples fall off the lattice.
        ratio = self.saturation / (self.step / 2.0)
        nearest_odd = 2.0 * round((ratio - 1.0) / 2.0) + 1.0
        if not math.isclose(ratio, nearest_odd, rel_tol=1e-9, abs_tol=1e-12):
            raise ValueError(
                f"saturation must be an odd multiple of step/2, got ratio {ratio!r}"
            )

    @classmethod
    def from_spec(cls, spec: QuantizerSpec) -> "MidRiseQuantizer":
        return cls(step=spec.step, saturation=spec.saturation)


def quantize_midrise(xi: float, q: MidRiseQuantizer) -> tuple[float, bool]:
    """Quantize one sample; returns (level, overloaded)."""
    d = q.step
    level = (math.floor(xi / d) + 0.5) * d
    if level > q.saturation:
        return q.saturation, xi > q.saturation + 0.5 * d
    if level < -q.saturation:
        return -q.saturation, xi < -(q.saturation + 0.5 * d)
    return level, False


@dataclass(frozen=True)
class SignalModel:
    """Test-input description: colored (first-order analog spectrum sampled
    at the loop rate) or white, unit variance, seeded."""

    kind: str
    seed: int
    length: int
    ct_pole: float = 2.62
    variance: float = 1.0

    def __post_init__(self):
        if self.kind not in ("colored", "white"):
            raise ValueError(f"kind must be 'colored' or 'white', got {self.kind!r}")
        if self.length < 1:
            raise ValueError("length must be positive")
        if self.ct_pole <= 0:
            raise ValueError("ct_pole must be positive")
        if self.variance <= 0:
            raise ValueError("variance must be positive")


@dataclass(frozen=True)
class LoopTraces:
    """Raw per-sample records of one feedback-loop run."""

    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    overload: np.ndarray


@dataclass(frozen=True)
class SimulationResult:
    """Summary statistics of one loop run against its analytic prediction."""

    empirical_mse: float
    predicted_mse: float
    overload_count: int
    overload_rate: float
    w_variance: float
    w_autocorr: tuple[float, ...]
    sigma_u_sq: float


def gen_colored_input(model: SignalModel, sample_period: float) -> np.ndarray:
    """First-order autoregressive Gaussian input with pole exp(-ct_pole*T),
    started at stationarity and rescaled to exact target sample variance."""
    if model.kind != "colored":
        raise ValueError("model.kind must be 'colored'")
    if sample_period <= 0:
        raise ValueError("sample_period must be positive")
    rng = np.random.default_rng(model.seed)
    pole = math.exp(-model.ct_pole * sample_period)
    x_prev = rng.standard_normal()
    innov = rng.standard_normal(model.length)
    scale = math.sqrt(1.0 - pole * pole)
    x, _ = signal.lfilter([scale], [1.0, -pole], innov, zi=np.array([pole * x_prev]))
    sd = float(np.std(x))
    if sd == 0.0:
        raise ValueError("degenerate input sequence (zero variance)")
    return x * (math.sqrt(model.variance) / sd)


def gen_white_input(model: SignalModel) -> np.ndarray:
    """Seeded zero-mean Gaussian sequence, rescaled to exact sample variance."""
    if model.kind != "white":
        raise ValueError("model.kind must be 'white'")
    rng = np.random.default_rng(model.seed)
    x = rng.standard_normal(model.length)
    sd = float(np.std(x))
    if sd == 0.0:
        raise ValueError("degenerate input sequence (zero variance)")
    return x * (math.sqrt(model.variance) / sd)


def gen_input(model: SignalModel, sample_period: float) -> np.ndarray:
    if model.kind == "colored":
        return gen_colored_input(model, sample_period)
    return gen_white_input(model)


def discretize_plant(plant: ContinuousTF, oversampling: int = 1) -> RationalDiscreteTF:
    """Bilinear-transform discretization at period sample_period/oversampling.

    DC gain is preserved exactly and stable analog poles map strictly inside
    the unit circle. The frequency axis is warped (tan-compressed), so the
    discrete magnitude drifts from the exact frequency-mapped response as
    omega grows; design-side spectra use the exact map instead.
    """
    if oversampling < 1 or int(oversampling) != oversampling:
        raise ValueError("oversampling factor must be a positive integer")
    fs = oversampling / plant.sample_period
    num_d, den_d = signal.bilinear(plant.num, plant.den, fs=fs)
    return RationalDiscreteTF(num_d, den_d)


def run_feedback_loop(
    x: np.ndarray, r: RationalDiscreteTF | FIRFilter, q: MidRiseQuantizer
) -> LoopTraces:
    """Run the error-feedback loop sample by sample.

    The feedback filter R[z] - 1 is realized in transposed direct form II;
    its state update consumes only past errors (R's unity head makes the
    difference strictly causal), enforced structurally: the current output
    depends only on stored state.
    """
    tf = as_discrete_tf(r)
    m = tf.order
    num = list(tf.num) + [0.0] * (m + 1 - len(tf.num))
    den = list(tf.den) + [0.0] * (m + 1 - len(tf.den))
    if abs(num[0] - 1.0) > HEAD_TOL:
        raise ValueError(f"feedback filter must have unity head, got {num[0]!r}")
    f = [num[i] - den[i] for i in range(m + 1)]  # R - 1, ascending delay; f[0] = 0

    x_arr = np.ascontiguousarray(np.asarray(x, dtype=float))
    xs = x_arr.tolist()
    n = len(xs)
    u_out = [0.0] * n
    v_out = [0.0] * n
    w_out = [0.0] * n
    ov_out = bytearray(n)

    d = q.step
    sat = q.saturation
    ov_edge = sat + 0.5 * d
    floor = math.floor
    state = [0.0] * (m + 2)  # state[1..m] live, state[m+1] stays zero

    for k in range(n):
        y = state[1]
        u = xs[k] + y
        level = (floor(u / d) + 0.5) * d
        if level > sat:
            level = sat
            if u > ov_edge:
                ov_out[k] = 1
        elif level < -sat:
            level = -sat
            if u < -ov_edge:
                ov_out[k] = 1
        w = level - u
        for i in range(1, m):
            state[i] = f[i] * w - den[i] * y + state[i + 1]
        if m >= 1:
            state[m] = f[m] * w - den[m] * y
        u_out[k] = u
        v_out[k] = level
        w_out[k] = w

    return LoopTraces(
        x=x_arr,
        u=np.array(u_out),
        v=np.array(v_out),
        w=np.array(w_out),
        overload=np.array(ov_out, dtype=bool),
    )


def filter_memory_estimate(tf: RationalDiscreteTF) -> int:
    """Rough impulse-response duration: max of the tap count and the slowest
    pole's e-folding time in samples."""
    memory = max(len(tf.num), len(tf.den))
    if len(tf.den) > 1:
        poles = np.abs(np.roots(tf.den))
        rho = float(np.max(poles)) if poles.size else 0.0
        if 0.0 < rho < 1.0:
            memory = max(memory, int(math.ceil(-1.0 / math.log(rho))))
    return memory


def empirical_mse(v: np.ndarray, x: np.ndarray, plant_d: RationalDiscreteTF) -> float:
    """Sample variance of the plant-filtered reconstruction error P[z](v-x),
    after discarding a transient burn-in of max(1000, 20x filter memory)."""
    v = np.asarray(v, dtype=float)
    x = np.asarray(x, dtype=float)
    if v.shape != x.shape:
        raise ValueError("v and x must have equal length")
    burn = max(1000, 20 * filter_memory_estimate(plant_d))
    if len(v) <= 2 * burn:
        raise ValueError(f"need more than {2 * burn} samples to discard a {burn}-sample burn-in")
    err = signal.lfilter(plant_d.num, plant_d.den, v - x)
    return float(np.var(err[burn:]))


def autocorrelations(w: np.ndarray, max_lag: int) -> np.ndarray:
    """Normalized sample autocorrelation at lags 1..max_lag."""
    w = np.asarray(w, dtype=float)
    if max_lag < 1:
        raise ValueError("max_lag must be at least 1")
    if len(w) <= max_lag + 1:
        raise ValueError("sequence too short for the requested number of lags")
    c0 = float(np.dot(w, w))
    if c0 == 0.0:
        return np.zeros(max_lag)
    return np.array([float(np.dot(w[:-k], w[k:])) / c0 for k in range(1, max_lag + 1)])


def whiteness_stat(w: np.ndarray, max_lag: int) -> float:
    """Largest absolute normalized autocorrelation over lags 1..max_lag;
    near 4/sqrt(len(w)) or below for a white sequence."""
    return float(np.max(np.abs(autocorrelations(w, max_lag))))


def loop_identity_residual(traces: LoopTraces, r: RationalDiscreteTF | FIRFilter) -> float:
    """Max per-sample deviation of v - x from R[z] applied to the recorded
    errors; zero up to round-off by construction of the loop."""
    tf = as_discrete_tf(r)
    shaped = signal.lfilter(tf.num, tf.den, traces.w)
    return float(np.max(np.abs(traces.v - traces.x - shaped)))


def predicted_loop_variances(
    norm_r_sq: float, gamma: float, sigma_x_sq: float = 1.0
) -> tuple[float, float]:
    """(sigma_u^2, sigma_w^2) implied by the variance balance at a unity-head
    shaper of squared norm ||R||^2: sigma_w^2 = sigma_x^2/(nu - ||R||^2) and
    sigma_u^2 = sigma_x^2 + (||R||^2 - 1) sigma_w^2, using ||R-1||^2 =
    ||R||^2 - 1 for unity-head filters."""
    nu = gamma + 1.0
    if norm_r_sq >= nu:
        raise ValueError(f"infeasible shaper: ||R||^2 = {norm_r_sq:.6g} >= nu = {nu:.6g}")
    sigma_w_sq = sigma_x_sq / (nu - norm_r_sq)
    sigma_u_sq = sigma_x_sq + (norm_r_sq - 1.0) * sigma_w_sq
    return sigma_u_sq, sigma_w_sq


def summarize_run(
    traces: LoopTraces,
    plant_d: RationalDiscreteTF,
    predicted_mse: float,
    max_lag: int = 20,
) -> SimulationResult:
    """Reduce loop traces to the comparison statistics."""
    count = int(np.count_nonzero(traces.overload))
    return SimulationResult(
        empirical_mse=empirical_mse(traces.v, traces.x, plant_d),
        predicted_mse=float(predicted_mse),
        overload_count=count,
        overload_rate=count / len(traces.x),
        w_variance=float(np.var(traces.w)),
        w_autocorr=tuple(autocorrelations(traces.w, max_lag)),
        sigma_u_sq=float(np.var(traces.u)),
    )
