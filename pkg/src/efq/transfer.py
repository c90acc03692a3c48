"""Transfer-function containers and frequency/impulse responses.

Two immutable rational-filter types live here: ``ContinuousTF`` for the
analog plant model (polynomials in s, plus the sampling period it will be
discretized with) and ``RationalDiscreteTF`` for discrete-time filters
(polynomials in z^-1, ascending delay). Helpers evaluate complex frequency
responses, impulse responses, and JSON round-trips.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .errors import NumericalError

# Poles are accepted as stable only strictly inside the unit circle, with a
# guard band against root-finding round-off on marginally stable fits.
STABILITY_MARGIN = 1e-9


def _as_float_tuple(coeffs) -> tuple[float, ...]:
    arr = np.asarray(coeffs, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("coefficient list must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coefficient list contains non-finite values")
    return tuple(float(c) for c in arr)


@dataclass(frozen=True)
class ContinuousTF:
    """Proper, stable rational function of s with an associated sampling period.

    Coefficients are in descending powers of s, matching the usual
    polynomial convention.
    """

    num: tuple[float, ...]
    den: tuple[float, ...]
    sample_period: float

    def __init__(self, num, den, sample_period: float):
        object.__setattr__(self, "num", _as_float_tuple(num))
        object.__setattr__(self, "den", _as_float_tuple(den))
        object.__setattr__(self, "sample_period", float(sample_period))
        if self.sample_period <= 0:
            raise ValueError("sample_period must be positive")
        if len(self.num) > len(self.den):
            raise ValueError("transfer function must be proper (deg num <= deg den)")
        if self.den[0] == 0:
            raise ValueError("leading denominator coefficient must be nonzero")
        poles = np.roots(self.den)
        if poles.size and np.max(poles.real) >= 0:
            raise ValueError("continuous-time model must be stable (poles in the open left half-plane)")

    def eval(self, s: complex | np.ndarray) -> complex | np.ndarray:
        """Evaluate the rational function at (arrays of) complex s."""
        return np.polyval(self.num, s) / np.polyval(self.den, s)


@dataclass(frozen=True)
class RationalDiscreteTF:
    """Stable rational function of z^-1; coefficients ascending in delay.

    The representation is canonical: numerator and denominator are jointly
    scaled so den[0] == 1. FIR filters are the den == (1,) special case.
    """

    num: tuple[float, ...]
    den: tuple[float, ...]

    def __init__(self, num, den=(1.0,)):
        num_t = _as_float_tuple(num)
        den_t = _as_float_tuple(den)
        if den_t[0] == 0:
            raise ValueError("leading denominator coefficient must be nonzero")
        if den_t[0] != 1.0:
            scale = den_t[0]
            num_t = tuple(c / scale for c in num_t)
            den_t = tuple(c / scale for c in den_t)
        object.__setattr__(self, "num", num_t)
        object.__setattr__(self, "den", den_t)
        if len(den_t) > 1:
            poles = np.roots(den_t)
            if poles.size and np.max(np.abs(poles)) >= 1.0 - STABILITY_MARGIN:
                raise ValueError(
                    "discrete-time filter must be stable "
                    f"(pole magnitude {np.max(np.abs(poles)):.12g} exceeds {1.0 - STABILITY_MARGIN})"
                )

    @property
    def order(self) -> int:
        return max(len(self.num), len(self.den)) - 1

    @property
    def is_fir(self) -> bool:
        return len(self.den) == 1

    def eval(self, z_inv: complex | np.ndarray) -> complex | np.ndarray:
        """Evaluate at (arrays of) z^-1 values, e.g. z_inv = exp(-1j*omega)."""
        num = np.polyval(self.num[::-1], z_inv)
        den = np.polyval(self.den[::-1], z_inv)
        return num / den


def frequency_response(tf: RationalDiscreteTF, omegas: np.ndarray) -> np.ndarray:
    """Complex response H(e^{j*omega}) at the given radian frequencies."""
    z_inv = np.exp(-1j * np.asarray(omegas, dtype=float))
    return tf.eval(z_inv)


def impulse_response(tf: RationalDiscreteTF, length: int) -> np.ndarray:
    """First `length` impulse-response samples by direct recursion."""
    if length < 1:
        raise ValueError("length must be positive")
    delta = np.zeros(length)
    delta[0] = 1.0
    return signal.lfilter(tf.num, tf.den, delta)


def impulse_response_truncated(
    tf: RationalDiscreteTF, rel_tail_tol: float = 1e-14, max_length: int = 16384
) -> np.ndarray:
    """Impulse response truncated where the geometric tail bound drops below
    `rel_tail_tol` of the accumulated energy, capped at `max_length` samples.

    The bound uses the largest pole magnitude rho: beyond sample n the
    remaining energy is at most (max recent |h|)^2 * rho^2/(1-rho^2) scaled
    by the squared recent-window envelope, which is conservative for any
    stable rational filter once n exceeds the numerator length.
    """
    if tf.is_fir:
        return np.asarray(tf.num, dtype=float)
    poles = np.roots(tf.den)
    rho = float(np.max(np.abs(poles)))
    rho = min(rho, 1.0 - STABILITY_MARGIN)
    window = max(len(tf.den) - 1, 1)
    length = max(64, 4 * (len(tf.num) + len(tf.den)))
    while True:
        n = min(length, max_length)
        h = impulse_response(tf, n)
        energy = float(np.dot(h, h))
        if energy == 0.0:
            raise NumericalError("impulse response identically zero; degenerate filter")
        tail_env = float(np.max(np.abs(h[-window:])))
        # Conservative geometric tail: |h_k| <= tail_env * rho^(k-n) past the
        # last window, so tail energy <= window*tail_env^2*rho^2/(1-rho^2).
        tail_bound = window * tail_env * tail_env * rho * rho / (1.0 - rho * rho)
        if n >= max_length or tail_bound <= rel_tail_tol * energy:
            return h
        length *= 2


def tf_to_json_dict(tf: RationalDiscreteTF) -> dict:
    """Serialize as {num: [...], den: [...]} with exact binary64 round-trip."""
    return {"num": list(tf.num), "den": list(tf.den)}


def tf_from_json_dict(obj: dict) -> RationalDiscreteTF:
    return RationalDiscreteTF(obj["num"], obj["den"])


def tf_to_json(tf: RationalDiscreteTF) -> str:
    return json.dumps(tf_to_json_dict(tf))


def tf_from_json(text: str) -> RationalDiscreteTF:
    return tf_from_json_dict(json.loads(text))
