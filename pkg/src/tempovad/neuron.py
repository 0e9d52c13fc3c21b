"""LIF/tempotron output neurons driven by double-exponential PSPs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .encoder import SpikePattern

W_MIN, W_MAX = -1.5, 1.5


@dataclass(frozen=True)
class NeuronParams:
    """Membrane parameters (volts and milliseconds).

    By default the kernel amplitude is chosen so that a unit weight yields a
    unit PSP peak. ``v0_literal=True`` uses an amplitude of exactly 1 instead.
    """

    v_rest: float = 0.0
    v_thr: float = 1.0
    tau: float = 15.0
    tau_s: float = 3.75
    v_min: float = -1.5
    v0_literal: bool = False
    dt: float = 0.1

    def __post_init__(self):
        if not self.tau > self.tau_s > 0:
            raise ValueError("require tau > tau_s > 0")
        if not self.v_thr > self.v_rest:
            raise ValueError("require v_thr > v_rest")
        if self.v_min > self.v_rest:
            raise ValueError("require v_min <= v_rest")
        if self.dt <= 0:
            raise ValueError("dt must be positive")

    @property
    def v0(self) -> float:
        if self.v0_literal:
            return 1.0
        return 1.0 / kernel_peak(self, raw=True)[1]


@dataclass(frozen=True)
class NeuronTrace:
    first_spike: Optional[float]
    v_max: float
    t_max: float

    @property
    def crossed_threshold(self) -> bool:
        return self.first_spike is not None


def kernel_peak(params: NeuronParams = NeuronParams(), raw: bool = False) -> tuple[float, float]:
    """Time and height of the PSP kernel maximum.

    With ``raw=True`` the height is for unit amplitude, otherwise it uses
    ``params.v0``.
    """
    tau, tau_s = params.tau, params.tau_s
    if tau == tau_s:
        raise ValueError("kernel degenerates for tau == tau_s")
    t_peak = tau * tau_s / (tau - tau_s) * math.log(tau / tau_s)
    k = math.exp(-t_peak / tau) - math.exp(-t_peak / tau_s)
    return t_peak, k if raw else params.v0 * k


def kernel(dt, params: NeuronParams = NeuronParams()):
    """PSP kernel value for lag(s) ``dt``; zero for non-positive lags."""
    lag = np.asarray(dt, dtype=np.float64)
    pos = np.maximum(lag, 0.0)
    k = params.v0 * (np.exp(-pos / params.tau) - np.exp(-pos / params.tau_s))
    k = np.where(lag > 0, k, 0.0)
    return float(k) if k.ndim == 0 else k


def n_grid(duration: float, params: NeuronParams) -> int:
    return int(round(duration / params.dt)) + 1


def event_weights(pattern: SpikePattern, weights: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(weights, dtype=np.float64)[pattern.neuron_ids])


def simulate(pattern: SpikePattern, weights: np.ndarray, params: NeuronParams = NeuronParams(),
             threshold_shift: float = 0.0) -> NeuronTrace:
    """Single-spike simulation on the ``params.dt`` grid.

    Integration stops at the first grid point where the voltage reaches
    ``v_thr + threshold_shift``. ``v_max``/``t_max`` cover the interval up
    to and including that point.
    """
    times = np.ascontiguousarray(pattern.times, dtype=np.float64)
    k, m, v_max = _backend.simulate_grid(
        times, event_weights(pattern, weights), n_grid(pattern.duration, params), params.dt,
        params.tau, params.tau_s, params.v0, params.v_rest, params.v_min,
        params.v_thr + threshold_shift,
    )
    return NeuronTrace(None if k < 0 else k * params.dt, float(v_max), m * params.dt)


def voltage_trace(pattern: SpikePattern, weights: np.ndarray,
                  params: NeuronParams = NeuronParams()) -> tuple[np.ndarray, np.ndarray]:
    """Grid times and free (no threshold, no reset) voltage, clamped at ``v_min``."""
    n = n_grid(pattern.duration, params)
    v = _backend.voltage_grid(
        np.ascontiguousarray(pattern.times, dtype=np.float64), event_weights(pattern, weights),
        n, params.dt, params.tau, params.tau_s, params.v0, params.v_rest, params.v_min,
    )
    return np.arange(n) * params.dt, np.asarray(v)
