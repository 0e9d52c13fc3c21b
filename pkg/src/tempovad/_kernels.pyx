# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled membrane-voltage kernels.

Both routines evaluate the closed-form double-exponential PSP sum on the
grid ``t_k = k * dt``. The decaying sums are propagated with exact per-step
decay factors, and each input event enters with its exact exponential, so
the only error is floating-point rounding.

``times`` must be sorted ascending; ``weights[i]`` is the weight of the
synapse that received event ``i``.
"""
from libc.math cimport exp

import numpy as np


def voltage_grid(const double[::1] times, const double[::1] weights,
                 Py_ssize_t n_steps, double dt, double tau, double tau_s,
                 double v0, double v_rest, double v_min):
    """Free membrane voltage on the grid, clamped below at ``v_min``."""
    cdef Py_ssize_t n_ev = times.shape[0]
    cdef Py_ssize_t k, j = 0
    cdef double t, a = 0.0, b = 0.0, v
    cdef double da = exp(-dt / tau), db = exp(-dt / tau_s)
    out = np.empty(n_steps, dtype=np.float64)
    cdef double[::1] o = out
    for k in range(n_steps):
        t = k * dt
        a *= da
        b *= db
        while j < n_ev and times[j] <= t:
            a += weights[j] * exp(-(t - times[j]) / tau)
            b += weights[j] * exp(-(t - times[j]) / tau_s)
            j += 1
        v = v0 * (a - b) + v_rest
        o[k] = v if v > v_min else v_min
    return out


def simulate_grid(const double[::1] times, const double[::1] weights,
                  Py_ssize_t n_steps, double dt, double tau, double tau_s,
                  double v0, double v_rest, double v_min, double threshold):
    """Run until the first threshold crossing.

    Returns ``(spike_idx, max_idx, v_max)``; ``spike_idx`` is -1 without a
    spike. The maximum covers grid points up to and including the spike;
    ties resolve to the latest grid point.
    """
    cdef Py_ssize_t n_ev = times.shape[0]
    cdef Py_ssize_t k, j = 0, max_idx = 0
    cdef double t, a = 0.0, b = 0.0, v
    cdef double da = exp(-dt / tau), db = exp(-dt / tau_s)
    cdef double v_max = -1e300
    for k in range(n_steps):
        t = k * dt
        a *= da
        b *= db
        while j < n_ev and times[j] <= t:
            a += weights[j] * exp(-(t - times[j]) / tau)
            b += weights[j] * exp(-(t - times[j]) / tau_s)
            j += 1
        v = v0 * (a - b) + v_rest
        if v < v_min:
            v = v_min
        if v >= v_max:
            v_max = v
            max_idx = k
        if v >= threshold:
            return k, max_idx, v_max
    return -1, max_idx, v_max
