"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and semantics; used when the extension is not built or when
``TEMPOVAD_PURE=1`` is set.
"""
import numpy as np


def _psp_matrix(times, n_steps, dt, tau, tau_s):
    t = np.arange(n_steps) * dt
    lag = np.maximum(t[:, None] - np.asarray(times)[None, :], 0.0)
    return np.exp(-lag / tau) - np.exp(-lag / tau_s)


def voltage_grid(times, weights, n_steps, dt, tau, tau_s, v0, v_rest, v_min):
    v = v0 * (_psp_matrix(times, n_steps, dt, tau, tau_s) @ np.asarray(weights)) + v_rest
    return np.maximum(v, v_min)


def _last_argmax(v):
    return v.shape[0] - 1 - int(np.argmax(v[::-1]))


def simulate_grid(times, weights, n_steps, dt, tau, tau_s, v0, v_rest, v_min, threshold):
    v = voltage_grid(times, weights, n_steps, dt, tau, tau_s, v0, v_rest, v_min)
    hits = np.flatnonzero(v >= threshold)
    if hits.size:
        k = int(hits[0])
        head = v[: k + 1]
        m = _last_argmax(head)
        return k, m, float(head[m])
    m = _last_argmax(v)
    return -1, m, float(v[m])
