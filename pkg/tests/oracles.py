"""Brute-force reference implementations used as independent test oracles.

Plain Python loops over events and grid points with ``math.exp``; nothing
here imports the package's numerical code.
"""
import math

TAU, TAU_S = 15.0, 3.75


def t_peak(tau=TAU, tau_s=TAU_S):
    # locate the kernel maximum by golden-section search instead of the closed form
    f = lambda t: math.exp(-t / tau) - math.exp(-t / tau_s)
    a, b = 0.0, 60.0
    g = (math.sqrt(5) - 1) / 2
    for _ in range(200):
        c, d = b - g * (b - a), a + g * (b - a)
        if f(c) > f(d):
            b = d
        else:
            a = c
    t = (a + b) / 2
    return t, f(t)


def psp(lag, v0, tau=TAU, tau_s=TAU_S):
    if lag <= 0:
        return 0.0
    return v0 * (math.exp(-lag / tau) - math.exp(-lag / tau_s))


def voltage(t, events, weights, v0, v_rest=0.0):
    """events: list of (synapse, time)."""
    return sum(weights[j] * psp(t - tj, v0) for j, tj in events) + v_rest


def simulate(events, weights, v0, threshold, duration=160.0, dt=0.1, v_min=-1.5):
    """First grid crossing, and the latest maximum up to and including it."""
    n = int(round(duration / dt)) + 1
    best, t_best = -math.inf, 0.0
    for k in range(n):
        t = k * dt
        v = max(voltage(t, events, weights, v0), v_min)
        if v >= best:
            best, t_best = v, t
        if v >= threshold:
            return t, best, t_best
    return None, best, t_best


def tempotron_deltas(events, weights_v, weights_n, label, lam, v0, margin=0.5, thr=1.0,
                     duration=160.0, dt=0.1):
    """One max-margin tempotron step for both neurons, as lists of deltas."""
    out = []
    for weights, is_target in ((weights_v, label == "V"), (weights_n, label == "N")):
        shift = margin if is_target else -margin
        spike, _, t_max = simulate(events, weights, v0, thr + shift, duration, dt)
        delta = [0.0] * len(weights)
        if is_target and spike is None:
            for j, tj in events:
                if tj < t_max:
                    delta[j] += lam * psp(t_max - tj, v0)
        elif not is_target and spike is not None:
            for j, tj in events:
                if tj < spike:
                    delta[j] -= lam * psp(spike - tj, v0)
        out.append(delta)
    return out


def bin_encode(values, n_in=10, t_interval=7.5, offset=5.0, divisor=1.5):
    """Scalar reimplementation of the bin encoder: sorted (neuron_id, time) pairs."""
    events = []
    for band, val in enumerate(values):
        n = min(math.floor(val * n_in), n_in - 1)
        t = (n_in - 1 - n) * t_interval + (val * n_in - n) * t_interval / divisor + offset
        events.append((band * n_in + n, t))
    return sorted(events, key=lambda e: (e[1], e[0]))
