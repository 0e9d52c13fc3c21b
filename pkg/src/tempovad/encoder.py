"""Bin encoding: one timed spike per frequency band.

Each band owns ``n_in`` input neurons, one per equal-width energy bin. The
bin a band's value falls into selects the neuron; higher bins fire earlier,
and within a bin the spike is delayed in proportion to the distance from
the bin's lower edge.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class EncoderConfig:
    n_in: int = 10
    t_interval: float = 7.5
    offset: float = 5.0
    jitter_divisor: float = 1.5
    # offset + n_in*t_interval + 5*tau (15 ms) = 155 ms, rounded up
    duration: float = 160.0

    def __post_init__(self):
        if self.n_in < 2:
            raise ValueError("n_in must be at least 2")
        if self.t_interval <= 0:
            raise ValueError("t_interval must be positive")
        if self.offset < 0:
            raise ValueError("offset must be non-negative")
        if self.jitter_divisor <= 0:
            raise ValueError("jitter_divisor must be positive")
        if self.duration < self.latest_spike:
            raise ValueError("duration must cover the latest possible spike")

    @property
    def latest_spike(self) -> float:
        return (self.n_in - 1) * self.t_interval + self.offset + self.t_interval / self.jitter_divisor


class SpikeEvent(NamedTuple):
    neuron_id: int
    time: float


@dataclass(frozen=True)
class SpikePattern:
    """Input spikes of one frame, sorted by time then neuron id."""

    neuron_ids: np.ndarray
    times: np.ndarray
    duration: float

    def __len__(self):
        return self.times.shape[0]

    @property
    def events(self) -> list[SpikeEvent]:
        return [SpikeEvent(int(n), float(t)) for n, t in zip(self.neuron_ids, self.times)]


def _check_range(values: np.ndarray) -> None:
    if not np.all((values >= 0.0) & (values <= 1.0)):
        bad = values[~((values >= 0.0) & (values <= 1.0))]
        raise ValueError(f"encoder input must be normalized to [0, 1]; got {bad[:3]}")


def bin_indices(values, cfg: EncoderConfig = EncoderConfig()) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    _check_range(v)
    return np.minimum(np.floor(v * cfg.n_in), cfg.n_in - 1).astype(np.int64)


def bin_index(val: float, cfg: EncoderConfig = EncoderConfig()) -> int:
    """Index of the energy bin in ``[0, n_in)``; the top bin is closed at 1.0."""
    return int(bin_indices(np.array([val]), cfg)[0])


def spike_times(values, cfg: EncoderConfig = EncoderConfig()) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    n = bin_indices(v, cfg)
    jitter = (v * cfg.n_in - n) * cfg.t_interval / cfg.jitter_divisor
    return (cfg.n_in - 1 - n) * cfg.t_interval + jitter + cfg.offset


def spike_time(val: float, cfg: EncoderConfig = EncoderConfig()) -> float:
    """Spike time in ms for a normalized band value."""
    return float(spike_times(np.array([val]), cfg)[0])


def encode_frame(values, cfg: EncoderConfig = EncoderConfig()) -> SpikePattern:
    """Encode one normalized frame (or a :class:`FeatureFrame`) as a spike pattern."""
    v = np.asarray(getattr(values, "values", values), dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("encode_frame expects a single frame")
    idx = bin_indices(v, cfg)
    times = spike_times(v, cfg)
    ids = np.arange(v.shape[0]) * cfg.n_in + idx
    order = np.lexsort((ids, times))
    return SpikePattern(ids[order], times[order], cfg.duration)


def decode_pattern(pattern: SpikePattern, n_bands: int, cfg: EncoderConfig = EncoderConfig()) -> np.ndarray:
    """Invert the encoding, recovering each band's value from its spike."""
    out = np.full(n_bands, np.nan)
    bands, n = np.divmod(pattern.neuron_ids, cfg.n_in)
    lead = pattern.times - cfg.offset - (cfg.n_in - 1 - n) * cfg.t_interval
    out[bands] = (n + lead * cfg.jitter_divisor / cfg.t_interval) / cfg.n_in
    return out
