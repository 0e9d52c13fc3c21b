"""Dynamic-power estimate from per-frame spike event counts.

Only synaptic operations and neuron updates are costed; feature extraction
and static power are excluded, so the figure is a lower bound.
"""
from __future__ import annotations

from dataclasses import dataclass

from .encoder import SpikePattern

N_INPUTS = 1280
N_OUTPUTS = 2
FRAMES_PER_S = 50.0

LOIHI_PROVENANCE = (
    "Loihi silicon measurements (Davies et al., IEEE Micro 38(1), 2018, Table 1): "
    "synaptic spike op 23.6 pJ, neuron update 81 pJ active / 52 pJ inactive"
)


@dataclass(frozen=True)
class EventCounts:
    sop_per_frame: int
    active_updates: int
    inactive_updates: int
    frames_per_s: float = FRAMES_PER_S

    def __post_init__(self):
        if min(self.sop_per_frame, self.active_updates, self.inactive_updates) < 0:
            raise ValueError("event counts must be non-negative")

    @property
    def total_neurons(self) -> int:
        return self.active_updates + self.inactive_updates


@dataclass(frozen=True)
class EnergyConstants:
    e_sop: float = 23.6e-12
    e_update_active: float = 81e-12
    e_update_inactive: float = 52e-12
    provenance: str = LOIHI_PROVENANCE

    @classmethod
    def single_update(cls, e_sop: float, e_update: float, provenance: str = "user supplied"):
        """Constants with one shared cost for active and inactive updates."""
        return cls(e_sop, e_update, e_update, provenance)


def count_events(pattern: SpikePattern | int, output_spikes: int, n_inputs: int = N_INPUTS,
                 n_outputs: int = N_OUTPUTS, frames_per_s: float = FRAMES_PER_S,
                 count_output_spike: bool = True) -> EventCounts:
    """Per-frame event counts for a fully connected ``n_inputs x n_outputs`` layer.

    Each input spike costs one SOP per output neuron. With
    ``count_output_spike`` one additional event per output neuron is booked,
    which is the convention giving 129 x 2 SOPs for a 128-spike frame; set it
    False for the plain ``input_spikes * n_outputs`` count.
    """
    n_spikes = pattern if isinstance(pattern, int) else len(pattern)
    per_output = n_spikes + 1 if count_output_spike else n_spikes
    active = n_spikes + output_spikes
    total = n_inputs + n_outputs
    if active > total:
        raise ValueError("more active neurons than the topology holds")
    return EventCounts(per_output * n_outputs, active, total - active, frames_per_s)


def reference_counts() -> EventCounts:
    """128 input spikes and one output spike per frame."""
    return count_events(128, 1)


def estimate_power(counts: EventCounts, consts: EnergyConstants = EnergyConstants()) -> float:
    """Watts: per-frame event energy times the frame rate."""
    per_frame = (consts.e_sop * counts.sop_per_frame
                 + consts.e_update_active * counts.active_updates
                 + consts.e_update_inactive * counts.inactive_updates)
    return per_frame * counts.frames_per_s


def format_table(counts: EventCounts, consts: EnergyConstants) -> str:
    watts = estimate_power(counts, consts)
    rows = [
        ("SOP per frame", f"{counts.sop_per_frame}"),
        ("active neuron updates per frame", f"{counts.active_updates}"),
        ("inactive neuron updates per frame", f"{counts.inactive_updates}"),
        ("frames per second", f"{counts.frames_per_s:g}"),
        ("E_sop [J]", f"{consts.e_sop:.4g}"),
        ("E_update active [J]", f"{consts.e_update_active:.4g}"),
        ("E_update inactive [J]", f"{consts.e_update_inactive:.4g}"),
        ("dynamic power [W] (lower bound)", f"{watts:.4g}"),
        ("dynamic power [uW] (lower bound)", f"{watts * 1e6:.3f}"),
    ]
    width = max(len(k) for k, _ in rows)
    lines = [f"{k:<{width}}  {v}" for k, v in rows]
    lines.append(f"constants: {consts.provenance}")
    return "\n".join(lines)
