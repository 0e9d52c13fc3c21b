"""Frame decisions, 5-frame smoothing and the end-to-end classify path."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .encoder import encode_frame
from .features import AudioClip, FeatureConfig, Label, extract, normalize
from .neuron import NeuronTrace, simulate

SMOOTH_WINDOW = 5


@dataclass(frozen=True)
class RawPrediction:
    label: Label
    basis: str  # "first_spike" or "voltage_fallback"
    v_first_spike: Optional[float]
    n_first_spike: Optional[float]
    v_max: float
    n_max: float


def decide_frame(trace_v: NeuronTrace, trace_n: NeuronTrace) -> RawPrediction:
    """Earliest spike wins; with no spikes the higher voltage peak wins.

    Exact ties go to NoVoice.
    """
    tv, tn = trace_v.first_spike, trace_n.first_spike
    if tv is not None or tn is not None:
        basis = "first_spike"
        if tn is None:
            voice = True
        elif tv is None:
            voice = False
        else:
            voice = tv < tn
    else:
        basis = "voltage_fallback"
        voice = trace_v.v_max > trace_n.v_max
    return RawPrediction(Label.VOICE if voice else Label.NOVOICE, basis, tv, tn,
                         trace_v.v_max, trace_n.v_max)


def smooth(raw: Sequence) -> list[Label]:
    """Causal majority vote over each frame and up to four predecessors.

    Near the stream start the window shrinks; an even window drops its
    oldest frame so every vote has a strict majority.
    """
    labels = [r.label if isinstance(r, RawPrediction) else Label(r) for r in raw]
    voice = np.array([lab is Label.VOICE for lab in labels], dtype=np.int64)
    out = []
    for i in range(len(voice)):
        w = min(SMOOTH_WINDOW, i + 1)
        if w % 2 == 0:
            w -= 1
        out.append(Label.VOICE if 2 * voice[i - w + 1: i + 1].sum() > w else Label.NOVOICE)
    return out


@dataclass
class Classification:
    raw: list[RawPrediction]
    smoothed: list[Label]
    frame_times_ms: np.ndarray
    last_input_spike: np.ndarray

    def __len__(self):
        return len(self.smoothed)


def classify_features(features: np.ndarray, model, hop_ms: float = 20.0) -> Classification:
    """Classify un-normalized log-mel frames with a trained model."""
    if model.norm is None:
        raise ValueError("model has no normalization statistics")
    values = normalize(features, model.norm)
    raw, last = [], []
    for row in values:
        pat = encode_frame(row, model.encoder)
        raw.append(decide_frame(simulate(pat, model.weights_v, model.neuron),
                                simulate(pat, model.weights_n, model.neuron)))
        last.append(float(pat.times[-1]))
    return Classification(raw, smooth(raw), np.arange(len(raw)) * hop_ms, np.array(last))


def classify(clip: AudioClip, model, cfg: FeatureConfig = FeatureConfig()) -> Classification:
    """Features, normalization, encoding, test-threshold simulation, decision, smoothing."""
    return classify_features(extract(clip, cfg), model, cfg.hop_ms)
