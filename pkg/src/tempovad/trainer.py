"""Maximum-margin tempotron training of the V (voice) and N (no-voice) neurons."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .encoder import EncoderConfig, SpikePattern, encode_frame
from .features import FeatureFrame, FrameSet, Label, NormStats
from .neuron import W_MAX, W_MIN, NeuronParams, NeuronTrace, kernel, simulate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    lambda0: float = 0.8
    decay: float = 0.95
    groups: int = 120
    group_size: int = 200
    margin_delta: float = 0.5
    init_lo: float = 0.0
    init_hi: float = 0.05
    seed: int = 0
    update_on_correct: bool = False

    def __post_init__(self):
        if self.lambda0 <= 0:
            raise ValueError("lambda0 must be positive")
        if not 0 < self.decay <= 1:
            raise ValueError("decay must lie in (0, 1]")
        if self.margin_delta < 0:
            raise ValueError("margin_delta must be non-negative")
        if self.groups < 1 or self.group_size < 1:
            raise ValueError("groups and group_size must be positive")
        if self.init_hi < self.init_lo:
            raise ValueError("init_hi must be >= init_lo")

    def learning_rate(self, group: int) -> float:
        return self.lambda0 * self.decay ** group


@dataclass
class TempotronModel:
    weights_v: np.ndarray
    weights_n: np.ndarray
    neuron: NeuronParams = field(default_factory=NeuronParams)
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    norm: NormStats | None = None

    def __post_init__(self):
        self.weights_v = np.asarray(self.weights_v, dtype=np.float64)
        self.weights_n = np.asarray(self.weights_n, dtype=np.float64)
        if self.weights_v.shape != self.weights_n.shape or self.weights_v.ndim != 1:
            raise ValueError("V and N weight vectors must be 1-D and of equal length")
        if self.weights_v.shape[0] % self.encoder.n_in:
            raise ValueError("synapse count must be a multiple of n_in")
        for w in (self.weights_v, self.weights_n):
            if np.any(w < W_MIN) or np.any(w > W_MAX):
                raise ValueError(f"weights must lie in [{W_MIN}, {W_MAX}]")

    @property
    def n_synapses(self) -> int:
        return self.weights_v.shape[0]

    @property
    def n_bands(self) -> int:
        return self.n_synapses // self.encoder.n_in

    def copy(self) -> "TempotronModel":
        return replace(self, weights_v=self.weights_v.copy(), weights_n=self.weights_n.copy())


@dataclass
class GroupLog:
    group: int
    learning_rate: float
    margin_errors: int
    train_errors: int
    samples: int

    @property
    def train_error_rate(self) -> float:
        return self.train_errors / self.samples


def _anchored_delta(pattern: SpikePattern, anchor: float, lam: float, n_synapses: int,
                    params: NeuronParams) -> np.ndarray:
    delta = np.zeros(n_synapses)
    causal = pattern.times < anchor
    np.add.at(delta, pattern.neuron_ids[causal], lam * kernel(anchor - pattern.times[causal], params))
    return delta


def ltp_delta(pattern: SpikePattern, trace: NeuronTrace, lam: float, n_synapses: int,
              params: NeuronParams = NeuronParams()) -> np.ndarray:
    """Potentiation anchored at the voltage maximum."""
    return _anchored_delta(pattern, trace.t_max, lam, n_synapses, params)


def ltd_delta(pattern: SpikePattern, trace: NeuronTrace, lam: float, n_synapses: int,
              params: NeuronParams = NeuronParams()) -> np.ndarray:
    """Depression anchored at the output spike."""
    if trace.first_spike is None:
        raise ValueError("ltd_delta needs a trace with an output spike")
    return -_anchored_delta(pattern, trace.first_spike, lam, n_synapses, params)


def apply_update(weights: np.ndarray, delta: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(weights) + delta, W_MIN, W_MAX)


@dataclass
class StepResult:
    delta_v: np.ndarray
    delta_n: np.ndarray
    trace_v: NeuronTrace
    trace_n: NeuronTrace

    @property
    def updated(self) -> bool:
        return bool(np.any(self.delta_v) or np.any(self.delta_n))


def step_deltas(model: TempotronModel, pattern: SpikePattern, label: Label | str, lam: float,
                cfg: TrainConfig = TrainConfig()) -> StepResult:
    """Weight changes for one labeled pattern, computed from pre-update weights.

    The target neuron runs with its threshold raised by the margin and the
    other with it lowered. A silent target gets LTP; a firing non-target
    gets LTD.
    """
    label = Label(label)
    if label is Label.UNLABELED:
        raise ValueError("training frames must be labeled V or N")
    p = model.neuron
    n_syn = model.n_synapses
    voice = label is Label.VOICE
    shift_v = cfg.margin_delta if voice else -cfg.margin_delta
    trace_v = simulate(pattern, model.weights_v, p, shift_v)
    trace_n = simulate(pattern, model.weights_n, p, -shift_v)

    deltas = []
    for trace, is_target in ((trace_v, voice), (trace_n, not voice)):
        fired = trace.crossed_threshold
        if is_target and not fired:
            deltas.append(ltp_delta(pattern, trace, lam, n_syn, p))
        elif not is_target and fired:
            deltas.append(ltd_delta(pattern, trace, lam, n_syn, p))
        elif is_target and cfg.update_on_correct:
            deltas.append(ltp_delta(pattern, trace, lam, n_syn, p))
        else:
            deltas.append(np.zeros(n_syn))
    return StepResult(deltas[0], deltas[1], trace_v, trace_n)


def train_step(model: TempotronModel, frame: FeatureFrame, lam: float,
               cfg: TrainConfig = TrainConfig()) -> TempotronModel:
    """Present one normalized, labeled frame and return the updated model."""
    pattern = encode_frame(frame.values, model.encoder)
    res = step_deltas(model, pattern, frame.label, lam, cfg)
    out = model.copy()
    out.weights_v = apply_update(model.weights_v, res.delta_v)
    out.weights_n = apply_update(model.weights_n, res.delta_n)
    return out


def init_model(n_bands: int, cfg: TrainConfig, rng: np.random.Generator,
               neuron: NeuronParams = NeuronParams(), encoder: EncoderConfig = EncoderConfig(),
               norm: NormStats | None = None) -> TempotronModel:
    n = n_bands * encoder.n_in
    wv = rng.uniform(cfg.init_lo, cfg.init_hi, n)
    wn = rng.uniform(cfg.init_lo, cfg.init_hi, n)
    return TempotronModel(wv, wn, neuron, encoder, norm)


def train(frames: FrameSet, cfg: TrainConfig = TrainConfig(), seed: int | None = None,
          neuron: NeuronParams = NeuronParams(), encoder: EncoderConfig = EncoderConfig(),
          norm: NormStats | None = None) -> tuple[TempotronModel, list[GroupLog]]:
    """Train both output neurons on normalized, labeled frames.

    Samples are drawn with replacement, ``group_size`` per group, and the
    learning rate decays by ``cfg.decay`` after each group. The per-group
    log counts margin errors (samples that triggered an update) and test
    threshold decision errors, both measured before the update.
    """
    from .pipeline import decide_frame

    labels = frames.labels
    keep = labels != Label.UNLABELED.value
    if not np.any(labels[keep] == "V") or not np.any(labels[keep] == "N"):
        raise ValueError("training set must contain both V and N frames")
    values, labels = frames.values[keep], labels[keep]
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    model = init_model(values.shape[1], cfg, rng, neuron, encoder, norm)
    patterns: dict[int, SpikePattern] = {}
    history = []
    for g in range(cfg.groups):
        lam = cfg.learning_rate(g)
        idx = rng.integers(0, values.shape[0], cfg.group_size)
        margin_err = train_err = 0
        for i in idx:
            i = int(i)
            pat = patterns.get(i)
            if pat is None:
                pat = patterns[i] = encode_frame(values[i], encoder)
            raw = decide_frame(simulate(pat, model.weights_v, neuron), simulate(pat, model.weights_n, neuron))
            train_err += raw.label.value != labels[i]
            res = step_deltas(model, pat, labels[i], lam, cfg)
            if res.updated:
                margin_err += 1
                model.weights_v = apply_update(model.weights_v, res.delta_v)
                model.weights_n = apply_update(model.weights_n, res.delta_n)
        history.append(GroupLog(g, lam, margin_err, train_err, cfg.group_size))
        log.debug("group %d lr=%.5f margin_err=%d train_err=%d", g, lam, margin_err, train_err)
    return model, history
