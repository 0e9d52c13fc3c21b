"""Log-mel feature extraction and dataset-wide min/max normalization."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import get_window

SAMPLE_RATE = 16000


class Label(str, enum.Enum):
    VOICE = "V"
    NOVOICE = "N"
    UNLABELED = "U"


@dataclass(frozen=True)
class AudioClip:
    samples: np.ndarray
    sample_rate: int = SAMPLE_RATE

    def __post_init__(self):
        if self.sample_rate != SAMPLE_RATE:
            raise ValueError(
                f"sample rate must be {SAMPLE_RATE} Hz, got {self.sample_rate}; "
                "resample the audio before loading it"
            )
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim != 1:
            raise ValueError("audio must be mono (1-D)")
        if not np.all(np.isfinite(s)):
            raise ValueError("audio contains non-finite samples")
        object.__setattr__(self, "samples", s)

    def __len__(self):
        return self.samples.shape[0]

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate


@dataclass(frozen=True)
class FeatureConfig:
    n_mels: int = 128
    frame_len_ms: float = 40.0
    hop_ms: float = 20.0
    fft_size: int = 1024
    window: str = "hann"
    log_floor: float = 1e-10

    def __post_init__(self):
        if abs(self.hop_ms * 2 - self.frame_len_ms) > 1e-12:
            raise ValueError("hop_ms must be half of frame_len_ms (50% overlap)")
        if self.fft_size < self.frame_samples:
            raise ValueError("fft_size must cover one frame")
        if self.log_floor <= 0:
            raise ValueError("log_floor must be positive")
        if self.window not in ("hann", "hamming"):
            raise ValueError(f"unknown window {self.window!r}")

    @property
    def frame_samples(self) -> int:
        return int(round(self.frame_len_ms * SAMPLE_RATE / 1000))

    @property
    def hop_samples(self) -> int:
        return int(round(self.hop_ms * SAMPLE_RATE / 1000))


@dataclass
class FeatureFrame:
    values: np.ndarray
    label: Label = Label.UNLABELED
    frame_index: int = 0


@dataclass
class FrameSet:
    """A stack of feature frames with per-frame labels.

    ``values`` has shape ``(n_frames, n_mels)``; ``labels`` holds one
    :class:`Label` value string per row.
    """

    values: np.ndarray
    labels: np.ndarray = field(default=None)
    frame_index: np.ndarray = field(default=None)

    def __post_init__(self):
        self.values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        n = self.values.shape[0]
        if self.labels is None:
            self.labels = np.full(n, Label.UNLABELED.value)
        self.labels = np.asarray([Label(x).value for x in self.labels], dtype="<U1")
        if self.frame_index is None:
            self.frame_index = np.arange(n)
        self.frame_index = np.asarray(self.frame_index, dtype=np.int64)
        if self.labels.shape[0] != n or self.frame_index.shape[0] != n:
            raise ValueError("labels/frame_index length must match the number of frames")

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, i) -> FeatureFrame:
        return FeatureFrame(self.values[i], Label(self.labels[i]), int(self.frame_index[i]))

    @classmethod
    def concat(cls, sets) -> "FrameSet":
        sets = list(sets)
        return cls(
            np.concatenate([s.values for s in sets]),
            np.concatenate([s.labels for s in sets]),
            np.concatenate([s.frame_index for s in sets]),
        )


@dataclass(frozen=True)
class NormStats:
    global_min: float
    global_max: float

    def __post_init__(self):
        if not self.global_max > self.global_min:
            raise ValueError("NormStats requires global_max > global_min")


def frame_signal(clip: AudioClip, cfg: FeatureConfig = FeatureConfig()) -> np.ndarray:
    """Slice a clip into overlapping frames; the trailing partial frame is dropped.

    Returns an array of shape ``(n_frames, frame_samples)``; ``n_frames`` is 0
    for clips shorter than one frame.
    """
    n, size, hop = len(clip), cfg.frame_samples, cfg.hop_samples
    if n < size:
        return np.empty((0, size))
    count = (n - size) // hop + 1
    idx = np.arange(size)[None, :] + hop * np.arange(count)[:, None]
    return clip.samples[idx]


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_center_frequencies(cfg: FeatureConfig = FeatureConfig()) -> np.ndarray:
    edges = mel_to_hz(np.linspace(0.0, hz_to_mel(SAMPLE_RATE / 2), cfg.n_mels + 2))
    return edges[1:-1]


_FILTERBANKS: dict = {}


def mel_filterbank(cfg: FeatureConfig = FeatureConfig()) -> np.ndarray:
    """Triangular HTK-mel filters with unit peak, shape ``(n_mels, fft_size//2+1)``."""
    key = (cfg.n_mels, cfg.fft_size)
    if key not in _FILTERBANKS:
        edges = mel_to_hz(np.linspace(0.0, hz_to_mel(SAMPLE_RATE / 2), cfg.n_mels + 2))
        freqs = np.fft.rfftfreq(cfg.fft_size, 1.0 / SAMPLE_RATE)
        lo, mid, hi = edges[:-2, None], edges[1:-1, None], edges[2:, None]
        rising = (freqs[None, :] - lo) / (mid - lo)
        falling = (hi - freqs[None, :]) / (hi - mid)
        fb = np.maximum(0.0, np.minimum(rising, falling))
        fb.setflags(write=False)
        _FILTERBANKS[key] = fb
    return _FILTERBANKS[key]


def _window(cfg: FeatureConfig) -> np.ndarray:
    return get_window(cfg.window, cfg.frame_samples, fftbins=True)


def log_mel_frames(frames: np.ndarray, cfg: FeatureConfig = FeatureConfig()) -> np.ndarray:
    """Log mel-filtered magnitude spectra for a stack of raw frames."""
    frames = np.atleast_2d(np.asarray(frames, dtype=np.float64))
    if frames.shape[1] != cfg.frame_samples:
        raise ValueError(f"frames must have {cfg.frame_samples} samples, got {frames.shape[1]}")
    spec = np.abs(np.fft.rfft(frames * _window(cfg), n=cfg.fft_size, axis=1))
    return np.log(spec @ mel_filterbank(cfg).T + cfg.log_floor)


def log_mel(frame: np.ndarray, cfg: FeatureConfig = FeatureConfig()) -> np.ndarray:
    return log_mel_frames(np.asarray(frame)[None, :], cfg)[0]


def extract(clip: AudioClip, cfg: FeatureConfig = FeatureConfig()) -> np.ndarray:
    """Un-normalized log-mel features for a whole clip, ``(n_frames, n_mels)``."""
    frames = frame_signal(clip, cfg)
    if frames.shape[0] == 0:
        return np.empty((0, cfg.n_mels))
    return log_mel_frames(frames, cfg)


def fit_norm(frames) -> NormStats:
    """Global min and max over every band of every frame."""
    v = np.asarray(frames.values if isinstance(frames, FrameSet) else frames, dtype=np.float64)
    if v.size == 0:
        raise ValueError("cannot fit normalization on an empty feature set")
    lo, hi = float(v.min()), float(v.max())
    if lo == hi:
        raise ValueError("feature set is constant; normalization is undefined")
    return NormStats(lo, hi)


def normalize(values, stats: NormStats) -> np.ndarray:
    """Map to [0, 1] with the fitted range, clamping out-of-range values."""
    v = (np.asarray(values, dtype=np.float64) - stats.global_min) / (stats.global_max - stats.global_min)
    return np.clip(v, 0.0, 1.0)


def normalize_frame(frame: FeatureFrame, stats: NormStats) -> FeatureFrame:
    return FeatureFrame(normalize(frame.values, stats), frame.label, frame.frame_index)
