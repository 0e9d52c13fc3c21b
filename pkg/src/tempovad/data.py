"""Synthetic noisy-speech clips, labeled WAV ingestion and dataset manifests.

The synthetic voice is a stack of harmonics (100-300 Hz fundamental with
vibrato) shaped by three drifting formant resonances and a slow syllabic
envelope. Noise is mixed at a target SNR measured over the voiced samples.
"""
from __future__ import annotations

import csv
import wave
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .features import SAMPLE_RATE, AudioClip, FeatureConfig, FrameSet, Label, extract

SNR_LEVELS = (15.0, 10.0, 5.0, 0.0, -5.0, -10.0)
NOISE_LEVELS = {"low": (15.0, 10.0), "medium": (5.0, 0.0), "high": (-5.0, -10.0)}
NOISE_KINDS = ("white", "pink", "babble")
SPEECH_RMS = 0.03
NOISE_ONLY_RMS = 0.01


@dataclass(frozen=True)
class SynthConfig:
    duration_s: float = 10.0
    snr_db: float = 15.0
    speech_duty: float = 0.5
    seed: int = 0
    noise_kind: str = "white"

    def __post_init__(self):
        if self.duration_s <= 0:
            raise ValueError("duration_s must be positive")
        # 0 is accepted to produce noise-only clips
        if not 0 <= self.speech_duty < 1:
            raise ValueError("speech_duty must lie in [0, 1)")
        if self.noise_kind not in NOISE_KINDS:
            raise ValueError(f"noise_kind must be one of {NOISE_KINDS}")


class LabeledSegment(NamedTuple):
    start_ms: int
    end_ms: int
    label: Label


@dataclass
class SynthResult:
    clip: AudioClip
    segments: list[LabeledSegment]
    speech: np.ndarray
    noise: np.ndarray


def _segments(rng: np.random.Generator, total_ms: int, duty: float) -> list[LabeledSegment]:
    if duty == 0:
        return [LabeledSegment(0, total_ms, Label.NOVOICE)]
    v_mean = 750.0
    n_mean = v_mean * (1 - duty) / duty
    segs, t, voiced = [], 0, False
    while t < total_ms:
        if voiced:
            d = rng.uniform(300.0, 1200.0)
        else:
            d = rng.uniform(0.5 * n_mean, 1.5 * n_mean)
        end = min(total_ms, t + max(1, int(round(d))))
        segs.append(LabeledSegment(t, end, Label.VOICE if voiced else Label.NOVOICE))
        t, voiced = end, not voiced
    return segs


def _voiced(rng: np.random.Generator, n: int, fmax: float = 7800.0) -> np.ndarray:
    """One voiced segment of ``n`` samples with unit peak envelope."""
    t = np.arange(n) / SAMPLE_RATE
    base = rng.uniform(100.0, 300.0)
    f0 = base * (1 + 0.06 * np.sin(2 * np.pi * rng.uniform(2, 6) * t + rng.uniform(0, 2 * np.pi)))
    f0 *= np.linspace(1.0, rng.uniform(0.85, 1.15), n)
    phase = 2 * np.pi * np.cumsum(f0) / SAMPLE_RATE
    lo = (np.array([300.0, 900.0, 2500.0]), np.array([900.0, 2500.0, 3500.0]))
    start, stop = rng.uniform(*lo), rng.uniform(*lo)
    bw = np.array([90.0, 130.0, 220.0])
    gain = np.array([1.0, 0.5, 0.25])
    frac = np.linspace(0.0, 1.0, n)
    centers = start[:, None] + (stop - start)[:, None] * frac[None, :]  # (3, n)
    out = np.zeros(n)
    for h in range(1, int(fmax / (base * 0.8)) + 1):
        fh = h * f0
        amp = 0.02 / h ** 0.5 + np.sum(
            gain[:, None] / (1.0 + ((fh[None, :] - centers) / bw[:, None]) ** 2), axis=0)
        amp = np.where(fh < fmax, amp, 0.0)
        out += amp * np.sin(h * phase + rng.uniform(0, 2 * np.pi))
    env = 0.7 + 0.3 * np.cos(2 * np.pi * rng.uniform(3, 5) * t + rng.uniform(0, 2 * np.pi))
    ramp = min(n // 2, int(0.015 * SAMPLE_RATE))
    if ramp > 0:
        edge = 0.5 - 0.5 * np.cos(np.pi * np.arange(ramp) / ramp)
        env[:ramp] *= edge
        env[n - ramp:] *= edge[::-1]
    return out * env


def _noise(rng: np.random.Generator, n: int, kind: str) -> np.ndarray:
    if kind == "white":
        return rng.standard_normal(n)
    if kind == "pink":
        spec = np.fft.rfft(rng.standard_normal(n))
        f = np.fft.rfftfreq(n, 1.0 / SAMPLE_RATE)
        spec /= np.sqrt(np.maximum(f, 20.0))
        return np.fft.irfft(spec, n)
    # babble: several overlapping synthetic talkers plus a little white noise
    out = 0.05 * rng.standard_normal(n)
    chunk = int(0.4 * SAMPLE_RATE)
    for _ in range(5):
        talker = np.zeros(n)
        for s in range(0, n, chunk):
            m = min(chunk, n - s)
            talker[s:s + m] = _voiced(rng, m, fmax=4000.0)
        out += talker / (np.sqrt(np.mean(talker ** 2)) + 1e-12)
    return out


def _rms(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(x ** 2))) if x.size else 0.0


def synth(cfg: SynthConfig) -> SynthResult:
    """Seeded synthetic clip with frame-accurate voice labels.

    Segment layout, speech and the noise waveform depend only on the seed;
    the SNR only sets the noise gain.
    """
    seg_ss, speech_ss, noise_ss = np.random.SeedSequence(cfg.seed).spawn(3)
    total_ms = int(round(cfg.duration_s * 1000))
    n = total_ms * SAMPLE_RATE // 1000
    segs = _segments(np.random.default_rng(seg_ss), total_ms, cfg.speech_duty)

    speech = np.zeros(n)
    voiced = np.zeros(n, dtype=bool)
    srng = np.random.default_rng(speech_ss)
    for s in segs:
        if s.label is Label.VOICE:
            a, b = s.start_ms * 16, s.end_ms * 16
            speech[a:b] = _voiced(srng, b - a) * 10 ** (srng.uniform(-3, 3) / 20)
            voiced[a:b] = True

    noise = _noise(np.random.default_rng(noise_ss), n, cfg.noise_kind)
    if voiced.any():
        speech *= SPEECH_RMS / _rms(speech[voiced])
        target = _rms(speech[voiced]) / 10 ** (cfg.snr_db / 20)
        noise *= target / _rms(noise[voiced])
    else:
        noise *= NOISE_ONLY_RMS / _rms(noise)
    mix = np.clip(speech + noise, -1.0, 1.0)
    return SynthResult(AudioClip(mix), segs, speech, noise)


def measured_snr(speech: np.ndarray, noise: np.ndarray, segments: Sequence[LabeledSegment]) -> float:
    mask = np.zeros(speech.shape[0], dtype=bool)
    for s in segments:
        if s.label is Label.VOICE:
            mask[s.start_ms * 16: s.end_ms * 16] = True
    return 10 * np.log10(np.mean(speech[mask] ** 2) / np.mean(noise[mask] ** 2))


def frame_labels(segments: Sequence[LabeledSegment], n_frames: int,
                 cfg: FeatureConfig = FeatureConfig()) -> np.ndarray:
    """Label each frame by majority overlap with voiced time; a 50/50 split is V."""
    starts = np.arange(n_frames) * cfg.hop_ms
    ends = starts + cfg.frame_len_ms
    voiced = np.zeros(n_frames)
    for s in segments:
        if s.label is Label.VOICE:
            voiced += np.clip(np.minimum(ends, s.end_ms) - np.maximum(starts, s.start_ms), 0, None)
    return np.where(2 * voiced >= cfg.frame_len_ms, Label.VOICE.value, Label.NOVOICE.value)


# ---------------------------------------------------------------- file I/O


def write_wav(path, clip: AudioClip) -> None:
    pcm = np.round(np.clip(clip.samples, -1.0, 1.0) * 32767).astype("<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(clip.sample_rate)
        w.writeframes(pcm.tobytes())


def read_wav(path) -> AudioClip:
    with wave.open(str(path), "rb") as w:
        ch, width, rate = w.getnchannels(), w.getsampwidth(), w.getframerate()
        raw = w.readframes(w.getnframes())
    if rate != SAMPLE_RATE:
        raise ValueError(f"{path}: sample rate {rate} Hz, expected {SAMPLE_RATE} Hz "
                         f"(resample first, e.g. `sox in.wav -r 16000 out.wav`)")
    if ch != 1:
        raise ValueError(f"{path}: {ch} channels, expected mono")
    if width != 2:
        raise ValueError(f"{path}: {8 * width}-bit samples, expected 16-bit PCM")
    return AudioClip(np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0)


def write_labels(path, segments: Sequence[LabeledSegment]) -> None:
    with open(path, "w") as f:
        for s in segments:
            f.write(f"{s.start_ms} {s.end_ms} {s.label.value}\n")


def parse_labels(text: str, source: str = "<labels>") -> list[LabeledSegment]:
    segs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3 or parts[2] not in ("V", "N"):
            raise ValueError(f"{source}:{lineno}: expected 'start_ms end_ms V|N', got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"{source}:{lineno}: times must be integer milliseconds") from None
        if b <= a:
            raise ValueError(f"{source}:{lineno}: segment end must exceed start")
        segs.append(LabeledSegment(a, b, Label(parts[2])))
    if not segs:
        raise ValueError(f"{source}: no segments")
    if segs[0].start_ms != 0:
        raise ValueError(f"{source}: first segment must start at 0 ms")
    for prev, cur in zip(segs, segs[1:]):
        if cur.start_ms < prev.end_ms:
            raise ValueError(f"{source}: segments overlap at {cur.start_ms} ms")
        if cur.start_ms > prev.end_ms:
            raise ValueError(f"{source}: gap between {prev.end_ms} and {cur.start_ms} ms")
    return segs


def load_labeled(wav_path, label_path) -> tuple[AudioClip, list[LabeledSegment]]:
    clip = read_wav(wav_path)
    segs = parse_labels(Path(label_path).read_text(), str(label_path))
    clip_ms = len(clip) * 1000 // SAMPLE_RATE
    if segs[-1].end_ms < clip_ms - 1:
        raise ValueError(f"{label_path}: labels end at {segs[-1].end_ms} ms but the clip "
                         f"lasts {clip_ms} ms")
    return clip, segs


class ManifestRow(NamedTuple):
    clip_path: str
    label_path: str
    snr_db: float
    split: str


def write_manifest(path, rows: Sequence[ManifestRow]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["clip_path", "label_path", "snr_db", "split"])
        for r in rows:
            w.writerow([r.clip_path, r.label_path, f"{r.snr_db:g}", r.split])


def read_manifest(path) -> list[ManifestRow]:
    """Read a manifest; relative paths resolve against the manifest's directory."""
    base = Path(path).parent
    rows = []
    with open(path, newline="") as f:
        for rec in csv.DictReader(f):
            try:
                rows.append(ManifestRow(str(base / rec["clip_path"]), str(base / rec["label_path"]),
                                        float(rec["snr_db"]), rec["split"]))
            except (KeyError, TypeError, ValueError) as e:
                raise ValueError(f"{path}: malformed manifest row {rec}") from e
    return rows


def clip_frames(clip: AudioClip, segments, cfg: FeatureConfig = FeatureConfig()) -> FrameSet:
    """Un-normalized features of one clip with ground-truth frame labels."""
    feats = extract(clip, cfg)
    return FrameSet(feats, frame_labels(segments, feats.shape[0], cfg))


def make_corpus(out_dir, snrs: Sequence[float] = (15.0,), n_train: int = 4, n_test: int = 2,
                duration_s: float = 30.0, seed: int = 0,
                train_noises: Sequence[str] = ("white", "babble"),
                test_noises: Sequence[str] = ("pink",)) -> Path:
    """Write WAV + label files and a manifest; returns the manifest path.

    Train and test use disjoint noise kinds, cycling through each list per clip.
    Clip ``i`` of a split has the same speech at every SNR.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for snr in snrs:
        for split, count, kinds, tag in (("train", n_train, train_noises, 1), ("test", n_test, test_noises, 2)):
            for i in range(count):
                clip_seed = int(np.random.SeedSequence([seed, tag, i]).generate_state(1)[0])
                res = synth(SynthConfig(duration_s, snr, 0.5, clip_seed, kinds[i % len(kinds)]))
                stem = f"{split}_snr{snr:+g}_{i:03d}"
                write_wav(out / f"{stem}.wav", res.clip)
                write_labels(out / f"{stem}.lab", res.segments)
                rows.append(ManifestRow(f"{stem}.wav", f"{stem}.lab", snr, split))
    manifest = out / "manifest.csv"
    write_manifest(manifest, rows)
    return manifest
