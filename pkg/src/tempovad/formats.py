"""Text and CSV artifact formats: features, spike patterns, models, predictions, reports."""
from __future__ import annotations

import csv
import dataclasses
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .encoder import EncoderConfig, SpikePattern
from .features import FrameSet, NormStats
from .neuron import NeuronParams

FEAT_MAGIC = "TVFEAT v1"
SPK_MAGIC = "TVSPK v1"
MDL_MAGIC = "TVMDL v1"

PREDICTION_COLUMNS = ["frame_index", "time_ms", "raw_label", "smoothed_label",
                      "v_first_spike", "n_first_spike", "v_max", "n_max"]
REPORT_COLUMNS = ["dataset", "noise_level", "seed", "fa", "mr", "hter", "tp", "tn", "fp", "fn"]


def fmt_float(x: float) -> str:
    # shortest repr that round-trips (17 significant digits at most)
    return repr(float(x))


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def parse_value(text: str, like):
    """Convert ``text`` to the type of the default value ``like``."""
    if isinstance(like, bool):
        low = text.strip().lower()
        if low not in ("true", "false", "1", "0", "yes", "no"):
            raise ValueError(f"expected a boolean, got {text!r}")
        return low in ("true", "1", "yes")
    if isinstance(like, int):
        return int(text)
    if isinstance(like, float):
        return float(text)
    return text.strip()


# ---------------------------------------------------------------- features


def write_features(path, frames: FrameSet) -> None:
    n_mels = frames.values.shape[1]
    with open(path, "w") as f:
        f.write(f"{FEAT_MAGIC} n_mels={n_mels}\n")
        for idx, lab, row in zip(frames.frame_index, frames.labels, frames.values):
            f.write(f"{int(idx)} {lab} " + " ".join(fmt_float(v) for v in row) + "\n")


def read_features(path) -> FrameSet:
    with open(path) as f:
        header = f.readline().split()
        if header[:2] != FEAT_MAGIC.split() or len(header) != 3 or not header[2].startswith("n_mels="):
            raise ValueError(f"{path}: not a {FEAT_MAGIC} file")
        n_mels = int(header[2].split("=", 1)[1])
        idx, labels, rows = [], [], []
        for lineno, line in enumerate(f, 2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != n_mels + 2:
                raise ValueError(f"{path}:{lineno}: expected {n_mels + 2} fields, got {len(parts)}")
            idx.append(int(parts[0]))
            labels.append(parts[1])
            rows.append([float(x) for x in parts[2:]])
    values = np.array(rows, dtype=np.float64).reshape(-1, n_mels)
    return FrameSet(values, np.array(labels, dtype="<U1"), np.array(idx, dtype=np.int64))


def write_norm(path, stats: NormStats) -> None:
    Path(path).write_text(f"global_min={fmt_float(stats.global_min)}\n"
                          f"global_max={fmt_float(stats.global_max)}\n")


def read_norm(path) -> NormStats:
    kv = _read_kv(Path(path).read_text().splitlines(), str(path))
    return NormStats(float(kv["global_min"]), float(kv["global_max"]))


# ---------------------------------------------------------------- spikes


def write_patterns(path, patterns: Iterable[SpikePattern]) -> None:
    """One block per pattern: a header line followed by ``neuron_id time_ms`` lines."""
    with open(path, "w") as f:
        for p in patterns:
            f.write(f"{SPK_MAGIC} n={len(p)} dur={p.duration:.6f}\n")
            for nid, t in zip(p.neuron_ids, p.times):
                f.write(f"{int(nid)} {t:.9f}\n")


def read_patterns(path) -> list[SpikePattern]:
    lines = Path(path).read_text().splitlines()
    out, i = [], 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        head = lines[i].split()
        if head[:2] != SPK_MAGIC.split() or len(head) != 4:
            raise ValueError(f"{path}:{i + 1}: expected a {SPK_MAGIC} header")
        n = int(head[2].split("=", 1)[1])
        dur = float(head[3].split("=", 1)[1])
        body = [ln.split() for ln in lines[i + 1: i + 1 + n]]
        if len(body) != n or any(len(b) != 2 for b in body):
            raise ValueError(f"{path}:{i + 1}: truncated pattern block")
        ids = np.array([int(b[0]) for b in body], dtype=np.int64)
        times = np.array([float(b[1]) for b in body], dtype=np.float64)
        out.append(SpikePattern(ids, times, dur))
        i += n + 1
    return out


# ---------------------------------------------------------------- model


def _read_kv(lines: Sequence[str], source: str) -> dict[str, str]:
    kv = {}
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{source}: expected key=value, got {line!r}")
        k, v = line.split("=", 1)
        kv[k.strip()] = v.strip()
    return kv


def _dc_lines(prefix: str, obj) -> list[str]:
    return [f"{prefix}.{f.name}={_fmt_value(getattr(obj, f.name))}" for f in dataclasses.fields(obj)]


def _dc_from(cls, kv: dict[str, str], prefix: str):
    default = cls()
    args = {}
    for f in dataclasses.fields(cls):
        key = f"{prefix}.{f.name}"
        if key in kv:
            args[f.name] = parse_value(kv[key], getattr(default, f.name))
    return cls(**args)


def write_model(path, model) -> None:
    lines = [MDL_MAGIC]
    lines += _dc_lines("neuron", model.neuron)
    lines += _dc_lines("encoder", model.encoder)
    if model.norm is not None:
        lines += _dc_lines("norm", model.norm)
    lines.append("V: " + " ".join(fmt_float(w) for w in model.weights_v))
    lines.append("N: " + " ".join(fmt_float(w) for w in model.weights_n))
    Path(path).write_text("\n".join(lines) + "\n")


def read_model(path):
    from .trainer import TempotronModel

    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != MDL_MAGIC:
        raise ValueError(f"{path}: not a {MDL_MAGIC} file")
    kv_lines, weights = [], {}
    for line in lines[1:]:
        if line[:2] in ("V:", "N:"):
            weights[line[0]] = np.array([float(x) for x in line[2:].split()], dtype=np.float64)
        else:
            kv_lines.append(line)
    if set(weights) != {"V", "N"}:
        raise ValueError(f"{path}: missing V: or N: weight line")
    kv = _read_kv(kv_lines, str(path))
    known = {f"{p}.{f.name}" for p, c in (("neuron", NeuronParams), ("encoder", EncoderConfig),
                                          ("norm", NormStats)) for f in dataclasses.fields(c)}
    unknown = set(kv) - known
    if unknown:
        raise ValueError(f"{path}: unknown keys {sorted(unknown)}")
    norm = None
    if "norm.global_min" in kv:
        norm = NormStats(float(kv["norm.global_min"]), float(kv["norm.global_max"]))
    return TempotronModel(weights["V"], weights["N"], _dc_from(NeuronParams, kv, "neuron"),
                          _dc_from(EncoderConfig, kv, "encoder"), norm)


# ---------------------------------------------------------------- CSVs


def _opt(x) -> str:
    return "" if x is None else f"{x:.6f}"


def write_predictions(path, result) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(PREDICTION_COLUMNS)
        for i, (raw, sm, t) in enumerate(zip(result.raw, result.smoothed, result.frame_times_ms)):
            w.writerow([i, f"{t:.1f}", raw.label.value, sm.value, _opt(raw.v_first_spike),
                        _opt(raw.n_first_spike), f"{raw.v_max:.9g}", f"{raw.n_max:.9g}"])


def read_predictions(path) -> list[dict]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def write_train_log(path, history) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["group", "learning_rate", "margin_errors", "train_errors", "samples", "train_error_rate"])
        for h in history:
            w.writerow([h.group, f"{h.learning_rate:.9g}", h.margin_errors, h.train_errors,
                        h.samples, f"{h.train_error_rate:.6f}"])


def write_report(path, rows: Sequence[tuple]) -> None:
    """Rows of ``(dataset, noise_level, seed, Metrics)``."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for dataset, level, seed, m in rows:
            w.writerow([dataset, level, seed, f"{m.fa:.6f}", f"{m.mr:.6f}", f"{m.hter:.6f}",
                        m.tp, m.tn, m.fp, m.fn])
