"""Command-line entry point: ``tempovad <subcommand> ...``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import data, energy, formats
from .config import RunConfig
from .encoder import encode_frame
from .features import FrameSet, fit_norm, normalize
from .metrics import score
from .pipeline import classify
from .trainer import train

log = logging.getLogger("tempovad")


def _setup_logging() -> None:
    level = os.environ.get("TEMPOVAD_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _resolve(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    cfg = cfg.with_seed(cfg.seed if args.seed is None else args.seed)
    if args.out_dir is not None:
        cfg = RunConfig.from_items({"out_dir": args.out_dir}, cfg)
    return cfg


def _out(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _record(cfg: RunConfig, out: Path) -> None:
    text = cfg.dump()
    log.info("resolved config:\n%s", text)
    (out / "run_config.txt").write_text(text)


def _select(rows, split=None, snrs=None):
    out = [r for r in rows if (split is None or r.split == split) and (not snrs or r.snr_db in snrs)]
    if not out:
        raise ValueError(f"manifest has no rows for split={split} snr={snrs}")
    return out


def _load_frames(rows, cfg: RunConfig) -> FrameSet:
    parts = []
    for r in rows:
        clip, segs = data.load_labeled(r.clip_path, r.label_path)
        parts.append(data.clip_frames(clip, segs, cfg.feature))
    return FrameSet.concat(parts)


# ---------------------------------------------------------------- subcommands


def cmd_synth(args, cfg):
    snrs = args.snr or list(data.SNR_LEVELS)
    manifest = data.make_corpus(_out(cfg), snrs, args.n_train, args.n_test, args.duration, cfg.seed)
    print(manifest)


def cmd_features(args, cfg):
    out = _out(cfg)
    if args.wav:
        if not args.labels:
            raise ValueError("--wav requires --labels")
        clip, segs = data.load_labeled(args.wav, args.labels)
        fs = data.clip_frames(clip, segs, cfg.feature)
    else:
        if not args.manifest:
            raise ValueError("features needs --manifest or --wav/--labels")
        fs = _load_frames(_select(data.read_manifest(args.manifest), args.split, args.snr), cfg)
    stats = formats.read_norm(args.norm) if args.norm else fit_norm(fs)
    fs = FrameSet(normalize(fs.values, stats), fs.labels, fs.frame_index)
    formats.write_features(out / "features.tvfeat", fs)
    formats.write_norm(out / "norm.txt", stats)
    _record(cfg, out)


def cmd_encode(args, cfg):
    out = _out(cfg)
    fs = formats.read_features(args.features)
    formats.write_patterns(out / "patterns.tvspk", (encode_frame(v, cfg.encoder) for v in fs.values))


def cmd_train(args, cfg):
    out = _out(cfg)
    fs = _load_frames(_select(data.read_manifest(args.manifest), "train", args.snr), cfg)
    stats = fit_norm(fs)
    fs = FrameSet(normalize(fs.values, stats), fs.labels, fs.frame_index)
    model, history = train(fs, cfg.train, cfg.seed, cfg.neuron, cfg.encoder, stats)
    formats.write_model(out / "model.tvmdl", model)
    formats.write_train_log(out / "train_log.csv", history)
    formats.write_norm(out / "norm.txt", stats)
    _record(cfg, out)
    last = history[-1]
    print(f"trained on {len(fs)} frames; final group train error {last.train_error_rate:.3f}")


def cmd_classify(args, cfg):
    out = _out(cfg)
    model = formats.read_model(args.model)
    clip = data.read_wav(args.wav)
    res = classify(clip, model, cfg.feature)
    formats.write_predictions(out / "predictions.csv", res)
    if args.labels:
        _, segs = data.load_labeled(args.wav, args.labels)
        m = score(res.smoothed, data.frame_labels(segs, len(res), cfg.feature))
        print(f"FA={m.fa:.4f} MR={m.mr:.4f} HTER={m.hter:.4f}")


def _eval_clip(job):
    row, model, feature_cfg = job
    clip, segs = data.load_labeled(row.clip_path, row.label_path)
    res = classify(clip, model, feature_cfg)
    return res, data.frame_labels(segs, len(res), feature_cfg)


def cmd_eval(args, cfg):
    out = _out(cfg)
    model = formats.read_model(args.model)
    rows = _select(data.read_manifest(args.manifest), args.split, args.snr)
    jobs = [(r, model, cfg.feature) for r in rows]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_eval_clip, jobs))
    else:
        results = [_eval_clip(j) for j in jobs]
    pred_dir = out / "predictions"
    pred_dir.mkdir(exist_ok=True)
    by_level: dict[float, tuple[list, list]] = {}
    for row, (res, truth) in zip(rows, results):
        formats.write_predictions(pred_dir / (Path(row.clip_path).stem + ".csv"), res)
        p, t = by_level.setdefault(row.snr_db, ([], []))
        p.extend(res.smoothed)
        t.extend(truth)
    dataset = args.dataset or Path(args.manifest).resolve().parent.name
    report = [(dataset, f"{snr:+g}dB", cfg.seed, score(p, t)) for snr, (p, t) in sorted(by_level.items())]
    formats.write_report(out / "report.csv", report)
    _record(cfg, out)
    for _, level, _, m in report:
        print(f"{level}: FA={m.fa:.4f} MR={m.mr:.4f} HTER={m.hter:.4f}")


def cmd_energy(args, cfg):
    counts = energy.count_events(128, args.output_spikes, count_output_spike=not args.plain_sop)
    print(energy.format_table(counts, cfg.energy))


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value run configuration file")
    common.add_argument("--seed", type=int, help="seed for every randomized step")
    common.add_argument("--out-dir", help="directory for output artifacts")

    p = argparse.ArgumentParser(prog="tempovad", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[common], help="generate a synthetic labeled corpus")
    s.add_argument("--snr", type=float, action="append", help="SNR in dB (repeatable; default all six)")
    s.add_argument("--n-train", type=int, default=4)
    s.add_argument("--n-test", type=int, default=2)
    s.add_argument("--duration", type=float, default=30.0, help="clip length in seconds")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("features", parents=[common], help="extract normalized log-mel features")
    s.add_argument("--manifest")
    s.add_argument("--split")
    s.add_argument("--snr", type=float, action="append")
    s.add_argument("--wav")
    s.add_argument("--labels")
    s.add_argument("--norm", help="reuse normalization stats from a norm.txt file")
    s.set_defaults(func=cmd_features)

    s = sub.add_parser("encode", parents=[common], help="bin-encode a feature file into spike patterns")
    s.add_argument("--features", required=True)
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("train", parents=[common], help="train the V/N tempotrons")
    s.add_argument("--manifest", required=True)
    s.add_argument("--snr", type=float, action="append", help="train on these SNR rows only")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("classify", parents=[common], help="label one WAV file")
    s.add_argument("--model", required=True)
    s.add_argument("--wav", required=True)
    s.add_argument("--labels", help="optional ground truth for a quick score")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("eval", parents=[common], help="classify and score manifest clips")
    s.add_argument("--model", required=True)
    s.add_argument("--manifest", required=True)
    s.add_argument("--split", default="test")
    s.add_argument("--snr", type=float, action="append")
    s.add_argument("--dataset", help="dataset name for the report (default: manifest directory)")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("energy", parents=[common], help="estimate dynamic power")
    s.add_argument("--output-spikes", type=int, default=1)
    s.add_argument("--plain-sop", action="store_true",
                   help="count input_spikes x outputs SOPs without the per-output extra event")
    s.set_defaults(func=cmd_energy)
    return p


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        args.func(args, cfg)
    except (ValueError, OSError) as e:
        print(f"tempovad {args.command}: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
