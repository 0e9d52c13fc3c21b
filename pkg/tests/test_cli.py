from pathlib import Path

import pytest

from tempovad.cli import main

DATA = Path(__file__).parent / "data"


def run(*argv):
    return main([str(a) for a in argv])


def test_encode_matches_golden(tmp_path):
    assert run("encode", "--features", DATA / "golden.tvfeat", "--out-dir", tmp_path) == 0
    assert (tmp_path / "patterns.tvspk").read_bytes() == (DATA / "golden.tvspk").read_bytes()


def test_energy_table(capsys):
    assert run("energy") == 0
    out = capsys.readouterr().out
    for token in ("258", "129", "1153", "50", "Loihi"):
        assert token in out
    assert run("energy", "--plain-sop") == 0
    assert "256" in capsys.readouterr().out


def test_bad_inputs_nonzero(tmp_path, capsys):
    assert run("encode", "--features", tmp_path / "missing.tvfeat", "--out-dir", tmp_path) == 1
    assert "error" in capsys.readouterr().err
    (tmp_path / "bad.cfg").write_text("train.nonsense=1\n")
    assert run("energy", "--config", tmp_path / "bad.cfg") == 1
    with pytest.raises(SystemExit):
        run("fly")


@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    cfg = root / "fast.cfg"
    cfg.write_text("train.groups=4\ntrain.group_size=50\n")
    assert run("synth", "--out-dir", root / "data", "--snr", 15, "--n-train", 2, "--n-test", 1,
               "--duration", 6, "--seed", 3) == 0
    assert run("train", "--manifest", root / "data" / "manifest.csv", "--config", cfg,
               "--out-dir", root / "run", "--seed", 3) == 0
    return root, cfg


def test_train_outputs(small_run):
    root, _ = small_run
    run_dir = root / "run"
    assert (run_dir / "model.tvmdl").read_text().startswith("TVMDL v1")
    log = (run_dir / "train_log.csv").read_text().splitlines()
    assert log[0].startswith("group,learning_rate") and len(log) == 5
    assert "train.groups=4" in (run_dir / "run_config.txt").read_text()


def test_eval_and_classify(small_run, tmp_path):
    root, cfg = small_run
    assert run("eval", "--model", root / "run" / "model.tvmdl", "--manifest", root / "data" / "manifest.csv",
               "--out-dir", tmp_path / "ev", "--config", cfg, "--seed", 3, "--jobs", 2) == 0
    report = (tmp_path / "ev" / "report.csv").read_text().splitlines()
    assert report[0] == "dataset,noise_level,seed,fa,mr,hter,tp,tn,fp,fn"
    assert report[1].startswith("data,+15dB,3,")
    pred = tmp_path / "ev" / "predictions" / "test_snr+15_000.csv"
    lines = pred.read_text().splitlines()
    assert lines[0] == "frame_index,time_ms,raw_label,smoothed_label,v_first_spike,n_first_spike,v_max,n_max"
    assert len(lines) == 1 + (6 * 16000 - 640) // 320 + 1

    wav = root / "data" / "test_snr+15_000.wav"
    assert run("classify", "--model", root / "run" / "model.tvmdl", "--wav", wav,
               "--out-dir", tmp_path / "cl") == 0
    assert (tmp_path / "cl" / "predictions.csv").read_bytes() == pred.read_bytes()


def test_features_command(small_run, tmp_path):
    root, _ = small_run
    d = root / "data"
    assert run("features", "--manifest", d / "manifest.csv", "--split", "train", "--out-dir", tmp_path) == 0
    head = (tmp_path / "features.tvfeat").read_text().splitlines()
    assert head[0] == "TVFEAT v1 n_mels=128"
    assert len(head) == 1 + 2 * 299
    assert (tmp_path / "norm.txt").read_text().startswith("global_min=")
    assert run("features", "--wav", d / "test_snr+15_000.wav", "--labels", d / "test_snr+15_000.lab",
               "--norm", root / "run" / "norm.txt", "--out-dir", tmp_path / "one") == 0
    assert run("encode", "--features", tmp_path / "one" / "features.tvfeat", "--out-dir", tmp_path / "one") == 0
