import wave

import numpy as np
import pytest

from tempovad.data import (
    LabeledSegment, SynthConfig, frame_labels, load_labeled, make_corpus, measured_snr,
    parse_labels, read_manifest, read_wav, synth, write_labels, write_wav,
)
from tempovad.features import AudioClip, Label

V, N = Label.VOICE, Label.NOVOICE


def test_zero_duty_is_noise_only():
    res = synth(SynthConfig(duration_s=2.0, speech_duty=0.0))
    assert res.segments == [LabeledSegment(0, 2000, N)]
    assert not np.any(res.speech)
    assert set(frame_labels(res.segments, 99)) == {"N"}


def test_snr_changes_mix_not_labels():
    a = synth(SynthConfig(duration_s=3.0, snr_db=15.0, seed=4))
    b = synth(SynthConfig(duration_s=3.0, snr_db=-10.0, seed=4))
    assert a.segments == b.segments
    np.testing.assert_array_equal(a.speech, b.speech)
    assert not np.array_equal(a.clip.samples, b.clip.samples)


@pytest.mark.parametrize("snr", [15.0, 10.0, 5.0, 0.0, -5.0, -10.0])
@pytest.mark.parametrize("kind", ["white", "pink", "babble"])
def test_measured_snr(snr, kind):
    res = synth(SynthConfig(duration_s=3.0, snr_db=snr, seed=1, noise_kind=kind))
    assert abs(measured_snr(res.speech, res.noise, res.segments) - snr) <= 0.5
    # the clipped mixture still carries the SNR
    mix_noise = res.clip.samples - res.speech
    assert abs(measured_snr(res.speech, mix_noise, res.segments) - snr) <= 0.5


def test_seed_determinism():
    a = synth(SynthConfig(duration_s=2.0, seed=9, noise_kind="babble"))
    b = synth(SynthConfig(duration_s=2.0, seed=9, noise_kind="babble"))
    assert a.clip.samples.tobytes() == b.clip.samples.tobytes()
    assert a.segments == b.segments


def test_segments_cover_clip():
    res = synth(SynthConfig(duration_s=7.3, seed=2))
    segs = res.segments
    assert segs[0].start_ms == 0 and segs[-1].end_ms == 7300
    assert all(p.end_ms == c.start_ms for p, c in zip(segs, segs[1:]))
    assert {s.label for s in segs} == {V, N}
    assert len(res.clip) == 7300 * 16


def test_synth_config_validation():
    with pytest.raises(ValueError):
        SynthConfig(speech_duty=1.0)
    with pytest.raises(ValueError):
        SynthConfig(noise_kind="traffic")


def test_frame_labels_majority_and_tie():
    # frame 0 spans 0-40 ms
    assert frame_labels([LabeledSegment(0, 30, V), LabeledSegment(30, 100, N)], 1)[0] == "V"
    assert frame_labels([LabeledSegment(0, 20, V), LabeledSegment(20, 100, N)], 1)[0] == "V"
    assert frame_labels([LabeledSegment(0, 10, V), LabeledSegment(10, 100, N)], 1)[0] == "N"
    assert set(frame_labels([LabeledSegment(0, 1000, N)], 49)) == {"N"}


def test_parse_labels_ok():
    segs = parse_labels("0 120 N\n120 400 V\n\n400 500 N\n")
    assert segs == [LabeledSegment(0, 120, N), LabeledSegment(120, 400, V), LabeledSegment(400, 500, N)]


@pytest.mark.parametrize("text, msg", [
    ("0 100 N\n90 200 V\n", "overlap"),
    ("0 100 N\n110 200 V\n", "gap"),
    ("0 100 X\n", "expected"),
    ("0 abc N\n", "integer"),
    ("10 100 N\n", "start at 0"),
    ("", "no segments"),
])
def test_parse_labels_errors(text, msg):
    with pytest.raises(ValueError, match=msg):
        parse_labels(text)


def test_wav_roundtrip_and_load(tmp_path):
    res = synth(SynthConfig(duration_s=1.0, seed=3))
    write_wav(tmp_path / "a.wav", res.clip)
    write_labels(tmp_path / "a.lab", res.segments)
    clip, segs = load_labeled(tmp_path / "a.wav", tmp_path / "a.lab")
    assert segs == res.segments
    np.testing.assert_allclose(clip.samples, res.clip.samples, atol=1 / 32767)


def test_wrong_rate_rejected(tmp_path):
    with wave.open(str(tmp_path / "b.wav"), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(44100)
        w.writeframes(np.zeros(100, dtype="<i2").tobytes())
    with pytest.raises(ValueError, match="resample"):
        read_wav(tmp_path / "b.wav")


def test_short_labels_rejected(tmp_path):
    write_wav(tmp_path / "c.wav", AudioClip(np.zeros(16000)))
    (tmp_path / "c.lab").write_text("0 500 N\n")
    with pytest.raises(ValueError, match="lasts"):
        load_labeled(tmp_path / "c.wav", tmp_path / "c.lab")


def test_make_corpus(tmp_path):
    m = make_corpus(tmp_path, snrs=(15.0, -10.0), n_train=2, n_test=1, duration_s=1.0, seed=1)
    rows = read_manifest(m)
    assert [(r.split, r.snr_db) for r in rows] == [("train", 15.0)] * 2 + [("test", 15.0)] + \
        [("train", -10.0)] * 2 + [("test", -10.0)]
    assert m.read_text().splitlines()[0] == "clip_path,label_path,snr_db,split"
    # same speech and labels across SNR levels
    assert (tmp_path / "train_snr+15_000.lab").read_text() == (tmp_path / "train_snr-10_000.lab").read_text()
