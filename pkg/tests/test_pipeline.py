import numpy as np
import pytest
from hypothesis import given, strategies as st

from tempovad.encoder import encode_frame
from tempovad.features import Label, NormStats
from tempovad.neuron import NeuronTrace, simulate
from tempovad.pipeline import RawPrediction, classify_features, decide_frame, smooth
from tempovad.trainer import TempotronModel

V, N = Label.VOICE, Label.NOVOICE


def tr(spike=None, v_max=0.0):
    return NeuronTrace(spike, v_max, spike or 0.0)


def test_first_spike_wins():
    p = decide_frame(tr(12.0, 1.0), tr(30.0, 1.0))
    assert p.label is V and p.basis == "first_spike"
    assert decide_frame(tr(40.0, 1.0), tr(30.0, 1.0)).label is N


def test_single_spiker_wins():
    assert decide_frame(tr(None, 0.9), tr(50.0, 1.0)).label is N
    assert decide_frame(tr(50.0, 1.0), tr(None, 0.99)).label is V


def test_voltage_fallback():
    p = decide_frame(tr(None, 0.7), tr(None, 0.4))
    assert p.label is V and p.basis == "voltage_fallback"
    assert decide_frame(tr(None, 0.2), tr(None, 0.4)).label is N


def test_ties_go_to_novoice():
    assert decide_frame(tr(20.0, 1.0), tr(20.0, 1.0)).label is N
    assert decide_frame(tr(None, 0.5), tr(None, 0.5)).label is N


def test_symmetric_weights_tie():
    pat = encode_frame(np.random.default_rng(0).uniform(size=128))
    w = np.full(1280, 0.05)
    for weights in (w, w * 30):
        p = decide_frame(simulate(pat, weights), simulate(pat, weights.copy()))
        assert p.label is N


@given(st.one_of(st.none(), st.floats(0, 160)), st.one_of(st.none(), st.floats(0, 160)),
       st.floats(-1.5, 3), st.floats(-1.5, 3))
def test_decide_total(sv, sn, mv, mn):
    p = decide_frame(NeuronTrace(sv, mv, 0.0), NeuronTrace(sn, mn, 0.0))
    assert p.label in (V, N)
    assert (p.basis == "first_spike") == (sv is not None or sn is not None)


def labels(s):
    return [V if c == "V" else N for c in s]


def test_smooth_examples():
    assert smooth(labels("VVNVV"))[4] is V
    assert smooth(labels("VVVVVVNVVVV")) == labels("VVVVVVVVVVV")
    assert smooth(labels("N")) == labels("N")
    assert smooth(labels("VN")) == labels("VN")  # window of 2 shrinks to 1
    assert smooth(labels("VNN"))[2] is N
    assert smooth([]) == []


def test_smooth_accepts_raw_predictions():
    raw = [RawPrediction(lab, "first_spike", None, None, 0.0, 0.0) for lab in labels("NNVNN")]
    assert smooth(raw) == labels("NNNNN")


@given(st.lists(st.sampled_from("VN"), max_size=60))
def test_smooth_properties(s):
    out = smooth(labels(s))
    assert len(out) == len(s)
    lab = labels(s)
    for i in range(4, len(s)):
        if len(set(s[i - 4: i + 1])) == 1:
            assert out[i] is lab[i]


def test_classify_features_shapes():
    m = TempotronModel(np.full(1280, 0.3), np.zeros(1280), norm=NormStats(-10.0, 0.0))
    feats = np.random.default_rng(1).uniform(-10, 0, (7, 128))
    res = classify_features(feats, m)
    assert len(res) == 7 and len(res.raw) == 7
    np.testing.assert_allclose(res.frame_times_ms, np.arange(7) * 20.0)
    assert all(r.label is V for r in res.raw)


def test_classify_needs_norm():
    m = TempotronModel(np.zeros(1280), np.zeros(1280))
    with pytest.raises(ValueError):
        classify_features(np.zeros((1, 128)), m)
