import os
import subprocess
import sys


def backend_under(env_value):
    env = dict(os.environ, TEMPOVAD_PURE=env_value)
    out = subprocess.run([sys.executable, "-c", "import tempovad; print(tempovad.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_pure_flag_forces_fallback():
    assert backend_under("1") == "python"


def test_default_prefers_compiled():
    from tempovad import _backend

    expected = "cython"
    try:
        import tempovad._kernels  # noqa: F401
    except ImportError:
        expected = "python"
    assert backend_under("0") == expected
    assert _backend.BACKEND in ("python", "cython")


def test_fallback_end_to_end_agrees():
    """Short training under each backend yields the same weights."""
    code = (
        "import numpy as np\n"
        "from tempovad.features import FrameSet\n"
        "from tempovad.trainer import TrainConfig, train\n"
        "rng = np.random.default_rng(0)\n"
        "y = np.array(['V', 'N'] * 20)\n"
        "X = np.clip(np.where(y == 'V', 0.7, 0.3)[:, None] + rng.normal(0, 0.1, (40, 128)), 0, 1)\n"
        "m, _ = train(FrameSet(X, y), TrainConfig(groups=2, group_size=30))\n"
        "print(repr(float(m.weights_v.sum())), repr(float(m.weights_n.sum())))\n"
    )
    outs = set()
    for flag in ("0", "1"):
        env = dict(os.environ, TEMPOVAD_PURE=flag)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        outs.add(tuple(round(float(x), 9) for x in res.stdout.split()))
    assert len(outs) == 1
