"""Frame-level false alarm, miss and half total error rates."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import Label


@dataclass(frozen=True)
class Metrics:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def fa(self) -> float:
        return self.fp / (self.fp + self.tn)

    @property
    def mr(self) -> float:
        return self.fn / (self.fn + self.tp)

    @property
    def hter(self) -> float:
        return 0.5 * self.mr + 0.5 * self.fa


def _as_voice(seq) -> np.ndarray:
    vals = [Label(getattr(x, "value", x)) for x in seq]
    if any(v is Label.UNLABELED for v in vals):
        raise ValueError("streams must contain only V/N labels")
    return np.array([v is Label.VOICE for v in vals], dtype=bool)


def score(pred, truth) -> Metrics:
    """Count outcomes with Voice as the positive class.

    Raises ValueError on length mismatch or if truth lacks either class.
    """
    p, t = _as_voice(pred), _as_voice(truth)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.shape[0]} predictions vs {t.shape[0]} labels")
    if not t.any() or t.all():
        raise ValueError("truth must contain both classes for FA and MR to be defined")
    return Metrics(
        tp=int(np.sum(p & t)), tn=int(np.sum(~p & ~t)),
        fp=int(np.sum(p & ~t)), fn=int(np.sum(~p & t)),
    )
