"""``key=value`` run configuration covering every stage's parameters.

Keys are ``<section>.<field>`` for the sections below, plus the top-level
``seed`` and ``out_dir``. Unknown keys are rejected.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .encoder import EncoderConfig
from .energy import EnergyConstants
from .features import FeatureConfig
from .formats import _fmt_value, parse_value
from .neuron import NeuronParams
from .trainer import TrainConfig

SECTIONS = {
    "feature": FeatureConfig,
    "encoder": EncoderConfig,
    "neuron": NeuronParams,
    "train": TrainConfig,
    "energy": EnergyConstants,
}


@dataclass(frozen=True)
class RunConfig:
    feature: FeatureConfig = field(default_factory=FeatureConfig)
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    neuron: NeuronParams = field(default_factory=NeuronParams)
    train: TrainConfig = field(default_factory=TrainConfig)
    energy: EnergyConstants = field(default_factory=EnergyConstants)
    seed: int = 0
    out_dir: str = "."

    @classmethod
    def from_items(cls, items: dict[str, str], base: "RunConfig | None" = None) -> "RunConfig":
        base = base or cls()
        updates: dict[str, dict] = {s: {} for s in SECTIONS}
        top = {}
        for key, text in items.items():
            if key in ("seed", "out_dir"):
                top[key] = parse_value(text, getattr(base, key))
                continue
            section, _, name = key.partition(".")
            if section not in SECTIONS or name not in {f.name for f in dataclasses.fields(SECTIONS[section])}:
                raise ValueError(f"unknown config key {key!r}")
            current = getattr(base, section)
            try:
                updates[section][name] = parse_value(text, getattr(current, name))
            except ValueError as e:
                raise ValueError(f"bad value for {key}: {e}") from None
        kwargs = {s: dataclasses.replace(getattr(base, s), **u) for s, u in updates.items() if u}
        return dataclasses.replace(base, **kwargs, **top)

    @classmethod
    def load(cls, path) -> "RunConfig":
        items = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            items[k.strip()] = v.strip()
        return cls.from_items(items)

    def with_seed(self, seed: int) -> "RunConfig":
        return dataclasses.replace(self, seed=seed, train=dataclasses.replace(self.train, seed=seed))

    def dump(self) -> str:
        lines = []
        for s in SECTIONS:
            obj = getattr(self, s)
            lines += [f"{s}.{f.name}={_fmt_value(getattr(obj, f.name))}" for f in dataclasses.fields(obj)]
        lines += [f"seed={self.seed}", f"out_dir={self.out_dir}"]
        return "\n".join(lines) + "\n"
