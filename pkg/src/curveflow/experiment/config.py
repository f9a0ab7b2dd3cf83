"""Experiment configuration: a flat ``key = value`` file mirrored by CLI flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from ..flows import FlowSpec, builtin_flow
from ..redistribution import RedistParams
from ..stepper import StepParams

OUT_ENV = "CURVEFLOW_OUT"
DEFAULT_OUT = "curveflow_out"


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in {"1", "true", "yes", "on"}:
        return True
    if value in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int(text: str) -> int:
    # accept 1e6-style step counts
    value = float(text)
    if value != int(value):
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _int_tuple(text: str) -> tuple[int, ...]:
    return tuple(_int(part) for part in text.replace(";", ",").split(",") if part.strip())


def _optional(conv):
    def parse(text):
        return None if text.strip().lower() in {"", "none", "default"} else conv(text)

    return parse


@dataclass(frozen=True)
class ExperimentConfig:
    name: str = "run"
    model: str = "mean_curvature"
    delta: float | None = None
    force: float | None = None
    curve: str = "ellipse"
    ellipse_a: float = 3.0
    ellipse_b: float = 1.0
    radius: float = 1.0
    n: int = 100
    tau: float = 1e-3
    steps: int = 100
    redistribution: str = "autr"
    kappa1: float = 10.0
    kappa2: float = 0.0
    sor_relax: float = 1.6
    tol: float = 1e-10
    max_iters: int | None = None
    out: str | None = None
    snapshot_every: int = 100
    snapshot_steps: tuple[int, ...] = ()
    marker_every: int | None = None
    svg: bool = True
    csv: bool = True
    exact_area: float | None = None
    notes: str = field(default="", compare=False)

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")
        if self.curve not in ("ellipse", "circle", "spiral"):
            raise ValueError(f"unknown initial curve {self.curve!r}")
        # fail early on bad model names and redistribution settings
        self.flow()
        self.redist()
        self.step_params()

    def flow(self) -> FlowSpec:
        params = {}
        if self.delta is not None:
            params["delta"] = self.delta
        if self.force is not None:
            params["force"] = self.force
        return builtin_flow(self.model, params)

    def redist(self) -> RedistParams:
        return RedistParams(self.redistribution, self.kappa1, self.kappa2)

    def step_params(self) -> StepParams:
        return StepParams(tau=self.tau, sor_relax=self.sor_relax, tol=self.tol, max_iters=self.max_iters)

    def output_dir(self) -> Path:
        root = self.out or os.environ.get(OUT_ENV) or DEFAULT_OUT
        return Path(root)

    def is_snapshot(self, j: int) -> bool:
        if self.snapshot_steps:
            return j in self.snapshot_steps or j == self.steps
        return j % self.snapshot_every == 0 or j == self.steps

    def has_markers(self, j: int) -> bool:
        return self.marker_every is not None and j % self.marker_every == 0

    def scaled(self, factor: float) -> "ExperimentConfig":
        """Same run over ``factor`` times as many steps (snapshot cadence scaled too)."""
        if not 0 < factor <= 1:
            raise ValueError("scale must lie in (0, 1]")
        if factor == 1:
            return self

        def shrink(j):
            return max(1, round(j * factor))

        return replace(
            self,
            steps=shrink(self.steps),
            snapshot_every=shrink(self.snapshot_every),
            snapshot_steps=tuple(sorted({0 if j == 0 else shrink(j) for j in self.snapshot_steps})),
            marker_every=None if self.marker_every is None else shrink(self.marker_every),
        )

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "notes":
                continue
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            lines.append(f"{f.name} = {'none' if value is None else value}")
        return "\n".join(lines) + "\n"


_PARSERS = {
    "name": str,
    "model": str,
    "delta": _optional(float),
    "force": _optional(float),
    "curve": str,
    "ellipse_a": float,
    "ellipse_b": float,
    "radius": float,
    "n": _int,
    "tau": float,
    "steps": _int,
    "redistribution": str,
    "kappa1": float,
    "kappa2": float,
    "sor_relax": float,
    "tol": float,
    "max_iters": _optional(_int),
    "out": _optional(str),
    "snapshot_every": _int,
    "snapshot_steps": _int_tuple,
    "marker_every": _optional(_int),
    "svg": _bool,
    "csv": _bool,
    "exact_area": _optional(float),
    "notes": str,
}
CONFIG_KEYS = tuple(_PARSERS)


def parse_value(key: str, text: str):
    key = key.strip().replace("-", "_")
    if key not in _PARSERS:
        raise KeyError(f"unknown config key {key!r}")
    try:
        return key, _PARSERS[key](text.strip())
    except ValueError as exc:
        raise ValueError(f"bad value for {key}: {exc}") from None


def parse_config_text(text: str, source: str = "<string>") -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        try:
            key, parsed = parse_value(key, value)
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
        values[key] = parsed
    return values


def load_config(path) -> dict:
    path = Path(path)
    return parse_config_text(path.read_text(), source=str(path))


def build_config(base: ExperimentConfig | None = None, **overrides) -> ExperimentConfig:
    base = base or ExperimentConfig()
    return replace(base, **{k: v for k, v in overrides.items()})
