"""Named experiment presets.

Each preset is one run, a group of runs, or a refinement table. The spiral
presets at their full horizons take hours to days; use ``scale`` to
run a prefix of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .config import ExperimentConfig

ELLIPSE_AREA = 3.0 * math.pi
REFINEMENT = ((25, 0.016, 125), (50, 0.004, 500), (100, 0.001, 2000), (200, 0.00025, 8000))


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    configs: tuple[ExperimentConfig, ...]
    table: bool = False
    exact_area: float | None = None

    def scaled(self, factor: float) -> "Preset":
        if self.table:
            raise ValueError("refinement tables cannot be scaled")
        return replace(self, configs=tuple(cfg.scaled(factor) for cfg in self.configs))

    def with_overrides(self, **overrides) -> "Preset":
        return replace(self, configs=tuple(replace(cfg, **overrides) for cfg in self.configs))


def _ellipse(**kw):
    base = dict(curve="ellipse", ellipse_a=3.0, ellipse_b=1.0, n=100, tau=1e-3)
    base.update(kw)
    return ExperimentConfig(**base)


def _spiral(**kw):
    base = dict(curve="spiral", kappa1=10.0)
    base.update(kw)
    return ExperimentConfig(**base)


def _table(mode, **kw):
    return tuple(
        _ellipse(
            name=f"n{n}",
            model="surface_diffusion",
            n=n,
            tau=tau,
            steps=steps,
            redistribution=mode,
            kappa1=10.0,
            snapshot_every=steps // 10,
            exact_area=ELLIPSE_AREA,
            **kw,
        )
        for n, tau, steps in REFINEMENT
    )


def _build():
    presets = [
        Preset("fig1a", "affine shrinking ellipse 3:1 with AUTR (kappa1 = 3)", (
            _ellipse(name="fig1a", model="affine", steps=1500, kappa1=3.0, snapshot_every=100, marker_every=200),)),
        Preset("fig1b", "affine shrinking ellipse 3:1 without redistribution", (
            _ellipse(name="fig1b", model="affine", steps=1500, redistribution="none", snapshot_every=100,
                     marker_every=200),)),
        Preset("fig2", "anisotropic curve shortening of an ellipse 3:1 with AUTR", (
            _ellipse(name="fig2", model="anisotropic", steps=1500, kappa1=3.0, snapshot_every=100, marker_every=200),)),
        Preset("fig3a", "surface diffusion of an ellipse 3:1 with AUTR", (
            _ellipse(name="fig3a", model="surface_diffusion", steps=2000, kappa1=10.0, snapshot_every=200,
                     marker_every=400, exact_area=ELLIPSE_AREA),)),
        Preset("fig3b", "surface diffusion of an ellipse 3:1 without redistribution", (
            _ellipse(name="fig3b", model="surface_diffusion", steps=2000, redistribution="none", snapshot_every=200,
                     marker_every=400, max_iters=100_000, exact_area=ELLIPSE_AREA),)),
        Preset("table1", "area-error refinement study, surface diffusion with AUTR", _table("autr"), table=True,
               exact_area=ELLIPSE_AREA),
        Preset("table2", "area-error refinement study, surface diffusion without redistribution",
               _table("none", max_iters=200_000), table=True, exact_area=ELLIPSE_AREA),
        Preset("fig4a", "backward curvature flow with expanding force, strong Willmore regularization (delta = 1)", (
            _ellipse(name="fig4a", model="willmore_backward", delta=1.0, force=-1.0, steps=2000, kappa1=10.0,
                     snapshot_every=200, marker_every=400),)),
        Preset("fig4b", "backward curvature flow with expanding force, weak Willmore regularization (delta = 0.1)", (
            _ellipse(name="fig4b", model="willmore_backward", delta=0.1, force=-1.0, steps=1800, kappa1=10.0,
                     snapshot_every=200),)),
        Preset("fig5", "continuation of fig4b to step 2200: AUTR against relative-local-length redistribution", (
            _ellipse(name="fig5_autr", model="willmore_backward", delta=0.1, force=-1.0, steps=2200, kappa1=10.0,
                     snapshot_steps=(0, 1800, 2000, 2200), marker_every=200),
            _ellipse(name="fig5_rll", model="willmore_backward", delta=0.1, force=-1.0, steps=2200,
                     redistribution="rll", snapshot_steps=(0, 1800, 2000, 2200), marker_every=200),
        )),
        Preset("backward_weak", "backward curvature flow with expanding force, delta = 0.01, n = 400", (
            _ellipse(name="backward_weak", model="willmore_backward", delta=0.01, force=-1.0, n=400, tau=1e-4,
                     steps=3000, kappa1=10.0, snapshot_every=1000),)),
        Preset("fig6a", "mean curvature flow of the spiral", (
            _spiral(name="fig6a", model="mean_curvature", n=100, tau=1e-6, steps=65_000,
                    snapshot_steps=(0, 10_000, 20_000, 30_000, 40_000, 50_000, 60_000, 65_000), marker_every=65_000),)),
        Preset("fig6b", "surface diffusion of the spiral", (
            _spiral(name="fig6b", model="surface_diffusion", n=100, tau=1e-10, steps=1_000_000,
                    snapshot_steps=tuple(j * 10_000 for j in (0, 1, 5, 10, 20, 40, 60, 80, 100)),
                    marker_every=1_000_000),)),
    ]
    for suffix, delta in (("a", 1.0), ("b", 0.1), ("c", 0.01)):
        presets.append(Preset(
            f"fig7{suffix}",
            f"spiral under backward curvature flow with Willmore regularization delta = {delta}",
            (_spiral(name=f"fig7{suffix}", model="willmore_backward", delta=delta, force=0.0, n=200, tau=1e-12,
                     steps=1_000_000_000, kappa1=100.0,
                     snapshot_steps=(0, 10**5, 10**6, 10**7, 10**8, 4 * 10**8, 10**9), marker_every=10**9),),
        ))
    presets.append(Preset("circle_mcf_oracle", "unit circle under mean curvature flow up to t = 0.1", (
        ExperimentConfig(name="circle_mcf_oracle", model="mean_curvature", curve="circle", radius=1.0, n=200,
                         tau=1e-5, steps=10_000, snapshot_every=1000),)))
    return {p.name: p for p in presets}


PRESETS = _build()


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
