"""Built-in experiment configurations.

Each preset pins the full protocol of one benchmark figure or table: model
spikes, sample sizes, aspect-ratio grid, methods with their truncation ranks,
and the closed-form overlay where one is defined.  Config files can override
any field (see :mod:`pairpca.config`).
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput
from .harness import ExperimentConfig, MethodSpec, ModelTemplate

RATIO_GRID = (0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.8)

ONE_SPIKE = ModelTemplate(signal_variances=(10.0,), background_variances=(500.0,))
FIVE_SPIKE = ModelTemplate(
    signal_variances=(50.0, 25.0, 20.0, 15.0, 10.0),
    background_variances=(500.0, 400.0, 300.0, 200.0, 100.0),
)
TABLE_SIGNAL = (20.0, 20.0, 15.0, 10.0, 10.0)

_PCA = MethodSpec(kind="pca")
_PCA_PLUS = MethodSpec(kind="pca_plus")


def _pcapp(s, label: str = "pca_plus_plus") -> MethodSpec:
    return MethodSpec(kind="pca_plus_plus", label=label, s=s)


def _overlap_template(shared: tuple[float, float]) -> ModelTemplate:
    return ModelTemplate(
        signal_variances=(50.0, 25.0, 20.0, 15.0, 10.0),
        background_variances=(500.0, 400.0, 300.0) + shared,
        overlap_pairs=((3, 3), (4, 4)),
    )


def _appendix_g(background: tuple[float, ...], name: str, source: str) -> ExperimentConfig:
    return ExperimentConfig(
        name=name,
        model=ModelTemplate(
            signal_variances=(50.0, 25.0, 20.0, 15.0, 10.0),
            background_variances=background,
        ),
        n=500,
        aspect_ratios=RATIO_GRID,
        methods=(
            MethodSpec(kind="cpca", alpha=1.0),
            MethodSpec(kind="cpca_pp", s=10),
            MethodSpec(kind="cca", standardize=True),
            _pcapp(10),
        ),
        theory_overlay="fixed",
        source=source,
    )


def _build_catalog() -> dict[str, ExperimentConfig]:
    catalog: dict[str, ExperimentConfig] = {}

    catalog["fig1-left"] = ExperimentConfig(
        name="fig1-left",
        model=ONE_SPIKE,
        n=2000,
        aspect_ratios=(0.4,),
        snr_sweep=tuple(round(x, 6) for x in np.linspace(0.3125, 0.666, 8)),
        methods=(_PCA, _PCA_PLUS, _pcapp(2)),
        source="one signal/one background at n=2000, d=800; sweep of the "
        "signal-to-background strength ratio (8 even steps, 0.3125 to 0.666)",
    )
    catalog["fig1-right"] = ExperimentConfig(
        name="fig1-right",
        model=ONE_SPIKE,
        n=500,
        aspect_ratios=RATIO_GRID,
        methods=(_PCA, _PCA_PLUS, _pcapp(2)),
        source="one signal (10) / one background (500) at n=500; aspect-ratio sweep",
    )
    catalog["fig2-left"] = ExperimentConfig(
        name="fig2-left",
        model=ONE_SPIKE,
        n=1000,
        aspect_ratios=RATIO_GRID,
        methods=(
            _pcapp(2, label="pca_plus_plus_s2"),
            _pcapp("full", label="pca_plus_plus_untruncated"),
        ),
        source="truncation stability: rank-2 truncation vs untruncated "
        "uniformity constraint, n=1000, one signal/one background",
    )
    catalog["fig2-right"] = ExperimentConfig(
        name="fig2-right",
        model=ONE_SPIKE,
        n=1000,
        aspect_ratios=RATIO_GRID,
        methods=(
            _pcapp(2, label="pca_plus_plus_s2"),
            _pcapp("0.1d", label="pca_plus_plus_s0.1d"),
            _pcapp("0.2d", label="pca_plus_plus_s0.2d"),
            _pcapp("0.4d", label="pca_plus_plus_s0.4d"),
        ),
        source="truncation-rank trade-off: s in {2, 0.1d, 0.2d, 0.4d}, n=1000",
    )
    catalog["fig3-left"] = ExperimentConfig(
        name="fig3-left",
        model=FIVE_SPIKE,
        n=500,
        aspect_ratios=RATIO_GRID,
        methods=(_PCA, _PCA_PLUS, _pcapp(10)),
        theory_overlay="fixed",
        source="five signal spikes [50..10] vs five background spikes [500..100] "
        "at n=500, s=10; fixed-aspect-ratio regime with closed-form overlay",
    )
    catalog["fig3-right"] = ExperimentConfig(
        name="fig3-right",
        model=FIVE_SPIKE,
        n=500,
        aspect_ratios=RATIO_GRID,
        methods=(_PCA, _PCA_PLUS, _pcapp(10)),
        scale_factor=10.0,
        theory_overlay="growing",
        source="growing-spike regime: dimension and all spikes scaled by 10; "
        "overlay is the effective-SNR limit of the weakest signal spike",
    )
    for name, background, noise in (
        ("table1", (500.0, 500.0, 200.0, 100.0, 100.0), "large"),
        ("table2", (100.0, 100.0, 50.0, 25.0, 25.0), "mild"),
    ):
        catalog[name] = ExperimentConfig(
            name=name,
            model=ModelTemplate(signal_variances=TABLE_SIGNAL, background_variances=background),
            n=5000,
            sample_sizes=(100, 500, 5000),
            aspect_ratios=(0.4,),
            methods=(_PCA, _PCA_PLUS, _pcapp(10)),
            theory_overlay="fixed",
            source=f"fixed aspect ratio d/n=0.4 under {noise} background noise; "
            "n in {100, 500, 5000}",
        )
    for level, shared in (("moderate", (25.0, 12.5)), ("large", (100.0, 50.0))):
        for regime, scale, overlay in (("fixed", 1.0, "fixed"), ("growing", 10.0, "growing")):
            name = f"appendix-overlap-{level}-{regime}"
            catalog[name] = ExperimentConfig(
                name=name,
                model=_overlap_template(shared),
                n=500,
                aspect_ratios=RATIO_GRID,
                methods=(_pcapp(10),),
                scale_factor=scale,
                theory_overlay=overlay,
                source=f"overlapping subspaces ({level} shared background "
                f"{list(shared)}), {regime} regime; overlay derived under orthogonality",
            )
    for regime, scale, overlay in (("fixed", 1.0, "fixed"), ("growing", 10.0, "growing")):
        name = f"appendix-beta-{regime}"
        catalog[name] = ExperimentConfig(
            name=name,
            model=ModelTemplate(
                signal_variances=FIVE_SPIKE.signal_variances,
                background_variances=FIVE_SPIKE.background_variances,
                factor_distribution="beta22",
            ),
            n=500,
            aspect_ratios=RATIO_GRID,
            methods=(_pcapp(10),),
            scale_factor=scale,
            theory_overlay=overlay,
            source=f"standardized Beta(2,2) factors and noise, {regime} regime; "
            "overlay derived under Gaussian factors",
        )
    catalog["appendix-degenerate"] = ExperimentConfig(
        name="appendix-degenerate",
        model=ModelTemplate(
            signal_variances=(50.0, 50.0, 20.0, 15.0, 10.0),
            background_variances=(500.0, 500.0, 300.0, 50.0, 50.0),
        ),
        n=500,
        aspect_ratios=RATIO_GRID,
        methods=(_pcapp(10),),
        theory_overlay="fixed",
        source="repeated spike strengths (degenerate spectrum); overlay derived "
        "under distinct spikes",
    )
    catalog["appendix-g-moderate"] = _appendix_g(
        (100.0, 50.0, 40.0, 30.0, 20.0),
        "appendix-g-moderate",
        "baseline comparison (cPCA alpha=1, cPCA++, CCA, hard-uniformity) under "
        "moderate background noise, n=500",
    )
    catalog["appendix-g-large"] = _appendix_g(
        (500.0, 400.0, 300.0, 200.0, 100.0),
        "appendix-g-large",
        "baseline comparison (cPCA alpha=1, cPCA++, CCA, hard-uniformity) under "
        "large background noise, n=500",
    )
    return catalog


_CATALOG = _build_catalog()


def preset_names() -> list[str]:
    return list(_CATALOG)


def preset(name: str) -> ExperimentConfig:
    """Look up a preset by name."""
    try:
        return _CATALOG[name]
    except KeyError:
        raise InvalidInput(
            f"unknown preset {name!r}; available: {', '.join(_CATALOG)}"
        ) from None
