"""Line-oriented ``key = value`` experiment configuration files.

Keys use dotted section prefixes, lists are comma-separated, ``#`` starts a
comment.  A config may start from a preset and override any of its fields:

    preset = fig3-left
    trials = 10
    aspect_ratios = 0.1, 0.5, 1.0
    model.signal_variances = 50, 25, 20, 15, 10
    model.overlap_pairs = 3:3, 4:4
    methods = pca, pca_plus_plus
    method.pca_plus_plus.s = 0.1d
    method.pca_plus_plus.k = 5
"""

from __future__ import annotations

from dataclasses import replace

from .errors import ConfigError
from .harness import METHOD_KINDS, ExperimentConfig, MethodSpec, ModelTemplate
from .presets import preset

_TOP_KEYS = {
    "preset", "name", "n", "trials", "base_seed", "norm", "scale_factor",
    "aspect_ratios", "sample_sizes", "snr_sweep", "theory_overlay", "methods",
}
_MODEL_KEYS = {
    "signal_variances", "background_variances", "noise_variance",
    "overlap_pairs", "factor_distribution",
}
_METHOD_KEYS = {"method", "k", "s", "eps_rel", "alpha", "standardize"}


def parse_config_text(text: str) -> dict[str, str]:
    """Parse the raw key/value pairs, preserving the last value per key."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        pairs[key.strip()] = value.strip()
    return pairs


def _floats(value: str, key: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"{key}: expected comma-separated numbers, got {value!r}") from None


def _ints(value: str, key: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"{key}: expected comma-separated integers, got {value!r}") from None


def _pairs(value: str, key: str) -> tuple[tuple[int, int], ...]:
    out = []
    for token in value.split(","):
        token = token.strip()
        if not token:
            continue
        if ":" not in token:
            raise ConfigError(f"{key}: expected 'i:j' pairs, got {token!r}")
        i, j = token.split(":", 1)
        try:
            out.append((int(i), int(j)))
        except ValueError:
            raise ConfigError(f"{key}: expected integer pair, got {token!r}") from None
    return tuple(out)


def _build_model(base: ModelTemplate | None, keys: dict[str, str]) -> ModelTemplate:
    fields = {}
    for key, value in keys.items():
        if key in ("signal_variances", "background_variances"):
            fields[key] = _floats(value, f"model.{key}")
        elif key == "noise_variance":
            fields[key] = float(value)
        elif key == "overlap_pairs":
            fields[key] = _pairs(value, "model.overlap_pairs")
        elif key == "factor_distribution":
            fields[key] = value
        else:
            raise ConfigError(f"unknown model key 'model.{key}'")
    if base is None:
        if "signal_variances" not in fields:
            raise ConfigError("model.signal_variances is required without a preset")
        return ModelTemplate(**fields)
    return replace(base, **fields)


def _build_methods(
    base: tuple[MethodSpec, ...] | None,
    labels: list[str] | None,
    params: dict[str, dict[str, str]],
) -> tuple[MethodSpec, ...]:
    by_label = {m.label: m for m in (base or ())}
    if labels is None:
        if base is None:
            raise ConfigError("methods list is required without a preset")
        labels = [m.label for m in base]
    specs = []
    for label in labels:
        spec = by_label.get(label)
        overrides = params.pop(label, {})
        kind = overrides.pop("method", None) or (spec.kind if spec else None)
        if kind is None:
            if label in METHOD_KINDS:
                kind = label
            else:
                raise ConfigError(
                    f"method {label!r} is not a known method kind; set method.{label}.method"
                )
        fields: dict = {"kind": kind, "label": label}
        if spec is not None and spec.kind == kind:
            fields.update(k=spec.k, s=spec.s, eps_rel=spec.eps_rel, alpha=spec.alpha)
        for key, value in overrides.items():
            if key == "k":
                fields["k"] = int(value)
            elif key == "s":
                fields["s"] = value
            elif key == "eps_rel":
                fields["eps_rel"] = float(value)
            elif key == "alpha":
                fields["alpha"] = float(value)
            elif key == "standardize":
                lowered = value.strip().lower()
                if lowered not in ("true", "false"):
                    raise ConfigError(f"method.{label}.standardize must be true or false")
                fields["standardize"] = lowered == "true"

            else:
                raise ConfigError(f"unknown method key 'method.{label}.{key}'")
        specs.append(MethodSpec(**fields))
    for leftover in params:
        raise ConfigError(f"method.{leftover}.* given but {leftover!r} is not in methods")
    return tuple(specs)


def config_from_pairs(pairs: dict[str, str]) -> ExperimentConfig:
    """Assemble an ExperimentConfig from parsed key/value pairs."""
    top: dict[str, str] = {}
    model_keys: dict[str, str] = {}
    method_params: dict[str, dict[str, str]] = {}
    for key, value in pairs.items():
        if key.startswith("model."):
            model_keys[key[len("model."):]] = value
        elif key.startswith("method."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ConfigError(f"expected method.<label>.<field>, got {key!r}")
            method_params.setdefault(parts[1], {})[parts[2]] = value
        elif key in _TOP_KEYS:
            top[key] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")

    base = preset(top["preset"]) if "preset" in top else None
    model = _build_model(base.model if base else None, model_keys)
    labels = None
    if "methods" in top:
        labels = [v.strip() for v in top["methods"].split(",") if v.strip()]
    methods = _build_methods(base.methods if base else None, labels, method_params)

    fields = {
        "name": top.get("name", base.name if base else "custom"),
        "model": model,
        "methods": methods,
    }
    for key, default in (
        ("n", base.n if base else None),
        ("trials", base.trials if base else 50),
        ("base_seed", base.base_seed if base else 1234),
    ):
        value = top.get(key)
        if value is not None:
            fields[key] = int(value)
        elif default is not None:
            fields[key] = default
        else:
            raise ConfigError(f"{key} is required without a preset")
    fields["norm"] = top.get("norm", base.norm if base else "operator")
    fields["scale_factor"] = float(top["scale_factor"]) if "scale_factor" in top else (
        base.scale_factor if base else 1.0
    )
    fields["aspect_ratios"] = (
        _floats(top["aspect_ratios"], "aspect_ratios")
        if "aspect_ratios" in top
        else (base.aspect_ratios if base else ())
    )
    fields["sample_sizes"] = (
        _ints(top["sample_sizes"], "sample_sizes")
        if "sample_sizes" in top
        else (base.sample_sizes if base else ())
    )
    fields["snr_sweep"] = (
        _floats(top["snr_sweep"], "snr_sweep")
        if "snr_sweep" in top
        else (base.snr_sweep if base else ())
    )
    if "theory_overlay" in top:
        overlay = top["theory_overlay"].strip().lower()
        fields["theory_overlay"] = None if overlay in ("", "none") else overlay
    else:
        fields["theory_overlay"] = base.theory_overlay if base else None
    fields["source"] = base.source if base else "custom configuration"
    return ExperimentConfig(**fields)


def load_config(path) -> ExperimentConfig:
    """Read and assemble a config file."""
    with open(path, "r", encoding="utf-8") as handle:
        return config_from_pairs(parse_config_text(handle.read()))
