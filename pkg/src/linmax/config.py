"""Experiment configuration: the TOML schema and its validation.

Schema::

    [law]        alpha, p, scale            # r is derived as 1 - p
    [model]      kind = "deterministic" | "geometric" | "power"
                 # deterministic: values = [ ... ]
                 # geometric:     rho, amplitude = x | {lo, hi}, sign_pattern?
                 # power:         beta, base = x | {lo, hi}
    [experiment] n_grid, replicates, t_grid?, delta?, q_grid?,
                 master_seed?, mc_draws?, initial_convention?
    [output]     dir?
    [thresholds] # optional verify gates, see harness.evaluate_thresholds
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .coefficients import CoefficientModel, Deterministic, GeometricRandom, PowerDecay
from .errors import ConfigurationError
from .innovations import TailLaw


@dataclass(frozen=True)
class ExperimentConfig:
    law: TailLaw
    model: CoefficientModel
    n_grid: Tuple[int, ...]
    replicates: int
    t_grid: Tuple[float, ...] = (1.0,)
    delta: float = 0.25
    q_grid: Tuple[int, ...] = (2, 20)
    master_seed: int = 0
    mc_draws: int = 10000
    output_dir: str = "out"
    initial_convention: str = "first_value"
    thresholds: Dict[str, object] = field(default_factory=dict)

    def validate(self) -> None:
        if not self.n_grid:
            raise ConfigurationError("experiment.n_grid must be nonempty")
        if any(n < 1 for n in self.n_grid) or list(self.n_grid) != sorted(self.n_grid):
            raise ConfigurationError("experiment.n_grid must be ascending positive integers")
        if self.replicates < 1:
            raise ConfigurationError("experiment.replicates must be at least 1")
        if not self.t_grid or any(not 0.0 < t <= 1.0 for t in self.t_grid):
            raise ConfigurationError("experiment.t_grid values must lie in (0, 1]")
        if not self.delta > 0:
            raise ConfigurationError("experiment.delta must be positive")
        if any(q < 2 for q in self.q_grid) or list(self.q_grid) != sorted(self.q_grid):
            raise ConfigurationError("experiment.q_grid must be ascending integers >= 2")
        if self.mc_draws < 1:
            raise ConfigurationError("experiment.mc_draws must be at least 1")
        if self.initial_convention not in ("first_value", "zero"):
            raise ConfigurationError("experiment.initial_convention must be 'first_value' or 'zero'")


def _require(section: dict, section_name: str, key: str):
    if key not in section:
        raise ConfigurationError(f"missing config key '{section_name}.{key}'")
    return section[key]


def _interval(raw, name: str) -> Tuple[float, float]:
    if isinstance(raw, dict):
        return float(_require(raw, name, "lo")), float(_require(raw, name, "hi"))
    return float(raw), float(raw)


def _parse_model(section: dict) -> CoefficientModel:
    kind = _require(section, "model", "kind")
    try:
        if kind == "deterministic":
            return Deterministic(tuple(float(v) for v in _require(section, "model", "values")))
        if kind == "geometric":
            lo, hi = _interval(section.get("amplitude", 1.0), "model.amplitude")
            pattern = tuple(int(s) for s in section.get("sign_pattern", [1]))
            return GeometricRandom(
                rho=float(_require(section, "model", "rho")),
                amplitude_lo=lo, amplitude_hi=hi, sign_pattern=pattern,
            )
        if kind == "power":
            lo, hi = _interval(section.get("base", 1.0), "model.base")
            return PowerDecay(beta=float(_require(section, "model", "beta")), base_lo=lo, base_hi=hi)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"invalid model section: {exc}") from exc
    raise ConfigurationError(f"unknown model.kind {kind!r}")


def parse_config(data: dict) -> ExperimentConfig:
    law_section = _require(data, "", "law")
    model_section = _require(data, "", "model")
    exp = _require(data, "", "experiment")
    try:
        law = TailLaw(
            alpha=float(_require(law_section, "law", "alpha")),
            p=float(_require(law_section, "law", "p")),
            scale=float(law_section.get("scale", 1.0)),
        )
    except ValueError as exc:
        raise ConfigurationError(f"invalid law section: {exc}") from exc
    model = _parse_model(model_section)
    config = ExperimentConfig(
        law=law,
        model=model,
        n_grid=tuple(int(n) for n in _require(exp, "experiment", "n_grid")),
        replicates=int(_require(exp, "experiment", "replicates")),
        t_grid=tuple(sorted(float(t) for t in exp.get("t_grid", [1.0]))),
        delta=float(exp.get("delta", 0.25)),
        q_grid=tuple(int(q) for q in exp.get("q_grid", [2, 20])),
        master_seed=int(exp.get("master_seed", 0)),
        mc_draws=int(exp.get("mc_draws", 10000)),
        output_dir=str(data.get("output", {}).get("dir", "out")),
        initial_convention=str(exp.get("initial_convention", "first_value")),
        thresholds=dict(data.get("thresholds", {})),
    )
    config.validate()
    return config


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"config file is not valid TOML: {exc}") from exc
    return parse_config(data)


def config_echo(config: ExperimentConfig) -> dict:
    """A JSON-serializable echo of the configuration for reports."""
    model = config.model
    if isinstance(model, Deterministic):
        model_echo = {"kind": "deterministic", "values": list(model.values)}
    elif isinstance(model, GeometricRandom):
        model_echo = {
            "kind": "geometric", "rho": model.rho,
            "amplitude": {"lo": model.amplitude_lo, "hi": model.amplitude_hi},
            "sign_pattern": list(model.sign_pattern),
        }
    else:
        model_echo = {
            "kind": "power", "beta": model.beta,
            "base": {"lo": model.base_lo, "hi": model.base_hi},
        }
    return {
        "law": {"alpha": config.law.alpha, "p": config.law.p, "r": config.law.r, "scale": config.law.scale},
        "model": model_echo,
        "experiment": {
            "n_grid": list(config.n_grid),
            "replicates": config.replicates,
            "t_grid": list(config.t_grid),
            "delta": config.delta,
            "q_grid": list(config.q_grid),
            "master_seed": config.master_seed,
            "mc_draws": config.mc_draws,
            "initial_convention": config.initial_convention,
        },
        "output": {"dir": config.output_dir},
        "thresholds": dict(config.thresholds),
    }
