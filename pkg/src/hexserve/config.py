"""Pipeline configuration: JSON document with strict keys, flag overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from importlib import resources

from .boost import FitConfig


class ConfigError(ValueError):
    pass


_FIT_KEYS = {"n_stages", "learning_rate", "max_depth", "min_samples_leaf", "seed"}


@dataclass(frozen=True)
class PipelineConfig:
    resolution: int = 9
    whitelist_path: str | None = None  # None selects the packaged default list
    fit: FitConfig = field(default_factory=FitConfig)
    k_folds: int = 5
    n_clusters: int = 2
    top_k_features: int = 50
    seed: int = 0
    min_stops_per_cell: int = 1
    normalize_cluster_vectors: bool = False

    def __post_init__(self):
        if not 0 <= self.resolution <= 15:
            raise ConfigError(f"resolution {self.resolution} outside [0, 15]")
        if self.k_folds < 2:
            raise ConfigError("k_folds must be >= 2")
        if self.n_clusters < 1 or self.top_k_features < 1 or self.min_stops_per_cell < 1:
            raise ConfigError("n_clusters, top_k_features and min_stops_per_cell must be >= 1")

    @classmethod
    def from_obj(cls, obj: dict) -> "PipelineConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config document must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

        kwargs = dict(obj)
        fit_obj = kwargs.pop("fit", {})
        if not isinstance(fit_obj, dict):
            raise ConfigError("'fit' must be an object")
        unknown_fit = set(fit_obj) - _FIT_KEYS
        if unknown_fit:
            raise ConfigError(f"unknown fit keys: {', '.join(sorted(unknown_fit))}")
        # all randomness flows from the single top-level seed unless the fit
        # section pins its own
        fit_obj = dict(fit_obj)
        fit_obj.setdefault("seed", kwargs.get("seed", cls.seed))
        try:
            kwargs["fit"] = FitConfig(**fit_obj)
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(f"bad config value: {exc}") from None

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
        return cls.from_obj(obj)

    def to_json_obj(self) -> dict:
        return {
            "resolution": self.resolution,
            "whitelist_path": self.whitelist_path,
            "fit": {
                "n_stages": self.fit.n_stages,
                "learning_rate": self.fit.learning_rate,
                "max_depth": self.fit.max_depth,
                "min_samples_leaf": self.fit.min_samples_leaf,
                "seed": self.fit.seed,
            },
            "k_folds": self.k_folds,
            "n_clusters": self.n_clusters,
            "top_k_features": self.top_k_features,
            "seed": self.seed,
            "min_stops_per_cell": self.min_stops_per_cell,
            "normalize_cluster_vectors": self.normalize_cluster_vectors,
        }

    def replace(self, **overrides) -> "PipelineConfig":
        obj = self.to_json_obj()
        fit_overrides = overrides.pop("fit", {})
        obj.update({k: v for k, v in overrides.items() if v is not None})
        obj["fit"].update({k: v for k, v in fit_overrides.items() if v is not None})
        return self.from_obj(obj)


def default_whitelist_text() -> str:
    return (
        resources.files("hexserve").joinpath("data/default_whitelist.txt").read_text("utf-8")
    )
