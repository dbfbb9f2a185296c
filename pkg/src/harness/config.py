"""Experiment configuration: JSON files parsed into frozen dataclasses.

Unknown keys at any level raise ConfigError naming the key and the allowed
set, so a typo never silently falls back to a default.
"""
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from src.config.config import DEFAULT_SEED, DEFAULT_TEST_POINTS
from src.data import AUGMENT_MODES, THETA_MODES, ill_conditioned_covariance
from src.kernels import LAMBDA_POLICIES, KernelSpec
from src.utils.errors import ConfigError

logger = logging.getLogger("gpdd.harness.config")

METRICS = ("free-energy", "ppl2", "ppnll", "ppnll-opt")
LAMBDA_KINDS = ("fixed", "tempered", "optimal")
SOURCES = ("synthetic", "csv", "surrogate")
PREPROCESS = ("whiten", "normalize", "none")
XI_BASE = 2 ** 10


def _check_keys(where: str, raw: Any, allowed: Iterable[str], required: Iterable[str] = ()) -> Dict[str, Any]:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected an object, got {type(raw).__name__}")
    allowed = set(allowed)
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {unknown}; allowed {sorted(allowed)}")
    missing = [k for k in required if k not in raw]
    if missing:
        raise ConfigError(f"{where}: missing required key(s) {missing}")
    return raw


def _number(where: str, value: Any, positive: bool = True) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value) or (positive and value <= 0.0):
        raise ConfigError(f"{where}: expected a finite {'positive ' if positive else ''}number, got {value!r}")
    return value


def _integer(where: str, value: Any, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"{where}: expected an integer >= {minimum}, got {value!r}")
    return value


def _numbers(where: str, value: Any) -> Tuple[float, ...]:
    values = value if isinstance(value, list) else [value]
    if not values:
        raise ConfigError(f"{where}: empty list")
    return tuple(_number(f"{where}[{i}]", v) for i, v in enumerate(values))


def _choice(where: str, value: Any, options: Tuple[str, ...]) -> str:
    if value not in options:
        raise ConfigError(f"{where}: {value!r} is not one of {list(options)}")
    return value


@dataclass(frozen=True)
class LambdaPolicy:
    """How lambda is set at each grid point.

    kind fixed uses value; tempered sets lambda = mu/gamma; optimal uses the
    closed-form lambda* with (alpha, beta0) resolved by optimal_policy.
    """

    kind: str
    value: Optional[float] = None
    mu: Optional[float] = None
    optimal_policy: str = "plug-in"

    @property
    def label(self) -> str:
        if self.kind == "fixed":
            return f"lambda={self.value:g}"
        if self.kind == "tempered":
            return f"mu={self.mu:g}"
        return f"lambda*({self.optimal_policy})"


@dataclass(frozen=True)
class AugmentSpec:
    mode: str
    base_d: Optional[int] = None


@dataclass(frozen=True)
class MisspecSpec:
    theta: str
    noise_sd: float = 1.0


@dataclass(frozen=True)
class DataSpec:
    """Where replicate data come from.

    synthetic draws fresh N(0, cov) rows per replicate; csv and surrogate
    prepare one base set (preprocessed once) and subsample rows per replicate.
    """

    source: str = "synthetic"
    cov: Any = "identity"
    label_sd: float = 1.0
    path: Optional[str] = None
    label: Optional[str] = None
    preprocess: str = "whiten"
    rows: Optional[int] = None
    base_d: int = 30
    augment: Optional[AugmentSpec] = None
    misspecify: Optional[MisspecSpec] = None
    # surrogate label noise SD; None keeps SURROGATE_LABEL_NOISE_SD
    label_noise_sd: Optional[float] = None

    def covariance(self, d: int):
        """Covariance spec for synth_gaussian at dimension d."""
        cov = self.cov
        if isinstance(cov, str):
            return cov
        if "diagonal" in cov:
            values = np.asarray(cov["diagonal"], dtype=float)
            if values.shape != (d,):
                raise ConfigError(f"data.cov.diagonal: needs {d} values, got {values.size}")
            return values
        if "ill_conditioned" in cov:
            return ill_conditioned_covariance(d, **cov["ill_conditioned"])
        full = np.asarray(cov["full"], dtype=float)
        if full.shape != (d, d):
            raise ConfigError(f"data.cov.full: needs a {d}x{d} matrix, got shape {full.shape}")
        return full


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    kernel: KernelSpec
    metric: str
    n_values: Tuple[int, ...]
    gammas: Tuple[float, ...]
    lambda_policy: LambdaPolicy
    reps: int
    d_grid: Optional[Tuple[int, ...]] = None
    c_grid: Optional[Tuple[float, ...]] = None
    xi_values: Optional[Tuple[float, ...]] = None
    xi_base: float = XI_BASE
    test_points: int = DEFAULT_TEST_POINTS
    seed: int = DEFAULT_SEED
    data: DataSpec = DataSpec()

    def dimensions(self, n: int) -> List[int]:
        """Input dimensions swept at training size n."""
        if self.d_grid is not None:
            return list(self.d_grid)
        if self.c_grid is not None:
            return [max(1, int(round(c * n))) for c in self.c_grid]
        return [max(1, int(round(self.xi_base ** (1.0 - xi) * n ** xi))) for xi in self.xi_values]

    def grid(self) -> List[Tuple[int, int, float]]:
        """(n, d, gamma) in emission order."""
        return [(n, d, g) for n in self.n_values for d in self.dimensions(n) for g in self.gammas]

    @property
    def needs_test_points(self) -> bool:
        return self.metric != "free-energy"


def _parse_lambda(raw: Any) -> LambdaPolicy:
    where = "lambda_policy"
    raw = _check_keys(where, raw, ("kind", "value", "mu", "policy"), required=("kind",))
    kind = _choice(f"{where}.kind", raw["kind"], LAMBDA_KINDS)
    if kind == "fixed":
        if "value" not in raw:
            raise ConfigError(f"{where}: fixed policy needs 'value'")
        return LambdaPolicy(kind=kind, value=_number(f"{where}.value", raw["value"]))
    if kind == "tempered":
        if "mu" not in raw:
            raise ConfigError(f"{where}: tempered policy needs 'mu'")
        return LambdaPolicy(kind=kind, mu=_number(f"{where}.mu", raw["mu"]))
    policy = _choice(f"{where}.policy", raw.get("policy", "plug-in"), LAMBDA_POLICIES)
    return LambdaPolicy(kind=kind, optimal_policy=policy)


def _parse_cov(raw: Any) -> Any:
    where = "data.cov"
    if raw == "identity":
        return raw
    if isinstance(raw, str):
        raise ConfigError(f"{where}: unknown covariance {raw!r}")
    raw = _check_keys(where, raw, ("diagonal", "full", "ill_conditioned"))
    if len(raw) != 1:
        raise ConfigError(f"{where}: give exactly one of diagonal, full, ill_conditioned")
    if "ill_conditioned" in raw:
        params = _check_keys(f"{where}.ill_conditioned", raw["ill_conditioned"] or {}, ("high", "low"))
        return {"ill_conditioned": {k: _number(f"{where}.ill_conditioned.{k}", v) for k, v in params.items()}}
    return raw


def _parse_data(raw: Any) -> DataSpec:
    where = "data"
    raw = _check_keys(
        where, raw,
        (
            "source", "cov", "label_sd", "path", "label", "preprocess", "rows", "base_d",
            "augment", "misspecify", "label_noise_sd",
        ),
    )
    source = _choice(f"{where}.source", raw.get("source", "synthetic"), SOURCES)
    augment = None
    if raw.get("augment") is not None:
        a = _check_keys(f"{where}.augment", raw["augment"], ("mode", "base_d"), required=("mode",))
        augment = AugmentSpec(
            mode=_choice(f"{where}.augment.mode", a["mode"], AUGMENT_MODES),
            base_d=_integer(f"{where}.augment.base_d", a["base_d"]) if "base_d" in a else None,
        )
        if source == "synthetic" and augment.base_d is None:
            raise ConfigError(f"{where}.augment: synthetic data needs base_d")
    misspecify = None
    if raw.get("misspecify") is not None:
        m = _check_keys(f"{where}.misspecify", raw["misspecify"], ("theta", "noise_sd"), required=("theta",))
        misspecify = MisspecSpec(
            theta=_choice(f"{where}.misspecify.theta", m["theta"], THETA_MODES),
            noise_sd=_number(f"{where}.misspecify.noise_sd", m.get("noise_sd", 1.0)),
        )
    if "label_noise_sd" in raw and source != "surrogate":
        raise ConfigError(f"{where}: label_noise_sd applies only to the surrogate source")
    if source == "csv":
        for key in ("path", "label"):
            if not isinstance(raw.get(key), str):
                raise ConfigError(f"{where}: csv source needs a string '{key}'")
    return DataSpec(
        source=source,
        cov=_parse_cov(raw.get("cov", "identity")),
        label_sd=_number(f"{where}.label_sd", raw.get("label_sd", 1.0)),
        path=raw.get("path"),
        label=raw.get("label"),
        preprocess=_choice(f"{where}.preprocess", raw.get("preprocess", "whiten"), PREPROCESS),
        rows=_integer(f"{where}.rows", raw["rows"], minimum=2) if "rows" in raw else None,
        base_d=_integer(f"{where}.base_d", raw.get("base_d", 30)),
        augment=augment,
        misspecify=misspecify,
        label_noise_sd=(
            _number(f"{where}.label_noise_sd", raw["label_noise_sd"]) if "label_noise_sd" in raw else None
        ),
    )


_TOP_KEYS = (
    "name", "kernel", "metric", "n", "n_grid", "d_grid", "c_grid", "xi_scaling",
    "gamma", "lambda_policy", "reps", "test_points", "seed", "data",
)


def parse_config(raw: Dict[str, Any]) -> ExperimentConfig:
    """Validate a decoded JSON object and build the config."""
    raw = _check_keys(
        "config", raw, _TOP_KEYS, required=("name", "kernel", "metric", "gamma", "lambda_policy", "reps"),
    )
    if ("n" in raw) == ("n_grid" in raw):
        raise ConfigError("config: give exactly one of 'n' or 'n_grid'")
    n_raw = raw["n"] if "n" in raw else raw["n_grid"]
    n_list = n_raw if isinstance(n_raw, list) else [n_raw]
    if not n_list:
        raise ConfigError("config.n_grid: empty list")
    n_values = tuple(_integer(f"config.n[{i}]", v, minimum=2) for i, v in enumerate(n_list))

    dim_keys = [k for k in ("d_grid", "c_grid", "xi_scaling") if k in raw]
    if len(dim_keys) != 1:
        raise ConfigError(f"config: give exactly one of d_grid, c_grid, xi_scaling (got {dim_keys})")
    d_grid = c_grid = xi_values = None
    xi_base = XI_BASE
    if "d_grid" in raw:
        d_list = raw["d_grid"] if isinstance(raw["d_grid"], list) else [raw["d_grid"]]
        if not d_list:
            raise ConfigError("config.d_grid: empty list")
        d_grid = tuple(_integer(f"config.d_grid[{i}]", v) for i, v in enumerate(d_list))
    elif "c_grid" in raw:
        c_grid = _numbers("config.c_grid", raw["c_grid"])
    else:
        xi = _check_keys("config.xi_scaling", raw["xi_scaling"], ("xi", "base"), required=("xi",))
        xi_values = tuple(_number("config.xi_scaling.xi", v, positive=False) for v in
                          (xi["xi"] if isinstance(xi["xi"], list) else [xi["xi"]]))
        xi_base = _number("config.xi_scaling.base", xi.get("base", XI_BASE))

    reps = _integer("config.reps", raw["reps"], minimum=2)
    try:
        kernel = KernelSpec.from_dict(raw["kernel"])
    except ConfigError as e:
        raise ConfigError(f"config.{e}") from e
    seed = raw.get("seed", DEFAULT_SEED)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"config.seed: expected a non-negative integer, got {seed!r}")

    return ExperimentConfig(
        name=str(raw["name"]),
        kernel=kernel,
        metric=_choice("config.metric", raw["metric"], METRICS),
        n_values=n_values,
        gammas=_numbers("config.gamma", raw["gamma"]),
        lambda_policy=_parse_lambda(raw["lambda_policy"]),
        reps=reps,
        d_grid=d_grid,
        c_grid=c_grid,
        xi_values=xi_values,
        xi_base=xi_base,
        test_points=_integer("config.test_points", raw.get("test_points", DEFAULT_TEST_POINTS)),
        seed=seed,
        data=_parse_data(raw.get("data", {})),
    )


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    except OSError as e:
        raise ConfigError(f"{path}: cannot read config: {e}") from e
    cfg = parse_config(raw)
    logger.info(f"Loaded config {cfg.name!r} from {path}")
    return cfg
