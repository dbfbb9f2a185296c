"""Kernel specifications: family, parameters and bandwidth."""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional

from src.config.config import KERNEL_DEFAULTS
from src.utils.errors import ConfigError, DomainError

logger = logging.getLogger("gpdd.kernels")

INNER_PRODUCT = "inner-product"
RADIAL = "radial"

KERNEL_KINDS = {
    "linear": INNER_PRODUCT,
    "polynomial": INNER_PRODUCT,
    "exponential": INNER_PRODUCT,
    "gaussian": RADIAL,
    "multiquadric": RADIAL,
    "inverse-multiquadric": RADIAL,
    "matern": RADIAL,
}


def _check_params(family: str, params: Dict[str, Any]) -> None:
    def positive(key):
        value = params[key]
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise DomainError(f"{family}: {key} must be > 0, got {value!r}")

    if family == "polynomial":
        degree = params["degree"]
        if isinstance(degree, bool) or int(degree) != degree or degree < 1:
            raise DomainError(f"polynomial: degree must be an integer >= 1, got {degree!r}")
        if not params["offset"] >= 0:
            raise DomainError(f"polynomial: offset must be >= 0, got {params['offset']!r}")
    elif family == "multiquadric":
        positive("offset")
        if not math.isfinite(params["power"]):
            raise DomainError(f"multiquadric: power must be finite, got {params['power']!r}")
    elif family == "inverse-multiquadric":
        positive("offset")
        positive("power")
    elif family == "matern":
        positive("nu")
        if params["length_scale"] is not None:
            positive("length_scale")


@dataclass(frozen=True)
class KernelSpec:
    """A kernel k(x, x') = kappa_eta(s(x, x')) with s = x^T x'/d or ||x - x'||^2/d.

    Attributes:
        family: one of KERNEL_KINDS
        params: family parameters, completed from KERNEL_DEFAULTS
        eta: bandwidth, kappa_eta(t) = kappa(eta t)/eta
    """

    family: str
    params: Dict[str, Any] = field(default_factory=dict)
    eta: float = 1.0

    def __post_init__(self):
        if self.family not in KERNEL_KINDS:
            raise DomainError(
                f"unknown kernel family {self.family!r}; expected one of {sorted(KERNEL_KINDS)}"
            )
        allowed = KERNEL_DEFAULTS[self.family]
        unknown = set(self.params) - set(allowed)
        if unknown:
            raise DomainError(
                f"{self.family}: unknown parameter(s) {sorted(unknown)}; allowed {sorted(allowed)}"
            )
        merged = {**allowed, **self.params}
        if self.family == "polynomial":
            merged["degree"] = int(merged["degree"])
        _check_params(self.family, merged)
        if not (math.isfinite(self.eta) and self.eta > 0):
            raise DomainError(f"eta must be finite and > 0, got {self.eta!r}")
        object.__setattr__(self, "params", merged)

    @property
    def kind(self) -> str:
        return KERNEL_KINDS[self.family]

    @property
    def id(self) -> str:
        """Canonical text form, accepted back by parse_kernel_id."""
        parts = [f"{k}={_format_value(v)}" for k, v in self.params.items()]
        if self.eta != 1.0:
            parts.append(f"eta={_format_value(self.eta)}")
        return self.family + (":" + ",".join(parts) if parts else "")

    def with_eta(self, eta: float) -> "KernelSpec":
        return replace(self, eta=float(eta))

    def to_dict(self) -> Dict[str, Any]:
        out = {"family": self.family, "params": dict(self.params)}
        if self.eta != 1.0:
            out["eta"] = self.eta
        return out

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "KernelSpec":
        """Build from {"family": ..., "params": {...}, "eta": ...}; bad input raises ConfigError."""
        if not isinstance(raw, dict):
            raise ConfigError(f"kernel must be an object, got {type(raw).__name__}")
        unknown = set(raw) - {"family", "params", "eta"}
        if unknown:
            raise ConfigError(f"kernel: unknown key(s) {sorted(unknown)}; allowed ['eta', 'family', 'params']")
        if "family" not in raw:
            raise ConfigError("kernel: missing 'family'")
        try:
            return cls(family=raw["family"], params=dict(raw.get("params") or {}), eta=float(raw.get("eta", 1.0)))
        except (DomainError, TypeError, ValueError) as e:
            raise ConfigError(f"kernel: {e}") from e


def _format_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def _parse_value(key: str, text: str) -> Optional[float]:
    text = text.strip()
    if text.lower() == "none":
        return None
    if key == "degree":
        return int(text)
    return float(text)


def parse_kernel_id(text: str) -> KernelSpec:
    """Parse "family" or "family:key=value,key=value" (eta is accepted as a key).

    >>> parse_kernel_id("polynomial:offset=1,degree=2").params["degree"]
    2
    """
    family, _, rest = text.strip().partition(":")
    params: Dict[str, Any] = {}
    eta = 1.0
    if rest:
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or not key:
                raise ConfigError(f"malformed kernel parameter {item!r} in {text!r}")
            try:
                parsed = _parse_value(key, value)
            except ValueError:
                raise ConfigError(f"kernel parameter {key} has non-numeric value {value!r}") from None
            if key == "eta":
                eta = parsed
            else:
                params[key] = parsed
    try:
        return KernelSpec(family=family.strip(), params=params, eta=eta)
    except DomainError as e:
        raise ConfigError(str(e)) from e
