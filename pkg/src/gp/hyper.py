"""Hyperparameters of the tempered GP posterior."""
from dataclasses import dataclass
from typing import Optional

from src.utils.errors import DomainError
from src.utils.utils import check_positive

POLICIES = ("fixed", "tempered", "optimal-lambda")


@dataclass(frozen=True)
class HyperParams:
    """Prior precision scale lam and temperature gamma.

    The prior is f ~ GP(0, k/lam) and the likelihood N(f(x), gamma), so the
    ridge added to the Gram matrix is lam * gamma.
    """

    lam: float
    gamma: float
    policy: str = "fixed"
    mu: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "lam", check_positive("lambda", self.lam))
        object.__setattr__(self, "gamma", check_positive("gamma", self.gamma))
        if self.policy not in POLICIES:
            raise DomainError(f"unknown policy {self.policy!r}; expected one of {POLICIES}")
        if self.lam * self.gamma <= 0.0:
            raise DomainError(f"ridge lambda*gamma underflows for lambda={self.lam!r}, gamma={self.gamma!r}")

    @classmethod
    def tempered(cls, mu: float, gamma: float) -> "HyperParams":
        """lam = mu / gamma, so the ridge is mu for every temperature."""
        mu = check_positive("mu", mu)
        gamma = check_positive("gamma", gamma)
        return cls(lam=mu / gamma, gamma=gamma, policy="tempered", mu=mu)

    @property
    def ridge(self) -> float:
        return self.lam * self.gamma
