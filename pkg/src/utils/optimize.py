"""Golden-section search for unimodal scalar functions."""
import logging
import math
from typing import Callable, Tuple

from src.config.config import GOLDEN_ITERS
from src.utils.errors import DomainError

logger = logging.getLogger("gpdd.utils")

PHI_RATIO = 2.0 / (1.0 + math.sqrt(5.0))


def minimize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    iters: int = GOLDEN_ITERS,
    log_scale: bool = False,
    xtol: float = 0.0,
) -> Tuple[float, float]:
    """(argmin, min) of f on [lo, hi] by golden-section search.

    After iters steps the bracket width is at most (hi - lo) * 0.618^iters
    (measured in log x when log_scale is set). xtol > 0 stops earlier once
    the bracket is narrower than xtol. Endpoints are returned when they beat
    the interior estimate.
    """
    if not lo < hi:
        raise DomainError(f"bracket must satisfy lo < hi, got [{lo!r}, {hi!r}]")
    if log_scale:
        if lo <= 0.0:
            raise DomainError(f"log-scale bracket must be positive, got lo={lo!r}")
        g = lambda u: f(math.exp(u))  # noqa: E731
        a, b = math.log(lo), math.log(hi)
    else:
        g = f
        a, b = float(lo), float(hi)

    x1 = b - PHI_RATIO * (b - a)
    x2 = a + PHI_RATIO * (b - a)
    f1, f2 = g(x1), g(x2)
    fa, fb = g(a), g(b)
    a0, b0 = a, b

    for _ in range(iters):
        if b - a <= xtol:
            break
        if f2 > f1:
            b, x2, f2 = x2, x1, f1
            x1 = b - PHI_RATIO * (b - a)
            f1 = g(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + PHI_RATIO * (b - a)
            f2 = g(x2)

    if f1 <= f2:
        xm, fm = x1, f1
    else:
        xm, fm = x2, f2
    if fa < fm:
        xm, fm = a0, fa
    elif fb < fm:
        xm, fm = b0, fb
    if math.isnan(fm):
        logger.warning(f"golden-section search on [{lo:g}, {hi:g}] ended at NaN")
    return (math.exp(xm) if log_scale else xm), fm
