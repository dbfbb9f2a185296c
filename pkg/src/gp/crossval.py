"""Leave-k-out cross-validation scores whose sum over k is the free energy.

S_k averages, over test sets T of size k and held-out points i in T, the
negative log marginal predictive density of Y_i given the complement of T.
"""
import itertools
import logging
import math
from typing import Iterable, Optional

import numpy as np

from src.config.config import CV_EXACT_BUDGET
from src.gp.hyper import HyperParams
from src.gp.metrics import LOG_2PI, posterior_predictive
from src.kernels import KernelSpec, gram
from src.utils.errors import CombinatorialBudgetError, DomainError

logger = logging.getLogger("gpdd.gp")

CV_MODES = ("exact", "sampled")


def _subset_score(K_full: np.ndarray, Y: np.ndarray, test: np.ndarray, hp: HyperParams) -> float:
    """Mean over i in test of -log p(Y_i | complement of test)."""
    n = K_full.shape[0]
    mask = np.ones(n, dtype=bool)
    mask[test] = False
    train = np.flatnonzero(mask)
    pp = posterior_predictive(
        K_full[np.ix_(train, train)],
        K_full[np.ix_(train, test)],
        K_full[np.ix_(test, test)],
        Y[train],
        hp,
    )
    var = np.diag(pp.cov) + hp.gamma
    r = pp.mean - Y[test]
    nll = 0.5 * r * r / var + 0.5 * np.log(var) + 0.5 * LOG_2PI
    return float(np.mean(nll))


def exact_evaluations(n: int, k: int) -> int:
    """Number of held-out evaluations exact enumeration needs."""
    return math.comb(n, k) * k


def cv_score(
    X,
    Y,
    k: int,
    spec: KernelSpec,
    hp: HyperParams,
    mode: str = "exact",
    reps: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Leave-k-out score S_k.

    Args:
        X: n x d inputs
        Y: n labels
        k: test-set size, 1 <= k <= n
        spec: kernel
        hp: hyperparameters
        mode: "exact" enumerates every subset, "sampled" draws reps subsets uniformly
        reps: number of sampled subsets
        rng: generator for sampled mode

    Raises:
        CombinatorialBudgetError: exact mode would need more than CV_EXACT_BUDGET evaluations
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float).ravel()
    n = X.shape[0]
    if Y.shape[0] != n:
        raise DomainError(f"X has {n} rows but Y has {Y.shape[0]} labels")
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= n:
        raise DomainError(f"k must be an integer in [1, {n}], got {k!r}")
    k = int(k)

    if mode == "exact":
        needed = exact_evaluations(n, k)
        if needed > CV_EXACT_BUDGET:
            raise CombinatorialBudgetError(
                f"exact leave-{k}-out over n={n} needs {needed} evaluations (budget {CV_EXACT_BUDGET}); "
                f"use sampled mode"
            )
        subsets: Iterable = (np.array(t) for t in itertools.combinations(range(n), k))
    elif mode == "sampled":
        if reps is None or reps < 1:
            raise DomainError(f"sampled mode needs reps >= 1, got {reps!r}")
        if rng is None:
            raise DomainError("sampled mode needs an rng")
        subsets = (np.sort(rng.choice(n, size=k, replace=False)) for _ in range(reps))
    else:
        raise DomainError(f"unknown mode {mode!r}; expected one of {CV_MODES}")

    K_full = gram(spec, X)
    scores = [_subset_score(K_full, Y, test, hp) for test in subsets]
    return float(np.mean(scores))
