"""Error measures for one-step-ahead prediction.

All measures skip the washout prefix of the segment they are given and
normalize against that same segment's post-washout target variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ParameterError
from .numerics import as_2d

__all__ = ["EvalResult", "evaluate", "mse", "nmse", "nrmse"]


@dataclass(frozen=True)
class EvalResult:
    """Post-washout error summary for one prediction run."""

    mse: float
    nmse: float
    nrmse: float
    n_evaluated: int


def evaluate(predictions, targets, washout: int = 0) -> EvalResult:
    """Score predictions against targets, ignoring the first washout rows.

    nmse is the summed squared error over the summed squared deviation of
    the scored targets from their own mean, nrmse its square root, and mse
    the squared error per scored row.  Constant scored targets make the
    normalization meaningless and raise DataError.
    """
    predictions = as_2d(predictions)
    targets = as_2d(targets)
    if predictions.shape != targets.shape:
        raise ParameterError(
            f"shape mismatch: predictions {predictions.shape} vs targets "
            f"{targets.shape}")
    if not 0 <= washout < targets.shape[0]:
        raise ParameterError(
            f"washout {washout} must be in [0, rows={targets.shape[0]})")

    pred = predictions[washout:]
    targ = targets[washout:]
    n = targ.shape[0]
    sse = float(np.sum((pred - targ) ** 2))
    denom = float(np.sum((targ - targ.mean(axis=0)) ** 2))
    if denom == 0.0:
        raise DataError("targets are constant after washout; nmse is undefined")
    nmse_val = sse / denom
    return EvalResult(mse=sse / n, nmse=nmse_val,
                      nrmse=math.sqrt(nmse_val), n_evaluated=n)


def mse(predictions, targets, washout: int = 0) -> float:
    return evaluate(predictions, targets, washout).mse


def nmse(predictions, targets, washout: int = 0) -> float:
    return evaluate(predictions, targets, washout).nmse


def nrmse(predictions, targets, washout: int = 0) -> float:
    return evaluate(predictions, targets, washout).nrmse
