from .losses import (ENSEMBLE_KINDS, EvalReport, overall_mse, max_fold_loss, uniform_ensemble_predict,
                     uniform_ensemble_predict_batch, evaluate)
from .smoothing import DEFAULT_BANDWIDTH, local_linear_smooth

__all__ = [
    "ENSEMBLE_KINDS",
    "EvalReport",
    "overall_mse",
    "max_fold_loss",
    "uniform_ensemble_predict",
    "uniform_ensemble_predict_batch",
    "evaluate",
    "DEFAULT_BANDWIDTH",
    "local_linear_smooth",
]
