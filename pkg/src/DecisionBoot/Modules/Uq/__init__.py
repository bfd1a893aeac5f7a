from .ensemble import (PointPrediction, IntervalTable, ensemble_predictions, ensemble_mean, ensemble_std,
                       predict_with_interval, predict_intervals, interval_coverage, write_predictions_csv)
from .histogram import ValueHistogram, value_histogram

__all__ = [
    "PointPrediction",
    "IntervalTable",
    "ensemble_predictions",
    "ensemble_mean",
    "ensemble_std",
    "predict_with_interval",
    "predict_intervals",
    "interval_coverage",
    "write_predictions_csv",
    "ValueHistogram",
    "value_histogram",
]
