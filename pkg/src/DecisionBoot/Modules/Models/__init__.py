from .predictor import Predictor, predict_batch, predictor_from_dict, register_family, dump_predictors, load_predictors
from .tree import LEAF, RegressionTree, best_split, train_tree
from .polynomial import PolynomialModel, train_polynomial
from .training import train_models

__all__ = [
    "Predictor",
    "predict_batch",
    "predictor_from_dict",
    "register_family",
    "dump_predictors",
    "load_predictors",
    "LEAF",
    "RegressionTree",
    "best_split",
    "train_tree",
    "PolynomialModel",
    "train_polynomial",
    "train_models",
]
