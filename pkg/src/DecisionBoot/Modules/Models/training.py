# This module trains the model ensemble, one predictor per training subset.
import logging
from concurrent.futures import ThreadPoolExecutor

from DecisionBoot.Core.Utils import ConfigError, TypeCheck
from DecisionBoot.Modules.Data import Dataset, IndexSet
from DecisionBoot.Modules.Models.predictor import Predictor
from DecisionBoot.Modules.Models.polynomial import train_polynomial
from DecisionBoot.Modules.Models.tree import train_tree

logger = logging.getLogger("DecisionBoot.Modules.Models")
logger.setLevel(logging.DEBUG)

__all__ = [
    "train_models",
]


def train_models(data: Dataset, subsets: list[IndexSet], family: str = "tree", max_depth: int = 15,
                 min_leaf: int = 1, degree: int = 4, workers: int = 1) -> list[Predictor]:
    """Trains one model of the given family on each subset.

    Training is deterministic, so the result does not depend on `workers`.

    Args:
        data (Dataset): The dataset.
        subsets (list[IndexSet]): The training subsets; subset `i` gives model `i`.
        family (str): `tree` or `polynomial`.
        max_depth (int): Depth cap of trees.
        min_leaf (int): Minimum rows per tree leaf.
        degree (int): Degree of polynomials.
        workers (int): Number of threads.

    Returns:
        The list of trained models, in subset order.

    Raises:
        ConfigError: Unknown family, or no subset.
    """
    TypeCheck.ensure_list(subsets, "subsets")
    if not subsets:
        raise ConfigError("Need at least one training subset")
    if family == "tree":
        def fit(item):
            return train_tree(data, item[1], max_depth, min_leaf, item[0])
    elif family == "polynomial":
        def fit(item):
            return train_polynomial(data, item[1], degree, item[0])
    else:
        raise ConfigError(f"Unknown model family '{family}'")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            models = list(pool.map(fit, enumerate(subsets)))
    else:
        models = [fit(item) for item in enumerate(subsets)]
    logger.info(f"Trained {len(models)} {family} model(s)")
    return models
