"""Maximum-likelihood fitting of univariate leaves."""
from typing import Optional, Union

import numpy as np

from ..core.context import ColumnSpec
from ..core.errors import DataError
from ..core.leaves import LeafFamily, LeafRegistry, resolve_family
from ..systems.configuration_manager import LearnHyperparams


def fit_leaf_mle(family: Union[str, LeafFamily], values, column: Optional[ColumnSpec] = None,
                 hyperparams: Optional[LearnHyperparams] = None,
                 registry: Optional[LeafRegistry] = None):
    """
    Fit leaf parameters to the observed values of one column.

    Categorical fits use Laplace smoothing (count + alpha) / (n + alpha * k),
    Gaussian fits floor the standard deviation, Pareto fits use a = n / sum(ln x).
    Missing cells (NaN) are ignored.

    Args:
        family: Family name or descriptor
        values: Column values
        column: Column spec supplying the categorical cardinality
        hyperparams: Supplies laplace_alpha and std_floor

    Returns:
        Canonical parameter record accepted by make_leaf

    Raises:
        DataError: If no value is observed or a value lies outside the family's domain
    """
    descriptor = resolve_family(family, registry)
    hyperparams = hyperparams or LearnHyperparams()
    values = np.asarray(values, dtype=float).ravel()
    values = values[~np.isnan(values)]
    if values.size == 0:
        raise DataError(f"cannot fit a {descriptor.label} leaf to an empty column")
    params = descriptor.mle(values, column, hyperparams)
    return descriptor.canonical_params(params)
