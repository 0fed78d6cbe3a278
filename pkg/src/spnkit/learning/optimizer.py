"""Full-batch gradient ascent on the mean log-likelihood."""
import logging
from typing import Optional

import numpy as np

from ..core.network import Network
from ..core.validation import require_valid
from ..systems.configuration_manager import OptimizeOptions
from .gradients import ParameterLayout, backprop_log_gradients

logger = logging.getLogger(__name__)


def optimize_parameters(network: Network, data, options: Optional[OptimizeOptions] = None) -> Network:
    """
    Optimize the parameters of a network, keeping its structure.

    Steps are taken in the unconstrained parameter space. The best network seen
    by training log-likelihood is returned, so the result never scores below
    the input.

    Args:
        network: Finalized valid network
        data: Training rows; NaN cells are marginalized
        options: Epoch count and learning rate

    Returns:
        Network with the best parameters seen (the input itself when no step improved)

    Raises:
        InvalidNetworkError: If the network is invalid
        DataError: On malformed data, or when no row has finite likelihood
    """
    options = (options or OptimizeOptions()).validate()
    require_valid(network)
    if options.epochs == 0:
        return network

    layout = ParameterLayout(network)
    gradient = backprop_log_gradients(network, data, layout)
    best, best_ll = network, gradient.mean_log_likelihood
    baseline_excluded = gradient.rows_excluded
    logger.info("Optimizing %d parameters for %d epochs (initial mean log-likelihood %.6f)",
                layout.size, options.epochs, best_ll)

    theta = layout.pack()
    for epoch in range(options.epochs):
        theta = theta + options.learning_rate * gradient.values
        candidate = layout.unpack(theta)
        gradient = backprop_log_gradients(candidate, data, layout)
        if not np.isfinite(gradient.values).all():
            logger.warning("Epoch %d: nonfinite gradient, stopping", epoch + 1)
            break
        if gradient.rows_excluded <= baseline_excluded and gradient.mean_log_likelihood > best_ll:
            best, best_ll = candidate, gradient.mean_log_likelihood
        logger.debug("Epoch %d: mean log-likelihood %.6f (best %.6f)", epoch + 1,
                     gradient.mean_log_likelihood, best_ll)

    logger.info("Best mean log-likelihood %.6f", best_ll)
    return best
