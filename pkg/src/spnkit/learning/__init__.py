from .gradients import GradientVector, ParameterLayout, backprop_log_gradients, finite_difference_gradient
from .leaf_fitting import fit_leaf_mle
from .optimizer import optimize_parameters
from .splitting import column_partition, dependence_score, row_cluster
from .structure import learn_classifier, learn_structure

__all__ = ['fit_leaf_mle', 'row_cluster', 'column_partition', 'dependence_score',
           'learn_structure', 'learn_classifier',
           'ParameterLayout', 'GradientVector', 'backprop_log_gradients', 'finite_difference_gradient',
           'optimize_parameters']
