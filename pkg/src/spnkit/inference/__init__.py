from .evaluation import (LogValueTable, check_data, conditional_log_likelihood, evaluate_matrix, log_likelihood,
                         node_log_values)
from .mpe import max_circuit_values, mpe

__all__ = ['LogValueTable', 'check_data', 'evaluate_matrix', 'log_likelihood', 'node_log_values',
           'conditional_log_likelihood', 'max_circuit_values', 'mpe']
