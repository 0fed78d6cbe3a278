"""
spnkit: sum-product networks in Python.

Build networks from construction handles or the text DSL, query them
(joint, marginal, conditional, MPE), sample, learn structure and parameters
from data, serialize to DSL / JSON / DOT, and compile to C99.
"""
from .codegen import check_equivalence, compile_evaluator, emit_source, find_compiler
from .core import (CATEGORICAL, DEFAULT_REGISTRY, GAUSSIAN, PARETO, CodegenError, ColumnSpec,
                   ConfigurationError, ConstructionError, Context, CycleError, DataError, DslSyntaxError,
                   EmptyNetworkError, FinalizationError, InvalidNetworkError, InvalidParamsError, LeafFamily,
                   LeafRegistry, ModelError, Network, NodeKind, ParamKind, ParamSpec, RegistryError, SchemaError,
                   SpnError, StructureStats, UnknownFamilyError, UnreachableNodeError, ValidityReport, Violation,
                   ViolationKind, WeightNormalizationError, finalize, generate_random_structure, make_leaf,
                   make_product, make_sum, register_leaf_family, require_valid, structure_stats, validate)
from .inference import conditional_log_likelihood, log_likelihood, mpe, node_log_values
from .io import from_json, load_model, parse_dsl, print_dsl, read_csv, save_model, to_dot, to_json, write_csv
from .learning import (GradientVector, ParameterLayout, backprop_log_gradients, column_partition, fit_leaf_mle,
                       learn_classifier, learn_structure, optimize_parameters, row_cluster)
from .sampling import leaf_sample, random_source, sample
from .systems import ConfigurationManager, EmitOptions, LearnHyperparams, OptimizeOptions, OutputConfig

__version__ = "0.1"
