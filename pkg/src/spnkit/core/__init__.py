from .context import ColumnSpec, Context
from .errors import (CodegenError, ConfigurationError, ConstructionError, CycleError, DataError,
                     DslSyntaxError, EmptyNetworkError, FinalizationError, InvalidNetworkError,
                     InvalidParamsError, ModelError, RegistryError, SchemaError, SpnError,
                     UnknownFamilyError, UnreachableNodeError, WeightNormalizationError)
from .leaves import (CATEGORICAL, DEFAULT_REGISTRY, GAUSSIAN, PARETO, LeafFamily, LeafRegistry,
                     ParamKind, ParamSpec, register_leaf_family, resolve_family)
from .network import (LeafNode, Network, NodeHandle, NodeKind, ProductNode, SumNode, finalize,
                      make_leaf, make_product, make_sum)
from .random_structure import generate_random_structure
from .validation import (StructureStats, ValidityReport, Violation, ViolationKind, require_valid,
                         structure_stats, validate)

__all__ = [
    'ColumnSpec', 'Context',
    'SpnError', 'ConfigurationError', 'ModelError', 'ConstructionError', 'InvalidParamsError',
    'UnknownFamilyError', 'RegistryError', 'FinalizationError', 'CycleError', 'UnreachableNodeError',
    'EmptyNetworkError', 'WeightNormalizationError', 'InvalidNetworkError', 'DslSyntaxError',
    'SchemaError', 'CodegenError', 'DataError',
    'LeafFamily', 'LeafRegistry', 'ParamKind', 'ParamSpec', 'CATEGORICAL', 'GAUSSIAN', 'PARETO',
    'DEFAULT_REGISTRY', 'register_leaf_family', 'resolve_family',
    'Network', 'NodeHandle', 'NodeKind', 'SumNode', 'ProductNode', 'LeafNode',
    'make_sum', 'make_product', 'make_leaf', 'finalize',
    'generate_random_structure',
    'ValidityReport', 'Violation', 'ViolationKind', 'StructureStats', 'validate', 'require_valid',
    'structure_stats',
]
