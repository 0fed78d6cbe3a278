"""
Leaf families for spnkit.

A LeafFamily bundles the handlers every traversal needs for one univariate
distribution type (density, sampler, mode, maximum-likelihood fit, validator).
Families live in a LeafRegistry; leaf nodes keep a reference to their family,
so inference and sampling never go back to the registry.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special, stats

from .errors import DataError, InvalidParamsError, RegistryError, UnknownFamilyError
from .numeric import c_double

logger = logging.getLogger(__name__)

ParamValue = Union[float, Tuple[float, ...]]
Params = Mapping[str, ParamValue]

STD_FLOOR = 1e-6
NORMALIZATION_TOLERANCE = 1e-6
REQUIRED_HANDLERS = ("log_density", "sample", "mode", "mle", "validate")


class ParamKind(Enum):
    SCALAR = "scalar"
    SIMPLEX = "simplex"


@dataclass(frozen=True)
class ParamSpec:
    """Name and shape of one leaf parameter."""

    name: str
    kind: ParamKind = ParamKind.SCALAR

    def free_count(self, value: ParamValue) -> int:
        """Degrees of freedom this parameter contributes."""
        if self.kind == ParamKind.SCALAR:
            return 1
        return max(len(value) - 1, 0)


@dataclass(frozen=True, eq=False)
class LeafFamily:
    """
    Descriptor of a pluggable univariate distribution.

    Required handlers:
        log_density(params, values) -> log density per value (never +inf)
        sample(params, rng, size) -> array of draws
        mode(params) -> value maximizing the density
        mle(values, column, hyperparams) -> params
        validate(params) -> list of violation messages (empty when valid)

    Optional handlers extend the family to more operations: random structures
    (random_params), data checks (invalid_mask), gradient optimization
    (to_unconstrained, from_unconstrained, grad_log_density) and C emission (emit_c).
    """

    name: str
    param_schema: Tuple[ParamSpec, ...]
    log_density: Optional[Callable[[Params, np.ndarray], np.ndarray]] = None
    sample: Optional[Callable[[Params, np.random.Generator, int], np.ndarray]] = None
    mode: Optional[Callable[[Params], float]] = None
    mle: Optional[Callable[[np.ndarray, Any, Any], Dict[str, ParamValue]]] = None
    validate: Optional[Callable[[Params], List[str]]] = None
    display_name: Optional[str] = None
    random_params: Optional[Callable[[Any, np.random.Generator], Dict[str, ParamValue]]] = None
    invalid_mask: Optional[Callable[[Params, np.ndarray], np.ndarray]] = None
    to_unconstrained: Optional[Callable[[Params], np.ndarray]] = None
    from_unconstrained: Optional[Callable[[np.ndarray], Dict[str, ParamValue]]] = None
    grad_log_density: Optional[Callable[[Params, np.ndarray], np.ndarray]] = None
    emit_c: Optional[Callable[[Params, str], str]] = None
    discrete: bool = False

    @property
    def key(self) -> str:
        return self.name.lower()

    @property
    def label(self) -> str:
        return self.display_name or self.name[:1].upper() + self.name[1:]

    @property
    def differentiable(self) -> bool:
        return None not in (self.to_unconstrained, self.from_unconstrained, self.grad_log_density)

    def missing_handlers(self) -> List[str]:
        return [name for name in REQUIRED_HANDLERS if not callable(getattr(self, name))]

    def canonical_params(self, params: Mapping[str, Any]) -> Dict[str, ParamValue]:
        """
        Check parameter names against the schema and coerce values to floats / float tuples.

        Raises:
            InvalidParamsError: On unknown, missing or wrongly shaped parameters,
                or when the family validator rejects the values.
        """
        expected = {spec.name: spec for spec in self.param_schema}
        problems = []
        unknown = sorted(set(params) - set(expected))
        if unknown:
            problems.append(f"unknown parameter(s) {', '.join(unknown)}")
        missing = [name for name in expected if name not in params]
        if missing:
            problems.append(f"missing parameter(s) {', '.join(missing)}")
        if problems:
            raise InvalidParamsError(self.label, problems)

        canonical: Dict[str, ParamValue] = {}
        for name, spec in expected.items():
            value = params[name]
            try:
                if spec.kind == ParamKind.SCALAR:
                    if isinstance(value, (list, tuple, np.ndarray)):
                        raise TypeError("expected a number, got a list")
                    canonical[name] = float(value)
                else:
                    if not isinstance(value, (list, tuple, np.ndarray)):
                        raise TypeError("expected a list of numbers")
                    canonical[name] = tuple(float(v) for v in value)
            except (TypeError, ValueError) as e:
                raise InvalidParamsError(self.label, [f"{name}: {e}"]) from e

        violations = self.validate(canonical)
        if violations:
            raise InvalidParamsError(self.label, violations)
        return canonical

    def free_parameters(self, params: Params) -> int:
        return sum(spec.free_count(params[spec.name]) for spec in self.param_schema)


# ---------------------------------------------------------------------------
# Categorical: explicit pmf over 0..k-1
# ---------------------------------------------------------------------------

def _categorical_validate(params: Params) -> List[str]:
    p = params["p"]
    if len(p) == 0:
        return ["p: must not be empty"]
    violations = []
    if any(not math.isfinite(v) or v < 0.0 or v > 1.0 for v in p):
        violations.append("p: probabilities must lie in [0, 1]")
    total = math.fsum(p)
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        violations.append(f"p: probabilities add up to {total!r}, expected 1")
    return violations


def _categorical_invalid(params: Params, values: np.ndarray) -> np.ndarray:
    k = len(params["p"])
    with np.errstate(invalid="ignore"):
        ok = np.isfinite(values) & (np.floor(values) == values) & (values >= 0) & (values < k)
    return ~ok


def _categorical_log_density(params: Params, values: np.ndarray) -> np.ndarray:
    p = np.asarray(params["p"], dtype=float)
    values = np.asarray(values, dtype=float)
    out = np.full(values.shape, -np.inf)
    ok = ~_categorical_invalid(params, values)
    with np.errstate(divide="ignore"):
        out[ok] = np.log(p[values[ok].astype(int)])
    return out


def _categorical_sample(params: Params, rng: np.random.Generator, size: int) -> np.ndarray:
    p = np.asarray(params["p"], dtype=float)
    cdf = np.cumsum(p)
    u = rng.random(size) * cdf[-1]
    index = np.searchsorted(cdf, u, side="right")
    return np.minimum(index, len(p) - 1).astype(float)


def _categorical_mode(params: Params) -> float:
    return float(np.argmax(params["p"]))


def _categorical_mle(values: np.ndarray, column: Any, hyperparams: Any) -> Dict[str, ParamValue]:
    values = np.asarray(values, dtype=float)
    k = getattr(column, "cardinality", None)
    if k is None:
        k = max(int(values.max()) + 1, 2)
    bad = _categorical_invalid({"p": (0.0,) * k}, values)
    if bad.any():
        raise DataError(f"categorical value {float(values[bad][0])!r} outside 0..{k - 1}")
    alpha = float(getattr(hyperparams, "laplace_alpha", 1.0))
    counts = np.bincount(values.astype(int), minlength=k).astype(float)
    p = (counts + alpha) / (len(values) + alpha * k)
    return {"p": tuple(float(v) for v in p)}


def _categorical_random(column: Any, rng: np.random.Generator) -> Dict[str, ParamValue]:
    k = column.cardinality
    return {"p": tuple([1.0 / k] * k)}


def _categorical_to_unconstrained(params: Params) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(params["p"], dtype=float))


def _categorical_from_unconstrained(theta: np.ndarray) -> Dict[str, ParamValue]:
    return {"p": tuple(float(v) for v in special.softmax(theta))}


def _categorical_grad(params: Params, values: np.ndarray) -> np.ndarray:
    p = np.asarray(params["p"], dtype=float)
    grad = -np.tile(p, (len(values), 1))
    ok = ~_categorical_invalid(params, values)
    rows = np.flatnonzero(ok)
    grad[rows, values[ok].astype(int)] += 1.0
    grad[~ok] = 0.0
    return grad


def _categorical_emit(params: Params, x: str) -> str:
    expr = "(-INFINITY)"
    with np.errstate(divide="ignore"):
        logs = np.log(np.asarray(params["p"], dtype=float))
    for category in reversed(range(len(logs))):
        expr = f"({x} == {float(category)!r} ? {c_double(logs[category])} : {expr})"
    return expr


CATEGORICAL = LeafFamily(
    name="categorical",
    display_name="Categorical",
    param_schema=(ParamSpec("p", ParamKind.SIMPLEX),),
    log_density=_categorical_log_density,
    sample=_categorical_sample,
    mode=_categorical_mode,
    mle=_categorical_mle,
    validate=_categorical_validate,
    random_params=_categorical_random,
    invalid_mask=_categorical_invalid,
    to_unconstrained=_categorical_to_unconstrained,
    from_unconstrained=_categorical_from_unconstrained,
    grad_log_density=_categorical_grad,
    emit_c=_categorical_emit,
    discrete=True,
)


# ---------------------------------------------------------------------------
# Gaussian: mean, standard deviation
# ---------------------------------------------------------------------------

def _gaussian_validate(params: Params) -> List[str]:
    violations = []
    if not math.isfinite(params["mean"]):
        violations.append("mean: must be finite")
    stdev = params["stdev"]
    if not math.isfinite(stdev) or stdev < STD_FLOOR:
        violations.append(f"stdev: must be finite and at least {STD_FLOOR}")
    return violations


def _finite_invalid(params: Params, values: np.ndarray) -> np.ndarray:
    return ~np.isfinite(values)


def _gaussian_log_density(params: Params, values: np.ndarray) -> np.ndarray:
    return stats.norm.logpdf(values, loc=params["mean"], scale=params["stdev"])


def _gaussian_sample(params: Params, rng: np.random.Generator, size: int) -> np.ndarray:
    return params["mean"] + params["stdev"] * rng.standard_normal(size)


def _gaussian_mode(params: Params) -> float:
    return float(params["mean"])


def _gaussian_mle(values: np.ndarray, column: Any, hyperparams: Any) -> Dict[str, ParamValue]:
    values = np.asarray(values, dtype=float)
    if not np.isfinite(values).all():
        raise DataError("Gaussian fit needs finite values")
    floor = float(getattr(hyperparams, "std_floor", STD_FLOOR))
    return {"mean": float(np.mean(values)), "stdev": float(max(np.std(values), floor, STD_FLOOR))}


def _gaussian_random(column: Any, rng: np.random.Generator) -> Dict[str, ParamValue]:
    lo, hi = column.range if column.range is not None else (0.0, 1.0)
    return {"mean": float(rng.uniform(lo, hi)), "stdev": 1.0}


def _gaussian_to_unconstrained(params: Params) -> np.ndarray:
    return np.array([params["mean"], math.log(params["stdev"])])


def _gaussian_from_unconstrained(theta: np.ndarray) -> Dict[str, ParamValue]:
    return {"mean": float(theta[0]), "stdev": float(max(math.exp(theta[1]), STD_FLOOR))}


def _gaussian_grad(params: Params, values: np.ndarray) -> np.ndarray:
    z = (values - params["mean"]) / params["stdev"]
    return np.column_stack([z / params["stdev"], z * z - 1.0])


def _gaussian_emit(params: Params, x: str) -> str:
    inv = 1.0 / params["stdev"]
    const = -math.log(params["stdev"]) - 0.5 * math.log(2.0 * math.pi)
    z = f"(({x} - {c_double(params['mean'])}) * {c_double(inv)})"
    return f"({c_double(const)} - 0.5 * {z} * {z})"


GAUSSIAN = LeafFamily(
    name="gaussian",
    display_name="Gaussian",
    param_schema=(ParamSpec("mean"), ParamSpec("stdev")),
    log_density=_gaussian_log_density,
    sample=_gaussian_sample,
    mode=_gaussian_mode,
    mle=_gaussian_mle,
    validate=_gaussian_validate,
    random_params=_gaussian_random,
    invalid_mask=_finite_invalid,
    to_unconstrained=_gaussian_to_unconstrained,
    from_unconstrained=_gaussian_from_unconstrained,
    grad_log_density=_gaussian_grad,
    emit_c=_gaussian_emit,
)


# ---------------------------------------------------------------------------
# Pareto: shape a, scale fixed at 1, support x >= 1
# ---------------------------------------------------------------------------

def _pareto_validate(params: Params) -> List[str]:
    a = params["a"]
    if not math.isfinite(a) or a <= 0.0:
        return ["a: shape must be finite and > 0"]
    return []


def _pareto_log_density(params: Params, values: np.ndarray) -> np.ndarray:
    return stats.pareto.logpdf(values, params["a"])


def _pareto_sample(params: Params, rng: np.random.Generator, size: int) -> np.ndarray:
    u = rng.random(size)
    return (1.0 - u) ** (-1.0 / params["a"])


def _pareto_mode(params: Params) -> float:
    return 1.0


def _pareto_mle(values: np.ndarray, column: Any, hyperparams: Any) -> Dict[str, ParamValue]:
    values = np.asarray(values, dtype=float)
    if not np.isfinite(values).all() or (values < 1.0).any():
        raise DataError("Pareto fit needs finite values >= 1")
    total = float(np.sum(np.log(values)))
    if total <= 0.0:
        raise DataError("Pareto shape is unbounded when every value equals 1")
    return {"a": len(values) / total}


def _pareto_random(column: Any, rng: np.random.Generator) -> Dict[str, ParamValue]:
    return {"a": float(rng.uniform(1.0, 3.0))}


def _pareto_to_unconstrained(params: Params) -> np.ndarray:
    return np.array([math.log(params["a"])])


def _pareto_from_unconstrained(theta: np.ndarray) -> Dict[str, ParamValue]:
    return {"a": float(math.exp(theta[0]))}


def _pareto_grad(params: Params, values: np.ndarray) -> np.ndarray:
    a = params["a"]
    grad = np.zeros((len(values), 1))
    inside = values >= 1.0
    grad[inside, 0] = 1.0 - a * np.log(values[inside])
    return grad


def _pareto_emit(params: Params, x: str) -> str:
    a = params["a"]
    return f"({x} >= 1.0 ? {c_double(math.log(a))} - {c_double(a + 1.0)} * log({x}) : (-INFINITY))"


PARETO = LeafFamily(
    name="pareto",
    display_name="Pareto",
    param_schema=(ParamSpec("a"),),
    log_density=_pareto_log_density,
    sample=_pareto_sample,
    mode=_pareto_mode,
    mle=_pareto_mle,
    validate=_pareto_validate,
    random_params=_pareto_random,
    invalid_mask=_finite_invalid,
    to_unconstrained=_pareto_to_unconstrained,
    from_unconstrained=_pareto_from_unconstrained,
    grad_log_density=_pareto_grad,
    emit_c=_pareto_emit,
)


class LeafRegistry:
    """Name-indexed collection of leaf families. Written at startup, read-only afterwards."""

    def __init__(self, families: Sequence[LeafFamily] = ()):
        self._families: Dict[str, LeafFamily] = {}
        for family in families:
            self.register(family)

    @classmethod
    def core(cls) -> "LeafRegistry":
        """Registry with the categorical and Gaussian families."""
        return cls([CATEGORICAL, GAUSSIAN])

    @classmethod
    def default(cls) -> "LeafRegistry":
        """Registry with every built-in family."""
        return cls([CATEGORICAL, GAUSSIAN, PARETO])

    def register(self, family: LeafFamily) -> LeafFamily:
        """
        Add a family to the registry.

        Raises:
            RegistryError: If the name is taken or a required handler is missing.
        """
        if not family.name or not family.name.isidentifier():
            raise RegistryError(f"Leaf family name must be an identifier, got {family.name!r}")
        if family.key in self._families:
            raise RegistryError(f"Leaf family {family.name!r} is already registered")
        missing = family.missing_handlers()
        if missing:
            raise RegistryError(f"Leaf family {family.name!r} lacks handler(s): {', '.join(missing)}")
        self._families[family.key] = family
        logger.debug("Registered leaf family %s", family.name)
        return family

    def get(self, name: str) -> LeafFamily:
        try:
            return self._families[name.lower()]
        except KeyError:
            raise UnknownFamilyError(name) from None

    def __contains__(self, name: str) -> bool:
        return name.lower() in self._families

    def names(self) -> List[str]:
        return sorted(self._families)


DEFAULT_REGISTRY = LeafRegistry.default()


def register_leaf_family(descriptor: LeafFamily, registry: Optional[LeafRegistry] = None) -> LeafRegistry:
    """
    Register a leaf family so construction, inference, sampling, learning,
    serialization and codegen can use it.

    Args:
        descriptor: The family to add
        registry: Target registry (default: the process-wide registry)

    Returns:
        The registry the family was added to

    Raises:
        RegistryError: On a duplicate name or a missing handler
    """
    registry = registry if registry is not None else DEFAULT_REGISTRY
    registry.register(descriptor)
    return registry


def resolve_family(family: Union[str, LeafFamily], registry: Optional[LeafRegistry] = None) -> LeafFamily:
    """Look up a family by name, or pass a descriptor through."""
    if isinstance(family, LeafFamily):
        return family
    registry = registry if registry is not None else DEFAULT_REGISTRY
    return registry.get(family)
