"""
ConfigurationManager for spnkit.
Centralized configuration: one dataclass per concern, optionally loaded from YAML.
"""
import logging
import re
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Optional

import yaml

from ..core.errors import ConfigurationError

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class LearnHyperparams:
    """Structure learning and leaf fitting settings."""

    # Recursion stopping rule
    min_instances: int = 200

    # Column split: pairwise dependence above this joins two columns
    dependence_threshold: float = 0.3

    # Row split
    cluster_count: int = 2
    seed: int = 0

    # Leaf fitting
    laplace_alpha: float = 1.0
    std_floor: float = 1e-6

    def validate(self) -> "LearnHyperparams":
        if self.min_instances < 1:
            raise ConfigurationError(f"min_instances must be >= 1, got {self.min_instances}")
        if not 0.0 <= self.dependence_threshold <= 1.0:
            raise ConfigurationError(f"dependence_threshold must lie in [0, 1], got {self.dependence_threshold}")
        if self.cluster_count < 2:
            raise ConfigurationError(f"cluster_count must be >= 2, got {self.cluster_count}")
        if self.laplace_alpha < 0.0:
            raise ConfigurationError(f"laplace_alpha must be >= 0, got {self.laplace_alpha}")
        if self.std_floor <= 0.0:
            raise ConfigurationError(f"std_floor must be > 0, got {self.std_floor}")
        return self


@dataclass
class OptimizeOptions:
    """Gradient ascent settings."""

    epochs: int = 100
    learning_rate: float = 0.05

    def validate(self) -> "OptimizeOptions":
        if self.epochs < 0:
            raise ConfigurationError(f"epochs must be >= 0, got {self.epochs}")
        if not self.learning_rate > 0.0:
            raise ConfigurationError(f"learning_rate must be > 0, got {self.learning_rate}")
        return self


@dataclass
class EmitOptions:
    """C code generation settings."""

    function_name: str = "spn_loglik"
    emit_main: bool = False
    precision: str = "double"

    def validate(self) -> "EmitOptions":
        if not IDENTIFIER.match(self.function_name or ""):
            raise ConfigurationError(f"function_name must be a C identifier, got {self.function_name!r}")
        if self.function_name == "main":
            raise ConfigurationError("function_name must not be 'main'")
        if self.precision != "double":
            raise ConfigurationError(f"only double precision is supported, got {self.precision!r}")
        return self


@dataclass
class OutputConfig:
    """CLI output settings."""

    precision: int = 6  # decimals for printed numbers
    log_level: str = "WARNING"

    def validate(self) -> "OutputConfig":
        if self.precision < 0:
            raise ConfigurationError(f"precision must be >= 0, got {self.precision}")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigurationError(f"log_level must be one of {', '.join(LOG_LEVELS)}")
        self.log_level = self.log_level.upper()
        return self


SECTIONS = {
    "learn": LearnHyperparams,
    "optimize": OptimizeOptions,
    "emit": EmitOptions,
    "output": OutputConfig,
}


def _build_section(name: str, cls, values: Any, source: str):
    if values is None:
        return cls()
    if not isinstance(values, dict):
        raise ConfigurationError(f"{source}: section '{name}' must be a mapping")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigurationError(f"{source}: unknown key(s) in '{name}': {', '.join(unknown)}")
    coerced = {}
    for key, value in values.items():
        default = getattr(cls(), key)
        try:
            if isinstance(default, bool):
                if not isinstance(value, bool):
                    raise ValueError(f"expected true/false, got {value!r}")
                coerced[key] = value
            else:
                coerced[key] = type(default)(value)
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"{source}: {name}.{key}: {e}") from e
    return cls(**coerced).validate()


class ConfigurationManager:
    """Centralized configuration for every spnkit system."""

    def __init__(self, learn: Optional[LearnHyperparams] = None, optimize: Optional[OptimizeOptions] = None,
                 emit: Optional[EmitOptions] = None, output: Optional[OutputConfig] = None):
        """Initialize with default configurations."""
        self.learn = (learn or LearnHyperparams()).validate()
        self.optimize = (optimize or OptimizeOptions()).validate()
        self.emit = (emit or EmitOptions()).validate()
        self.output = (output or OutputConfig()).validate()

    @classmethod
    def from_dict(cls, document: Optional[Dict[str, Any]], source: str = "config") -> "ConfigurationManager":
        """
        Build a configuration from a mapping with optional sections
        learn, optimize, emit and output.

        Raises:
            ConfigurationError: On unknown sections or keys, or invalid values
        """
        document = document or {}
        if not isinstance(document, dict):
            raise ConfigurationError(f"{source}: top level must be a mapping")
        unknown = sorted(set(document) - set(SECTIONS))
        if unknown:
            raise ConfigurationError(f"{source}: unknown section(s): {', '.join(unknown)}")
        sections = {name: _build_section(name, cls_, document.get(name), source)
                    for name, cls_ in SECTIONS.items()}
        return cls(**sections)

    @classmethod
    def from_yaml(cls, path: str) -> "ConfigurationManager":
        """
        Load configuration from a YAML file.

        Raises:
            ConfigurationError: If the file is missing, not valid YAML or has invalid values
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                document = yaml.safe_load(f)
        except FileNotFoundError:
            raise ConfigurationError(f"Configuration file not found: {path}")
        except OSError as e:
            raise ConfigurationError(f"Cannot read configuration file {path}: {e}") from e
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Invalid YAML in configuration file {path}: {e}") from e
        manager = cls.from_dict(document, source=path)
        logger.info("Loaded configuration from %s", path)
        return manager

    def override(self, section: str, **values) -> None:
        """Apply non-None overrides (e.g. from command-line flags) to one section."""
        current = getattr(self, section)
        updates = {key: value for key, value in values.items() if value is not None}
        if updates:
            merged = asdict(current)
            merged.update(updates)
            setattr(self, section, type(current)(**merged).validate())

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        return {name: asdict(getattr(self, name)) for name in SECTIONS}
