"""
Context: per-column statistical type and domain metadata.
Used by structure learning, leaf fitting and random structure generation.
"""
import json
import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, DataError
from .leaves import LeafFamily, LeafRegistry, resolve_family

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ColumnSpec:
    """Statistical type of one data column: a leaf family plus its domain."""

    family: LeafFamily
    cardinality: Optional[int] = None
    range: Optional[Tuple[float, float]] = None

    @property
    def categorical(self) -> bool:
        return self.family.discrete

    def check(self, index: int):
        """Raise ConfigurationError when the domain metadata is inconsistent."""
        if self.cardinality is not None and self.cardinality < 2:
            raise ConfigurationError(f"context[{index}]: categorical cardinality must be >= 2")
        if self.range is not None and self.range[0] > self.range[1]:
            raise ConfigurationError(f"context[{index}]: range lower bound exceeds upper bound")

    def to_dict(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {"family": self.family.label}
        if self.cardinality is not None:
            record["cardinality"] = self.cardinality
        if self.range is not None:
            record["range"] = list(self.range)
        return record


class Context:
    """Ordered column specs, one per data column."""

    def __init__(self, columns: Sequence[ColumnSpec]):
        if not columns:
            raise ConfigurationError("Context needs at least one column")
        self.columns: List[ColumnSpec] = list(columns)
        for index, column in enumerate(self.columns):
            column.check(index)

    @classmethod
    def from_families(cls, families: Sequence[str], registry: Optional[LeafRegistry] = None,
                      cardinalities: Optional[Dict[int, int]] = None,
                      ranges: Optional[Dict[int, Tuple[float, float]]] = None) -> "Context":
        """
        Build a context from family names, e.g. ["Gaussian", "Gaussian", "Categorical"].

        Args:
            families: Family name per column
            registry: Registry used to resolve the names
            cardinalities: Optional categorical cardinality per column index
            ranges: Optional numeric range per column index
        """
        cardinalities = cardinalities or {}
        ranges = ranges or {}
        columns = [
            ColumnSpec(resolve_family(name, registry), cardinalities.get(i), ranges.get(i))
            for i, name in enumerate(families)
        ]
        return cls(columns)

    @classmethod
    def from_records(cls, records: Sequence[Dict[str, Any]], registry: Optional[LeafRegistry] = None,
                     source: str = "context") -> "Context":
        """
        Build a context from a list of {family, cardinality | range} records.

        Raises:
            ConfigurationError: If a record is malformed
        """
        if not isinstance(records, list) or not records:
            raise ConfigurationError(f"{source}: expected a non-empty list of column records")
        columns = []
        for index, record in enumerate(records):
            if not isinstance(record, dict) or "family" not in record:
                raise ConfigurationError(f"{source}[{index}]: record needs a 'family' field")
            unknown = set(record) - {"family", "cardinality", "range"}
            if unknown:
                raise ConfigurationError(f"{source}[{index}]: unknown field(s) {', '.join(sorted(unknown))}")
            family = resolve_family(str(record["family"]), registry)
            cardinality = record.get("cardinality")
            bounds = record.get("range")
            try:
                if cardinality is not None:
                    cardinality = int(cardinality)
                if bounds is not None:
                    lo, hi = bounds
                    bounds = (float(lo), float(hi))
            except (TypeError, ValueError) as e:
                raise ConfigurationError(f"{source}[{index}]: {e}") from e
            columns.append(ColumnSpec(family, cardinality, bounds))
        return cls(columns)

    @classmethod
    def load(cls, path: str, registry: Optional[LeafRegistry] = None) -> "Context":
        """
        Load a context JSON file.

        Raises:
            ConfigurationError: If the file is missing or not valid JSON
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                records = json.load(f)
        except FileNotFoundError:
            raise ConfigurationError(f"Context file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Invalid JSON in context file {path}: {e}") from e
        context = cls.from_records(records, registry, source=path)
        logger.info("Loaded context with %d columns from %s", len(context), path)
        return context

    def __len__(self) -> int:
        return len(self.columns)

    def __getitem__(self, index: int) -> ColumnSpec:
        return self.columns[index]

    def with_domains(self, data: np.ndarray) -> "Context":
        """
        Fill in categorical cardinalities and numeric ranges missing from the context
        using the observed data.

        Raises:
            DataError: If the data width differs from the context
        """
        data = np.asarray(data, dtype=float)
        if data.ndim != 2 or data.shape[1] != len(self.columns):
            raise DataError(f"data has {data.shape[-1]} columns, context has {len(self.columns)}")
        columns = []
        for index, column in enumerate(self.columns):
            observed = data[:, index]
            observed = observed[~np.isnan(observed)]
            if column.categorical and column.cardinality is None:
                top = int(observed.max()) + 1 if observed.size else 2
                column = replace(column, cardinality=max(top, 2))
            elif not column.categorical and column.range is None and observed.size:
                column = replace(column, range=(float(observed.min()), float(observed.max())))
            columns.append(column)
        return Context(columns)

    def to_records(self) -> List[Dict[str, Any]]:
        return [column.to_dict() for column in self.columns]
