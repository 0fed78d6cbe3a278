"""Model files: DSL (.spn) or JSON (.json), chosen by extension."""
import logging
import os
from typing import Optional

from ..core.errors import ModelError
from ..core.leaves import LeafRegistry
from ..core.network import Network
from .dsl import parse_dsl, print_dsl
from .json_format import from_json, to_json

logger = logging.getLogger(__name__)

READERS = {".spn": parse_dsl, ".json": from_json}
WRITERS = {".spn": print_dsl, ".json": to_json}


def _extension(path: str) -> str:
    extension = os.path.splitext(path)[1].lower()
    if extension not in READERS:
        raise ModelError(f"Unknown model format {extension or '(none)'!r} for {path}; use .spn or .json")
    return extension


def load_model(path: str, registry: Optional[LeafRegistry] = None) -> Network:
    """
    Load a network from a model file.

    Raises:
        ModelError: If the file is missing, unreadable or its extension is unknown;
            parse errors propagate as their ModelError subclasses
    """
    extension = _extension(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except FileNotFoundError:
        raise ModelError(f"Model file not found: {path}")
    except OSError as e:
        raise ModelError(f"Cannot read model file {path}: {e}") from e
    network = READERS[extension](text, registry)
    logger.info("Loaded model with %d nodes from %s", len(network), path)
    return network


def save_model(network: Network, path: str):
    """Write a network to a .spn or .json file."""
    text = WRITERS[_extension(path)](network)
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise ModelError(f"Cannot write model file {path}: {e}") from e
    logger.info("Saved model with %d nodes to %s", len(network), path)
