"""
JSON Schema validation for the artifacts written by the toolkit
"""

import json
import logging
import os
from functools import lru_cache
from typing import Dict

from jsonschema import Draft7Validator

from errors import DataError

logger = logging.getLogger(__name__)

SCHEMA_DIRECTORY = os.path.join(os.path.dirname(os.path.abspath(__file__)), "docs")

SCHEMA_FILES = {
    "corpus": "corpus.schema.json",
    "model": "model.schema.json",
    "eval_report": "eval_report.schema.json",
    "labels": "labels.schema.json",
    "gold_labels": "labels.schema.json",
    "arguments": "arguments.schema.json",
}


@lru_cache(maxsize=None)
def load_schema(kind: str) -> Dict:
    if kind not in SCHEMA_FILES:
        raise KeyError(f"No schema registered for {kind!r}")
    with open(os.path.join(SCHEMA_DIRECTORY, SCHEMA_FILES[kind]), 'r', encoding='utf-8') as f:
        return json.load(f)


@lru_cache(maxsize=None)
def _validator(kind: str) -> Draft7Validator:
    return Draft7Validator(load_schema(kind))


def validate_document(data, kind: str, source: str = "<document>"):
    """Raise DataError naming the first violation (by path) if data is not a valid `kind` document"""
    errors = sorted(_validator(kind).iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        logger.debug(f"{source}: {len(errors)} schema violations")
        raise DataError(f"{source}: invalid {kind} file at {where}: {first.message}")


def is_valid(data, kind: str) -> bool:
    return _validator(kind).is_valid(data)
