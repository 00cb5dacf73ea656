"""
Shared test documents.
"""

import json
from pathlib import Path
from typing import List, Optional

from config.config import DEFAULT_DEPTH, DEFAULT_PRECISION
from src.models.embedding import Embedding
from src.utils.document import parse_document

DATA_DIR = Path(__file__).parent / "data"


def example_path(name: str) -> Path:
    return DATA_DIR / f"example_{name}.json"


def load_example(name: str, cap: int = DEFAULT_PRECISION, depth: int = DEFAULT_DEPTH) -> Embedding:
    """Parse one of the golden documents (a, b, c, d)."""
    return parse_document(example_path(name).read_bytes(), cap=cap, depth=depth)


def example_document(name: str) -> dict:
    return json.loads(example_path(name).read_text())


def identity_document(n: int) -> dict:
    """X1 -> t, Xi -> Ti*t: the usual order function on n variables."""
    symbols = [f"T{i}" for i in range(2, n + 1)]
    series = {"X1": {"terms": [{"c": "1", "e": 1}]}}
    for i in range(2, n + 1):
        series[f"X{i}"] = {"terms": [{"c": f"T{i}", "e": 1}]}
    return {
        "field": {"symbols": symbols},
        "variables": [f"X{i}" for i in range(1, n + 1)],
        "series": series,
    }


def monomial_document(exponents: List[int], symbols: Optional[List[str]] = None) -> dict:
    """Xi -> t^a_i with coefficient 1."""
    return {
        "field": {"symbols": symbols or []},
        "variables": [f"X{i}" for i in range(1, len(exponents) + 1)],
        "series": {
            f"X{i}": {"terms": [{"c": "1", "e": int(a)}]}
            for i, a in enumerate(exponents, start=1)
        },
    }


def build(document: dict, cap: int = DEFAULT_PRECISION, depth: int = DEFAULT_DEPTH) -> Embedding:
    return parse_document(json.dumps(document), cap=cap, depth=depth)
