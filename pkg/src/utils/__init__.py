"""Valuation algorithms, transformation traces and document handling."""

from .document import load_trace, parse_document
from .transform import CoordChange, Monoidal, Swap, Trace, apply_step, pullback, replay
from .valuation import (
    analyze,
    equalize_values,
    extract_residue_chain,
    order_function_check,
    residue_phase,
    transcendence_test,
    unit_value_element,
)

__all__ = [
    'load_trace', 'parse_document',
    'CoordChange', 'Monoidal', 'Swap', 'Trace', 'apply_step', 'pullback', 'replay',
    'analyze', 'equalize_values', 'extract_residue_chain', 'order_function_check',
    'residue_phase', 'transcendence_test', 'unit_value_element',
]
