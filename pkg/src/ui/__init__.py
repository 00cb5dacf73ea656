"""Text and JSON rendering for the command line."""

from .components import (
    render_analysis,
    render_json,
    render_order_check,
    render_residues,
    render_unit_element,
    render_value,
)
from .styles import apply_styles, colorstr

__all__ = [
    'render_analysis', 'render_json', 'render_order_check', 'render_residues',
    'render_unit_element', 'render_value', 'apply_styles', 'colorstr',
]
