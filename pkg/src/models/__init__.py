"""Domain objects: coefficient field, power series, embeddings, errors."""

from .embedding import Embedding, FieldExpr, evaluate, leading_data, value
from .errors import DomainError, InputError, IterationLimitError, PrecisionError, ValuationError
from .field import CoeffRule, FieldPresentation, field_arith, jacobian_rank
from .series import LazySeries, Tail, Value

__all__ = [
    'Embedding', 'FieldExpr', 'evaluate', 'leading_data', 'value',
    'DomainError', 'InputError', 'IterationLimitError', 'PrecisionError', 'ValuationError',
    'CoeffRule', 'FieldPresentation', 'field_arith', 'jacobian_rank',
    'LazySeries', 'Tail', 'Value',
]
