"""
Embeddings X_i -> psi_i(t) and rational expressions evaluated through them.
"""

import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import sympy
from sympy import Symbol

from config.config import DEFAULT_PRECISION, RESERVED_PARAMETER
from .errors import InputError, PrecisionError
from .field import PARSER_NAMES, FieldElem, FieldPresentation, format_expr, parse_text
from .series import LazySeries, Value, divide, integer_power

logger = logging.getLogger(__name__)


class FieldExpr:
    """
    A rational expression in the variables with coefficients in the field.

    Wraps a sympy expression over the variable symbols and the declared field
    symbols. Text input may put field coefficients in braces, e.g.
    ``X3 - {T2}*X1``; braces read as parentheses.
    """

    def __init__(self, expr: sympy.Expr, variables: Sequence[str], presentation: FieldPresentation):
        self.expr = expr
        self.variables = tuple(variables)
        self.presentation = presentation
        self._fraction: Optional[Tuple[sympy.Expr, sympy.Expr]] = None

    @classmethod
    def parse(cls, text: str, variables: Sequence[str], presentation: FieldPresentation) -> 'FieldExpr':
        """
        Parse an expression over ``variables``.

        Raises:
            InputError: On names other than variables and field symbols, any
                other syntax outside the grammar, or non-integer powers of
                subexpressions involving variables
        """
        local_dict = dict(presentation.sympy_symbols)
        local_dict.update({name: Symbol(name) for name in variables})
        expr = parse_text(text.replace('{', '(').replace('}', ')'), local_dict)

        if expr.has(sympy.zoo, sympy.nan, sympy.oo):
            raise InputError(f"division by zero in expression '{text}'")
        variable_symbols = {Symbol(name) for name in variables}
        for node in expr.atoms(sympy.Pow):
            if node.free_symbols & variable_symbols and not node.exp.is_Integer:
                raise InputError(f"non-integer power {format_expr(node)} in '{text}'")
        return cls(expr, variables, presentation)

    @classmethod
    def variable(cls, name: str, variables: Sequence[str], presentation: FieldPresentation) -> 'FieldExpr':
        return cls(Symbol(name), variables, presentation)

    def __repr__(self) -> str:
        return f"FieldExpr('{self.format()}')"

    def __str__(self) -> str:
        return self.format()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldExpr):
            return NotImplemented
        return self.expr == other.expr

    def __hash__(self) -> int:
        return hash(self.expr)

    def format(self) -> str:
        """Text in the ``^`` grammar; parsing it gives the same expression."""
        return format_expr(self.expr)

    @property
    def is_zero(self) -> bool:
        """Syntactic zero."""
        return self.expr == 0

    @property
    def used_variables(self) -> List[str]:
        names = {s.name for s in self.expr.free_symbols}
        return [name for name in self.variables if name in names]

    def numerator_denominator(self) -> Tuple[sympy.Expr, sympy.Expr]:
        """Numerator and denominator over a common denominator."""
        if self._fraction is None:
            self._fraction = sympy.fraction(sympy.together(self.expr))
        return self._fraction

    def equivalent(self, other: 'FieldExpr') -> bool:
        """Equality as rational functions."""
        return sympy.cancel(self.expr - other.expr) == 0


class Embedding:
    """
    An embedding of k((X_1, ..., X_n)) into Delta((t)), X_i -> psi_i.

    Every image has a finite order >= 1 within the precision cap; this is
    checked when the embedding is built.
    """

    def __init__(self, presentation: FieldPresentation, variables: Sequence[str],
                 images: Sequence[LazySeries], cap: int = DEFAULT_PRECISION,
                 certified: Iterable[int] = (), values: Optional[Sequence[int]] = None):
        """
        Initialize the embedding.

        Args:
            presentation (FieldPresentation): Coefficient field
            variables (Sequence[str]): Variable names, in order
            images (Sequence[LazySeries]): One series per variable
            cap (int): Precision cap for every order search
            certified (Iterable[int]): 1-based positions whose series the user
                certifies to carry an infinite algebraic residue chain
            values (Sequence[int], optional): Known orders of the images

        Raises:
            InputError: On bad names or images without an order >= 1 within cap
        """
        variables = list(variables)
        images = list(images)
        if len(variables) < 2:
            raise InputError(f"an embedding needs at least 2 variables, got {len(variables)}")
        if len(images) != len(variables):
            raise InputError(f"{len(variables)} variables but {len(images)} images")
        if len(set(variables)) != len(variables):
            raise InputError(f"duplicate variable names: {variables}")
        for name in variables:
            if (not isinstance(name, str) or not name.isidentifier()
                    or name == RESERVED_PARAMETER or name in PARSER_NAMES):
                raise InputError(f"invalid variable name: {name!r}")
            if name in presentation.symbols:
                raise InputError(f"variable '{name}' collides with a field symbol")

        self.presentation = presentation
        self.variables = tuple(variables)
        self.images = tuple(images)
        self.cap = int(cap)
        self.certified = frozenset(certified)
        self._powers: Dict[Tuple[int, int], LazySeries] = {}

        if values is None:
            values = []
            for name, image in zip(self.variables, self.images):
                value = image.order(self.cap)
                if not value.is_finite:
                    raise InputError(
                        f"image of {name}: image order not established: raise precision or fix input"
                    )
                if value.order < 1:
                    raise InputError(f"image of {name} has order 0; images must lie in t*Delta[[t]]")
                values.append(value.order)
            logger.info(f"Embedding of {self.variables} with values {values}")
        self._values = tuple(values)

    def __repr__(self) -> str:
        return f"Embedding({list(self.variables)}, values={list(self._values)})"

    @property
    def n(self) -> int:
        return len(self.variables)

    def values(self) -> List[int]:
        """Orders of the images, in variable order."""
        return list(self._values)

    def value_of(self, i: int) -> int:
        return self._values[i - 1]

    def image(self, i: int) -> LazySeries:
        """Image of the i-th variable (1-based)."""
        return self.images[i - 1]

    def index(self, name: str) -> int:
        """1-based position of a variable."""
        try:
            return self.variables.index(name) + 1
        except ValueError:
            raise InputError(f"unknown variable '{name}'") from None

    @property
    def symbols(self) -> Dict[str, Symbol]:
        return {name: Symbol(name) for name in self.variables}

    def power(self, i: int, m: int) -> LazySeries:
        """psi_i^m, cached per embedding."""
        key = (i, m)
        if key not in self._powers:
            self._powers[key] = self.image(i) if m == 1 else integer_power(self.image(i), m)
        return self._powers[key]

    def with_images(self, images: Sequence[LazySeries], values: Sequence[int]) -> 'Embedding':
        """Same names and settings, new images with already established values."""
        derived = Embedding(self.presentation, self.variables, images, self.cap,
                            self.certified, values=values)
        for (i, m), series in self._powers.items():
            if derived.images[i - 1] is self.images[i - 1]:
                derived._powers[(i, m)] = series
        return derived

    def with_image(self, i: int, series: LazySeries) -> 'Embedding':
        """Replace one image, re-establishing its order."""
        value = series.order(self.cap)
        if not value.is_finite or value.order < 1:
            raise PrecisionError(
                f"new image of {self.variables[i - 1]} has no order >= 1 within precision {self.cap}",
                cap=self.cap,
            )
        images = list(self.images)
        images[i - 1] = series
        values = self.values()
        values[i - 1] = value.order
        return self.with_images(images, values)

    def renamed(self, names: Sequence[str]) -> 'Embedding':
        """The same images under new variable names."""
        renamed = Embedding(self.presentation, names, self.images, self.cap,
                            self.certified, values=self._values)
        renamed._powers = self._powers
        return renamed

    def parse(self, text: str) -> FieldExpr:
        """Parse an expression over this embedding's variables."""
        return FieldExpr.parse(text, self.variables, self.presentation)


def _series_of(emb: Embedding, expr: sympy.Expr) -> LazySeries:
    presentation = emb.presentation
    variable_symbols = emb.symbols
    if not any(s.name in variable_symbols for s in expr.free_symbols):
        value = presentation.from_expr(expr)
        return LazySeries.constant(presentation, value) if value else LazySeries.zero(presentation)
    if expr.is_Symbol:
        return emb.image(emb.index(expr.name))
    if expr.is_Add:
        total = LazySeries.zero(presentation)
        for arg in expr.args:
            total = total + _series_of(emb, arg)
        return total
    if expr.is_Mul:
        constants = []
        product = None
        for arg in expr.args:
            if any(s.name in variable_symbols for s in arg.free_symbols):
                factor = _series_of(emb, arg)
                product = factor if product is None else product * factor
            else:
                constants.append(arg)
        return product.scale(presentation.from_expr(sympy.Mul(*constants)))
    if expr.is_Pow and expr.exp.is_Integer and expr.exp > 0:
        m = int(expr.exp)
        if expr.base.is_Symbol:
            return emb.power(emb.index(expr.base.name), m)
        return integer_power(_series_of(emb, expr.base), m)
    raise InputError(f"cannot evaluate {format_expr(expr)} as a power series")


def _numerator_denominator_series(emb: Embedding, f: FieldExpr) -> Tuple[LazySeries, LazySeries]:
    numerator, denominator = f.numerator_denominator()
    return _series_of(emb, numerator), _series_of(emb, denominator)


def evaluate(emb: Embedding, f: FieldExpr) -> LazySeries:
    """
    The series psi(f).

    A rational f = g/h is divided out, which requires ord(h) <= ord(g).

    Raises:
        PrecisionError: If the order of the denominator is not established
        InputError: If f has negative value, so psi(f) is not a power series
        ZeroDivisionError: If the denominator is the zero constant
    """
    numerator, denominator = _numerator_denominator_series(emb, f)
    if denominator.is_zero:
        raise ZeroDivisionError(f"denominator of {f} is zero")
    if denominator.degree_bound == 0:
        # constant denominator
        return numerator.scale(emb.presentation.one / denominator.coefficient(0))
    return divide(numerator, denominator, emb.cap)


def value(emb: Embedding, f: FieldExpr) -> Value:
    """
    v(f) = ord psi(g) - ord psi(h) for f = g/h.

    Examples:
        v(X2) = 4 under X1 -> t^2, X2 -> T2 t^4 + T2 t^6, X3 -> T2 t^2 + T3 t^5
    """
    if f.is_zero:
        return Value.infinite()
    numerator_order, denominator_order = value_orders(emb, f)
    result = numerator_order - denominator_order
    logger.debug(f"v({f}) = {result}")
    return result


def value_orders(emb: Embedding, f: FieldExpr) -> Tuple[Value, Value]:
    """Orders of psi(g) and psi(h) for f = g/h, the certificate behind v(f)."""
    numerator, denominator = _numerator_denominator_series(emb, f)
    if denominator.is_zero:
        raise ZeroDivisionError(f"denominator of {f} is zero")
    return numerator.order(emb.cap), denominator.order(emb.cap)


def leading_data(emb: Embedding, f: FieldExpr) -> Tuple[Value, FieldElem]:
    """
    Value and leading coefficient of psi(f).

    Raises:
        PrecisionError: If the value is not finite within the cap
    """
    numerator, denominator = _numerator_denominator_series(emb, f)
    top, top_lead = numerator.leading(emb.cap)
    bottom, bottom_lead = denominator.leading(emb.cap)
    if not (top.is_finite and bottom.is_finite):
        raise PrecisionError(f"value of {f} not established within precision {emb.cap}", cap=emb.cap)
    return top - bottom, top_lead / bottom_lead
