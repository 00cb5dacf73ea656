"""
Exact arithmetic in the coefficient field Q(S_1, ..., S_k).

Elements are sympy ``FracElement`` values of a rational function field over
``QQ``. A declared symbol S with radical bound N > 1 is represented through an
internal root symbol ``S__N`` with S = (S__N)^N, so every root S^(a/N) is a
monomial of the internal field.
"""

import io
import logging
import tokenize
from tokenize import TokenError
from typing import Dict, Iterable, List, Optional, Sequence, Union

import sympy
from sympy import Function, Integer, Pow, Rational, Symbol, factorial
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.printing.str import StrPrinter

from config.config import RESERVED_PARAMETER
from .errors import DomainError, InputError

logger = logging.getLogger(__name__)

FieldElem = FracElement

_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_UNDEFINED = (sympy.zoo, sympy.nan, sympy.oo, -sympy.oo)
_PLACEHOLDER = '_unused'

# Grammar of every text input: integer literals, known names, + - * / ^ ( )
_OPERATORS = frozenset({'+', '-', '*', '/', '^', '(', ')'})
_LAYOUT_TOKENS = frozenset({tokenize.NEWLINE, tokenize.NL, tokenize.ENDMARKER,
                            tokenize.INDENT, tokenize.DEDENT})
# Only these names are visible to the code sympy evaluates
_PARSER_GLOBALS = {'Integer': Integer, 'Rational': Rational, 'Symbol': Symbol}
PARSER_NAMES = frozenset(_PARSER_GLOBALS) | {'factorial'}


class CaretPrinter(StrPrinter):
    """String printer for the coefficient grammar: ``^`` powers, no ``sqrt``."""

    def _print_Pow(self, expr, rational=False):
        # nested powers are printed by this method too, so the only '**' left
        # is the operator of this node
        return super()._print_Pow(expr, rational=True).replace('**', '^')


def format_expr(expr: sympy.Expr) -> str:
    """Render a sympy expression in the ``^`` grammar accepted by the parsers."""
    return CaretPrinter().doprint(expr)


def check_tokens(text: str, names: Iterable[str]):
    """
    Reject text outside the expression grammar before anything evaluates it.

    Args:
        text (str): Expression text
        names (Iterable[str]): Names the expression may use

    Raises:
        InputError: On unknown names, non-integer literals, strings or any
            operator other than ``+ - * / ^ ( )``
    """
    names = set(names)
    try:
        tokens = list(tokenize.generate_tokens(io.StringIO(text).readline))
    except (TokenError, SyntaxError) as e:
        raise InputError(f"malformed expression '{text}': {e}") from e

    for token in tokens:
        kind, string = token.type, token.string
        if kind in _LAYOUT_TOKENS:
            continue
        if kind == tokenize.NAME:
            if string not in names:
                raise InputError(f"unknown name '{string}' in expression '{text}'")
        elif kind == tokenize.NUMBER:
            if not (string.isascii() and string.isdigit()):
                raise InputError(f"only integer literals are exact, got '{string}' in '{text}'")
        elif kind != tokenize.OP or string not in _OPERATORS:
            raise InputError(f"unexpected '{string}' in expression '{text}'")


def parse_text(text: str, local_dict: Dict[str, object]) -> sympy.Expr:
    """
    Parse an expression written in the ``^`` grammar.

    The text is checked token by token first, and sympy evaluates it with no
    builtins and only the names of ``local_dict`` in scope.

    Args:
        text (str): Expression text
        local_dict (Dict[str, object]): Names the expression may use

    Returns:
        sympy.Expr: Parsed (evaluated) expression

    Raises:
        InputError: If the text is not a well-formed expression
    """
    if not isinstance(text, str) or not text.strip():
        raise InputError(f"empty expression: {text!r}")
    text = text.strip()
    check_tokens(text, local_dict)
    global_dict = dict(_PARSER_GLOBALS, __builtins__={})
    try:
        expr = parse_expr(text, local_dict=dict(local_dict), global_dict=global_dict,
                          transformations=_TRANSFORMATIONS)
    except (SyntaxError, TokenError, TypeError, ValueError, AttributeError, NameError,
            sympy.SympifyError) as e:
        raise InputError(f"malformed expression '{text}': {e}") from e
    if not isinstance(expr, sympy.Expr):
        raise InputError(f"malformed expression '{text}'")
    return expr


def power(elem: FieldElem, exponent: int) -> FieldElem:
    """Integer power of a field element, kept in canonical form."""
    if exponent >= 0:
        return elem ** exponent
    return elem.field.one / elem ** (-exponent)


def is_constant(elem: FieldElem) -> bool:
    """True when the element lies in Q."""
    return elem.numer.is_ground and elem.denom.is_ground


class FieldPresentation:
    """The coefficient field Q(S_1, ..., S_k) with its radical bounds."""

    def __init__(self, symbols: Sequence[str], radical_bound: Optional[Dict[str, int]] = None):
        """
        Initialize the presentation.

        Args:
            symbols (Sequence[str]): Ordered indeterminate names
            radical_bound (Dict[str, int], optional): Maximal root denominator
                per symbol, 1 when absent

        Raises:
            InputError: On duplicate, empty or reserved names and bad bounds
        """
        symbols = list(symbols)
        radical_bound = dict(radical_bound or {})

        seen = set()
        for name in symbols:
            if not isinstance(name, str) or not name.isidentifier():
                raise InputError(f"invalid symbol name: {name!r}")
            if name == RESERVED_PARAMETER or name in PARSER_NAMES or '__' in name or name.startswith('_'):
                raise InputError(f"reserved symbol name: '{name}'")
            if name in seen:
                raise InputError(f"duplicate symbol: '{name}'")
            seen.add(name)

        for name, bound in radical_bound.items():
            if name not in seen:
                raise InputError(f"radical_bound refers to undeclared symbol '{name}'")
            if isinstance(bound, bool) or not isinstance(bound, int) or bound < 1:
                raise InputError(f"radical_bound of '{name}' must be a positive integer, got {bound!r}")

        self.symbols = tuple(symbols)
        self.radical_bound = {name: radical_bound.get(name, 1) for name in symbols}
        self.internal_names = tuple(
            name if self.radical_bound[name] == 1 else f"{name}__{self.radical_bound[name]}"
            for name in symbols
        )

        # polynomial rings need at least one generator
        self.field = FracField(self.internal_names or (_PLACEHOLDER,), QQ)
        self.zero = self.field.zero
        self.one = self.field.one

        # declared symbol -> (internal generator, bound)
        self._roots = {
            name: (gen, self.radical_bound[name])
            for name, gen in zip(self.symbols, self.field.gens)
        }
        self._internal = dict(zip(self.internal_names, self.field.gens))
        self._to_declared = {
            Symbol(internal): Symbol(name) ** Rational(1, self.radical_bound[name])
            for name, internal in zip(self.symbols, self.internal_names)
        }
        self.sympy_symbols = {name: Symbol(name) for name in self.symbols}

    def __repr__(self) -> str:
        return f"FieldPresentation(symbols={list(self.symbols)}, radical_bound={self.radical_bound})"

    @property
    def generators(self) -> List[FieldElem]:
        """Internal generators, one per declared symbol."""
        return list(self.field.gens[:len(self.symbols)])

    def constant(self, value: Union[int, Rational]) -> FieldElem:
        """Embed a rational constant."""
        return self.field.ground_new(QQ.from_sympy(Rational(value)))

    def symbol(self, name: str) -> FieldElem:
        """The element S for a declared symbol S."""
        if name not in self._roots:
            raise InputError(f"undeclared symbol '{name}'")
        gen, bound = self._roots[name]
        return gen ** bound

    def internal_generator(self, name: Union[str, FieldElem]) -> FieldElem:
        """Resolve a declared or internal symbol name to its internal generator."""
        if isinstance(name, FracElement):
            if name in self.field.gens:
                return name
            raise InputError(f"not a generator: {name}")
        if name in self._roots:
            return self._roots[name][0]
        if name in self._internal:
            return self._internal[name]
        raise InputError(f"unknown symbol '{name}'")

    # ------------------------------------------------------------------
    # conversion
    # ------------------------------------------------------------------

    def from_expr(self, expr: sympy.Expr) -> FieldElem:
        """
        Convert a sympy expression over the declared symbols.

        Rational powers are accepted on declared symbols whose radical bound
        absorbs the exponent denominator.

        Raises:
            InputError: On undeclared symbols, inexact numbers, functions or
                radicals the presentation cannot express
        """
        if expr.is_Rational:
            return self.constant(expr)
        if expr in _UNDEFINED:
            raise DomainError("coefficient is undefined (division by zero)")
        if expr.is_Symbol:
            return self.symbol(expr.name)
        if expr.is_Add:
            result = self.zero
            for arg in expr.args:
                result = result + self.from_expr(arg)
            return result
        if expr.is_Mul:
            result = self.one
            for arg in expr.args:
                result = result * self.from_expr(arg)
            return result
        if expr.is_Pow:
            base, exp = expr.base, expr.exp
            if exp.is_Integer:
                return power(self.from_expr(base), int(exp))
            if exp.is_Rational and base.is_Symbol and base.name in self._roots:
                gen, bound = self._roots[base.name]
                scaled = exp * bound
                if scaled.is_Integer:
                    return power(gen, int(scaled))
                raise InputError(
                    f"root {base}^({exp}) needs a radical_bound divisible by {exp.q}, "
                    f"declared {bound}"
                )
            raise InputError(f"unsupported power in coefficient: {expr}")
        if expr.is_Float:
            raise InputError(f"floating-point constants are not exact: {expr}")
        raise InputError(f"unsupported coefficient expression: {expr}")

    def to_expr(self, elem: FieldElem) -> sympy.Expr:
        """Sympy expression over the declared symbols, radicals as rational powers."""
        return elem.as_expr().xreplace(self._to_declared)

    def format(self, elem: FieldElem) -> str:
        """Canonical text of an element; parsing it gives the element back."""
        return format_expr(self.to_expr(elem))

    def parse(self, text: str) -> FieldElem:
        """Parse a coefficient expression (no ``j``)."""
        expr = parse_text(text, self.sympy_symbols)
        logger.debug(f"Parsed coefficient '{text}' as {expr}")
        return self.from_expr(expr)

    def parse_rule(self, text: str, start: int = 1) -> 'CoeffRule':
        """Parse a coefficient rule in the index parameter ``j``."""
        local_dict = dict(self.sympy_symbols)
        local_dict[RESERVED_PARAMETER] = Symbol(RESERVED_PARAMETER, integer=True)
        local_dict['factorial'] = factorial
        return CoeffRule(self, parse_text(text, local_dict), start, text=text)


class CoeffRule:
    """A coefficient c(j) defined for every integer j at or above a start index."""

    def __init__(self, presentation: FieldPresentation, expr: sympy.Expr, start: int = 1,
                 text: Optional[str] = None):
        self.presentation = presentation
        self.start = int(start)
        self.parameter = next(
            (s for s in expr.free_symbols if s.name == RESERVED_PARAMETER),
            Symbol(RESERVED_PARAMETER, integer=True),
        )
        self.expr = expr
        self.text = text if text is not None else format_expr(expr)
        self._cache: Dict[int, FieldElem] = {}
        self._check()

    def __repr__(self) -> str:
        return f"CoeffRule('{self.text}', from={self.start})"

    def _check(self):
        """Reject rules that cannot evaluate to field elements for every j."""
        allowed = set(self.presentation.symbols) | {RESERVED_PARAMETER}
        for sym in self.expr.free_symbols:
            if sym.name not in allowed:
                raise InputError(f"undeclared symbol '{sym.name}' in rule '{self.text}'")

        if self.expr.has(*_UNDEFINED):
            raise InputError(f"rule '{self.text}' divides by zero")

        j = self.parameter
        for func in self.expr.atoms(Function):
            if func.func is not factorial:
                raise InputError(f"unsupported function {func.func} in rule '{self.text}'")
            self._check_factorial(func.args[0])

        for node in self.expr.atoms(Pow):
            base, exp = node.base, node.exp
            if base.has(j) and exp.is_negative and not isinstance(base, factorial):
                raise InputError(
                    f"denominator {format_expr(base)} depends on j in rule '{self.text}'; "
                    f"only factorials of j may divide"
                )
            if base == 0 and exp.has(j):
                raise InputError(f"power of zero with a j-dependent exponent in rule '{self.text}'")
            if exp.has(j):
                try:
                    poly = sympy.Poly(exp, j)
                except sympy.PolynomialError as e:
                    raise InputError(f"exponent {exp} is not linear in j") from e
                if poly.degree() > 1 or not all(c.is_Rational for c in poly.all_coeffs()):
                    raise InputError(f"exponent {exp} is not linear in j with rational coefficients")
                coeffs = [poly.coeff_monomial(j), poly.coeff_monomial(1)]
            elif exp.is_Integer:
                continue
            elif exp.is_Rational:
                coeffs = [exp]
            else:
                raise InputError(f"unsupported exponent {exp} in rule '{self.text}'")

            if base.is_Symbol and base.name in self.presentation.symbols:
                bound = self.presentation.radical_bound[base.name]
                if not all((c * bound).is_Integer for c in coeffs):
                    raise InputError(
                        f"exponent {exp} of {base} needs a radical_bound divisible by its "
                        f"denominators, declared {bound}"
                    )
            elif base.is_Rational:
                if not all(c.is_Integer for c in coeffs):
                    raise InputError(f"irrational power of a constant in rule '{self.text}'")
            else:
                raise InputError(f"j-dependent exponent on a compound base in rule '{self.text}'")

    def _check_factorial(self, argument: sympy.Expr):
        """factorial(a*j + b) needs integers a >= 0, b with a*start + b >= 0."""
        j = self.parameter
        try:
            poly = sympy.Poly(argument, j)
        except sympy.PolynomialError as e:
            raise InputError(f"factorial argument {argument} is not linear in j") from e
        coeffs = poly.all_coeffs()
        if poly.degree() > 1 or not all(c.is_Integer for c in coeffs) or coeffs[0] < 0:
            raise InputError(f"factorial argument {argument} is not a*j + b with integers a >= 0, b")
        if argument.subs(j, self.start) < 0:
            raise InputError(
                f"factorial({format_expr(argument)}) is undefined at the start index {self.start} "
                f"in rule '{self.text}'"
            )

    def evaluate(self, j: int) -> FieldElem:
        """
        Evaluate the rule at index j.

        Args:
            j (int): Index, at least the start index

        Returns:
            FieldElem: Exact coefficient

        Raises:
            DomainError: If j is below the start index or the rule is undefined at j
        """
        if j < self.start:
            raise DomainError(f"rule '{self.text}' evaluated at j={j} below its start {self.start}")
        if j not in self._cache:
            value = self.expr.subs(self.parameter, Integer(j))
            if value.has(*_UNDEFINED):
                raise DomainError(f"rule '{self.text}' is undefined at j={j}")
            self._cache[j] = self.presentation.from_expr(value)
        return self._cache[j]


def eval_coeff_rule(rule: CoeffRule, j: int) -> FieldElem:
    """Evaluate ``rule`` at index ``j``; see :meth:`CoeffRule.evaluate`."""
    return rule.evaluate(j)


def field_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    """
    Exact field arithmetic.

    Args:
        a (FieldElem): Left operand
        b (FieldElem): Right operand
        op (str): One of 'add', 'sub', 'mul', 'div'

    Returns:
        FieldElem: Canonical result

    Raises:
        ZeroDivisionError: On division by zero

    Examples:
        >>> F = FieldPresentation(['T2', 'T3'])
        >>> F.format(field_arith(F.parse('T2/T3'), F.parse('T3/T2'), 'add'))
        '(T2^2 + T3^2)/(T2*T3)'
    """
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    if op == 'div':
        if not b:
            raise ZeroDivisionError("division by zero in coefficient field")
        return a / b
    raise InputError(f"unknown field operation '{op}'")


def partial_derivative(presentation: FieldPresentation, elem: FieldElem,
                       symbol: Union[str, FieldElem]) -> FieldElem:
    """Formal partial derivative with respect to an internal generator."""
    return elem.diff(presentation.internal_generator(symbol))


def jacobian_rank(presentation: FieldPresentation, elems: Iterable[FieldElem]) -> int:
    """
    Rank of the Jacobian matrix of ``elems`` over the rational function field.

    Each row is cleared of denominators and the polynomial matrix is reduced
    by fraction-free (Bareiss) elimination; every division is exact.

    Args:
        presentation (FieldPresentation): Field the elements live in
        elems (Iterable[FieldElem]): Elements, one row each

    Returns:
        int: Rank, equal to the transcendence degree of Q(elems) over Q

    Examples:
        >>> F = FieldPresentation(['T2', 'T3'])
        >>> jacobian_rank(F, [F.parse('T2'), F.parse('T3'), F.parse('T2*T3')])
        2
    """
    gens = presentation.generators
    ring = presentation.field.ring
    rows = []
    for elem in elems:
        partials = [elem.diff(gen) for gen in gens]
        if not any(partials):
            continue
        common = ring.one
        for p in partials:
            common = common.lcm(p.denom)
        rows.append([p.numer * common.exquo(p.denom) for p in partials])

    matrix = rows
    nrows, ncols = len(matrix), len(gens)
    rank = 0
    previous = ring.one
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if matrix[r][col]), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        head = matrix[rank][col]
        for r in range(rank + 1, nrows):
            factor = matrix[r][col]
            for c in range(col + 1, ncols):
                matrix[r][c] = (head * matrix[r][c] - factor * matrix[rank][c]).exquo(previous)
            matrix[r][col] = ring.zero
        previous = head
        rank += 1

    logger.debug(f"Jacobian rank {rank} for {nrows} nonconstant rows")
    return rank
