"""
Lazy univariate power series in t over the coefficient field.

A series is either explicit (finitely many terms plus closed-form tails) or a
derived node over other series. Coefficients are computed on demand and
memoized, so a series behaves as an immutable value.
"""

import logging
import sys
from typing import Dict, Iterable, List, Optional, Tuple

from config.config import DEFAULT_PRECISION, RECURSION_LIMIT
from .errors import InputError, PrecisionError
from .field import CoeffRule, FieldElem, FieldPresentation, power

logger = logging.getLogger(__name__)

if sys.getrecursionlimit() < RECURSION_LIMIT:
    sys.setrecursionlimit(RECURSION_LIMIT)


class Value:
    """Outcome of an order search: finite, infinite or precision exhausted."""

    FINITE = 'finite'
    INFINITE = 'infinite'
    EXHAUSTED = 'precision_exhausted'

    __slots__ = ('kind', 'order', 'cap')

    def __init__(self, kind: str, order: Optional[int] = None, cap: Optional[int] = None):
        self.kind = kind
        self.order = order
        self.cap = cap

    @classmethod
    def finite(cls, order: int) -> 'Value':
        return cls(cls.FINITE, order=int(order))

    @classmethod
    def infinite(cls) -> 'Value':
        return cls(cls.INFINITE)

    @classmethod
    def exhausted(cls, cap: int) -> 'Value':
        return cls(cls.EXHAUSTED, cap=int(cap))

    @property
    def is_finite(self) -> bool:
        return self.kind == self.FINITE

    @property
    def is_infinite(self) -> bool:
        return self.kind == self.INFINITE

    @property
    def is_exhausted(self) -> bool:
        return self.kind == self.EXHAUSTED

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            return self.is_finite and self.order == other
        if not isinstance(other, Value):
            return NotImplemented
        return (self.kind, self.order, self.cap) == (other.kind, other.order, other.cap)

    def __hash__(self) -> int:
        # finite values compare equal to their int
        if self.is_finite:
            return hash(self.order)
        return hash((self.kind, self.order, self.cap))

    def __sub__(self, other: 'Value') -> 'Value':
        """Value of a quotient g/h from the values of g and h."""
        if self.is_exhausted or other.is_exhausted:
            return self if self.is_exhausted else other
        if other.is_infinite:
            raise ZeroDivisionError("value of a quotient by zero")
        if self.is_infinite:
            return self
        return Value.finite(self.order - other.order)

    def __repr__(self) -> str:
        if self.is_finite:
            return f"Finite({self.order})"
        if self.is_infinite:
            return "Infinite"
        return f"PrecisionExhausted({self.cap})"

    def __str__(self) -> str:
        if self.is_finite:
            return str(self.order)
        if self.is_infinite:
            return "infinite"
        return f"precision exhausted (cap {self.cap})"

    def to_json(self):
        """JSON form: an integer, ``"infinite"`` or ``{"precision_exhausted": cap}``."""
        if self.is_finite:
            return self.order
        if self.is_infinite:
            return "infinite"
        return {"precision_exhausted": self.cap}


class Tail:
    """Closed-form tail: coefficient c(j) at exponent a*j + b for j >= start."""

    def __init__(self, rule: CoeffRule, a: int, b: int, start: Optional[int] = None):
        if a < 1:
            raise InputError(f"tail exponent rule needs a >= 1, got a={a}")
        self.rule = rule
        self.a = int(a)
        self.b = int(b)
        self.start = rule.start if start is None else int(start)
        if self.a * self.start + self.b < 0:
            raise InputError(f"tail starts at negative exponent {self.a * self.start + self.b}")

    def __repr__(self) -> str:
        return f"Tail({self.rule.text}, exp={self.a}*j+{self.b}, from={self.start})"

    @property
    def first_exponent(self) -> int:
        return self.a * self.start + self.b

    def coefficient(self, exponent: int) -> Optional[FieldElem]:
        shifted = exponent - self.b
        if shifted % self.a:
            return None
        j = shifted // self.a
        if j < self.start:
            return None
        return self.rule.evaluate(j)


class LazySeries:
    """
    A power series sum_e c_e t^e with lazily computed, memoized coefficients.

    Attributes:
        presentation (FieldPresentation): Coefficient field
        lower_bound (int): Every coefficient below it vanishes
        degree_bound (Optional[int]): Every coefficient above it vanishes, when known
    """

    def __init__(self, presentation: FieldPresentation,
                 terms: Optional[Dict[int, FieldElem]] = None,
                 tails: Iterable[Tail] = (),
                 node: Optional[tuple] = None,
                 lower_bound: Optional[int] = None,
                 degree_bound: Optional[int] = None):
        self.presentation = presentation
        self._terms = {int(e): c for e, c in (terms or {}).items() if c}
        self._tails = list(tails)
        self._node = node
        self._memo: Dict[int, FieldElem] = {}
        self._orders: Dict[int, 'Value'] = {}

        for e in self._terms:
            if e < 0:
                raise InputError(f"negative exponent {e} in power series")

        if node is None:
            starts = list(self._terms) + [tail.first_exponent for tail in self._tails]
            self.lower_bound = min(starts) if starts else 0
            self.degree_bound = max(self._terms, default=0) if not self._tails else None
        else:
            self.lower_bound = lower_bound if lower_bound is not None else 0
            self.degree_bound = degree_bound

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, presentation: FieldPresentation) -> 'LazySeries':
        """The syntactic zero series."""
        return cls(presentation)

    @classmethod
    def constant(cls, presentation: FieldPresentation, value: FieldElem) -> 'LazySeries':
        return cls(presentation, terms={0: value})

    @classmethod
    def monomial(cls, presentation: FieldPresentation, value: FieldElem, exponent: int) -> 'LazySeries':
        return cls(presentation, terms={exponent: value})

    @classmethod
    def from_terms(cls, presentation: FieldPresentation, terms: Dict[int, FieldElem],
                   tails: Iterable[Tail] = ()) -> 'LazySeries':
        return cls(presentation, terms=terms, tails=tails)

    @property
    def is_zero(self) -> bool:
        """True only for the syntactic zero; a zero result of arithmetic is not detected."""
        return self._node is None and not self._terms and not self._tails

    def __repr__(self) -> str:
        if self._node is not None:
            return f"LazySeries(<{self._node[0]}>, lower={self.lower_bound})"
        return f"LazySeries(terms={len(self._terms)}, tails={self._tails})"

    # ------------------------------------------------------------------
    # coefficients
    # ------------------------------------------------------------------

    def coefficient(self, exponent: int) -> FieldElem:
        """
        Coefficient of t^exponent.

        Args:
            exponent (int): Exponent of t

        Returns:
            FieldElem: Exact coefficient (zero below the lower bound)
        """
        if exponent < self.lower_bound:
            return self.presentation.zero
        if self.degree_bound is not None and exponent > self.degree_bound:
            return self.presentation.zero
        if exponent in self._memo:
            return self._memo[exponent]

        if self._node is None:
            value = self._terms.get(exponent, self.presentation.zero)
            for tail in self._tails:
                c = tail.coefficient(exponent)
                if c is not None:
                    value = value + c
        elif self._node[0] == 'quotient':
            self._fill_quotient(exponent)
            return self._memo[exponent]
        else:
            value = self._derived_coefficient(exponent)

        self._memo[exponent] = value
        return value

    def _derived_coefficient(self, e: int) -> FieldElem:
        kind = self._node[0]
        if kind == 'add':
            _, a, b = self._node
            return a.coefficient(e) + b.coefficient(e)
        if kind == 'sub':
            _, a, b = self._node
            return a.coefficient(e) - b.coefficient(e)
        if kind == 'neg':
            return -self._node[1].coefficient(e)
        if kind == 'scale':
            _, c, a = self._node
            return c * a.coefficient(e)
        if kind == 'shift':
            _, k, a = self._node
            return a.coefficient(e - k)
        if kind == 'mul':
            _, a, b = self._node
            low = a.lower_bound
            high = e - b.lower_bound
            if a.degree_bound is not None:
                high = min(high, a.degree_bound)
            if b.degree_bound is not None:
                low = max(low, e - b.degree_bound)
            total = self.presentation.zero
            for i in range(low, high + 1):
                left = a.coefficient(i)
                if left:
                    right = b.coefficient(e - i)
                    if right:
                        total = total + left * right
            return total
        raise ValueError(f"unknown series node '{kind}'")

    def _fill_quotient(self, e: int):
        # q_k = (a_{beta+k} - sum_{i=1..k} b_{beta+i} q_{k-i}) / b_beta
        _, a, b, beta, inverse = self._node
        zero = self.presentation.zero
        k = max(self.lower_bound, max(self._memo, default=self.lower_bound - 1) + 1)
        while k <= e:
            total = a.coefficient(beta + k)
            top = k - self.lower_bound
            if b.degree_bound is not None:
                top = min(top, b.degree_bound - beta)
            for i in range(1, top + 1):
                bi = b.coefficient(beta + i)
                if bi:
                    qk = self._memo[k - i]
                    if qk:
                        total = total - bi * qk
            self._memo[k] = total * inverse if total else zero
            k += 1

    def truncate(self, exponent: int) -> List[FieldElem]:
        """Coefficients of t^0 .. t^exponent."""
        return [self.coefficient(e) for e in range(exponent + 1)]

    # ------------------------------------------------------------------
    # order
    # ------------------------------------------------------------------

    def order(self, cap: int = DEFAULT_PRECISION) -> Value:
        """
        Least exponent with a nonzero coefficient, searched up to ``cap``.

        Returns:
            Value: Finite(e), Infinite for the syntactic zero, or
            PrecisionExhausted(cap) when nothing nonzero shows up
        """
        if self.is_zero:
            return Value.infinite()
        if cap in self._orders:
            return self._orders[cap]
        result = Value.exhausted(cap)
        top = cap if self.degree_bound is None else min(cap, self.degree_bound)
        for e in range(self.lower_bound, top + 1):
            if self.coefficient(e):
                result = Value.finite(e)
                break
        self._orders[cap] = result
        return result

    def leading(self, cap: int = DEFAULT_PRECISION) -> Tuple[Value, Optional[FieldElem]]:
        """Order and leading coefficient (None unless the order is finite)."""
        value = self.order(cap)
        if value.is_finite:
            return value, self.coefficient(value.order)
        return value, None

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def __add__(self, other: 'LazySeries') -> 'LazySeries':
        return combine(self, other, 'add')

    def __sub__(self, other: 'LazySeries') -> 'LazySeries':
        return combine(self, other, 'sub')

    def __mul__(self, other: 'LazySeries') -> 'LazySeries':
        return combine(self, other, 'mul')

    def __neg__(self) -> 'LazySeries':
        if self.is_zero:
            return self
        return LazySeries(self.presentation, node=('neg', self),
                          lower_bound=self.lower_bound, degree_bound=self.degree_bound)

    def scale(self, value: FieldElem) -> 'LazySeries':
        """Multiply by a field constant."""
        if self.is_zero or not value:
            return LazySeries.zero(self.presentation)
        if value == self.presentation.one:
            return self
        return LazySeries(self.presentation, node=('scale', value, self),
                          lower_bound=self.lower_bound, degree_bound=self.degree_bound)

    def shift(self, k: int) -> 'LazySeries':
        """Multiply by t^k (k may be negative when the low coefficients vanish)."""
        if self.is_zero or k == 0:
            return self
        if self.lower_bound + k < 0:
            raise InputError(f"shift by {k} leaves negative exponents")
        degree = None if self.degree_bound is None else self.degree_bound + k
        return LazySeries(self.presentation, node=('shift', k, self),
                          lower_bound=self.lower_bound + k, degree_bound=degree)


def coefficient(series: LazySeries, exponent: int) -> FieldElem:
    """Coefficient of t^exponent; see :meth:`LazySeries.coefficient`."""
    return series.coefficient(exponent)


def order(series: LazySeries, cap: int = DEFAULT_PRECISION) -> Value:
    """Order of a series up to ``cap``; see :meth:`LazySeries.order`."""
    return series.order(cap)


def combine(a: LazySeries, b: LazySeries, op: str) -> LazySeries:
    """
    Sum, difference or product of two series as a derived node.

    Args:
        a (LazySeries): Left operand
        b (LazySeries): Right operand
        op (str): One of 'add', 'sub', 'mul'

    Returns:
        LazySeries: Derived series; syntactic zeros are absorbed
    """
    presentation = a.presentation
    if op == 'mul':
        if a.is_zero or b.is_zero:
            return LazySeries.zero(presentation)
        degree = None
        if a.degree_bound is not None and b.degree_bound is not None:
            degree = a.degree_bound + b.degree_bound
        return LazySeries(presentation, node=('mul', a, b),
                          lower_bound=a.lower_bound + b.lower_bound, degree_bound=degree)
    if op not in ('add', 'sub'):
        raise InputError(f"unknown series operation '{op}'")
    if b.is_zero:
        return a
    if a.is_zero:
        return b if op == 'add' else -b
    degree = None
    if a.degree_bound is not None and b.degree_bound is not None:
        degree = max(a.degree_bound, b.degree_bound)
    return LazySeries(presentation, node=(op, a, b),
                      lower_bound=min(a.lower_bound, b.lower_bound), degree_bound=degree)


def divide(a: LazySeries, b: LazySeries, cap: int = DEFAULT_PRECISION) -> LazySeries:
    """
    Quotient q with a = b*q, computed by the ascending division recurrence.

    Args:
        a (LazySeries): Dividend
        b (LazySeries): Divisor
        cap (int): Precision cap for the orders of a and b

    Returns:
        LazySeries: Quotient with lower bound ord(a) - ord(b)

    Raises:
        PrecisionError: If the order of b is not established within cap
        InputError: If ord(a) < ord(b), so the quotient is not a power series

    Examples:
        >>> F = FieldPresentation(['T2'])
        >>> a = LazySeries.from_terms(F, {4: F.parse('T2'), 6: F.parse('T2')})
        >>> q = divide(a, LazySeries.monomial(F, F.one, 2))
        >>> [F.format(c) for c in q.truncate(4)]
        ['0', '0', 'T2', '0', 'T2']
    """
    beta = b.order(cap)
    if not beta.is_finite:
        raise PrecisionError(f"divisor order not established within precision {cap}", cap=cap)
    if a.is_zero:
        return a
    alpha = a.order(cap)
    if alpha.is_finite and alpha.order < beta.order:
        raise InputError(
            f"quotient is not a power series: dividend order {alpha.order} "
            f"< divisor order {beta.order}"
        )
    lower = alpha.order - beta.order if alpha.is_finite else max(0, cap - beta.order)
    inverse = power(b.coefficient(beta.order), -1)
    return LazySeries(a.presentation, node=('quotient', a, b, beta.order, inverse),
                      lower_bound=lower)


def integer_power(a: LazySeries, m: int) -> LazySeries:
    """a^m for m >= 1 by binary powering."""
    if m < 1:
        raise InputError(f"series power needs m >= 1, got {m}")
    result = None
    base = a
    while m:
        if m & 1:
            result = base if result is None else result * base
        m >>= 1
        if m:
            base = base * base
    return result
