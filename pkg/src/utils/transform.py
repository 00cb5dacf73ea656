"""
Transformation steps on embeddings and the trace that records them.

Three kinds of step are supported, all with 1-based indices:

- ``Monoidal(i, j)``: X_i = Y_i * Y_j, so psi_i becomes psi_i / psi_j
- ``Swap(i, j)``: exchange X_i and X_j
- ``CoordChange(i, b, m)``: X_i = Y_i + b * Y_1^m, so psi_i becomes psi_i - b * psi_1^m
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
from sympy import Symbol

from config.config import TARGET_VARIABLE_PREFIXES
from src.models.embedding import Embedding, FieldExpr
from src.models.errors import InputError, PrecisionError
from src.models.field import FieldElem, FieldPresentation
from src.models.series import LazySeries, divide

logger = logging.getLogger(__name__)


class TransformStep:
    """Base class of the three transformation steps."""

    kind = ''

    def validate(self, n: int):
        for index in self.indices():
            if not 1 <= index <= n:
                raise InputError(f"{self.describe()}: index {index} outside 1..{n}")

    def indices(self) -> Tuple[int, ...]:
        raise NotImplementedError

    def describe(self, presentation: Optional[FieldPresentation] = None) -> str:
        raise NotImplementedError

    def to_dict(self, presentation: FieldPresentation) -> dict:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.describe()

    @staticmethod
    def from_dict(data: dict, presentation: FieldPresentation) -> 'TransformStep':
        """
        Build a step from its trace JSON form.

        Raises:
            InputError: On unknown kinds or missing fields
        """
        try:
            kind = data['kind']
            if kind == 'monoidal':
                return Monoidal(int(data['i']), int(data['j']))
            if kind == 'swap':
                return Swap(int(data['i']), int(data['j']))
            if kind == 'coord':
                return CoordChange(int(data['i']), presentation.parse(str(data['b'])), int(data['m']))
        except KeyError as e:
            raise InputError(f"trace step {data} lacks field {e}") from e
        except (TypeError, ValueError) as e:
            raise InputError(f"malformed trace step {data}: {e}") from e
        raise InputError(f"unknown step kind '{kind}'")


class Monoidal(TransformStep):
    kind = 'monoidal'

    def __init__(self, i: int, j: int):
        if i == j:
            raise InputError(f"monoidal step needs i != j, got {i}")
        self.i = i
        self.j = j

    def indices(self):
        return (self.i, self.j)

    def __eq__(self, other):
        return isinstance(other, Monoidal) and (self.i, self.j) == (other.i, other.j)

    def describe(self, presentation=None) -> str:
        return f"Monoidal({self.i}, {self.j})"

    def to_dict(self, presentation) -> dict:
        return {'kind': self.kind, 'i': self.i, 'j': self.j}


class Swap(TransformStep):
    kind = 'swap'

    def __init__(self, i: int, j: int):
        if i == j:
            raise InputError(f"swap step needs i != j, got {i}")
        self.i = i
        self.j = j

    def indices(self):
        return (self.i, self.j)

    def __eq__(self, other):
        return isinstance(other, Swap) and {self.i, self.j} == {other.i, other.j}

    def describe(self, presentation=None) -> str:
        return f"Swap({self.i}, {self.j})"

    def to_dict(self, presentation) -> dict:
        return {'kind': self.kind, 'i': self.i, 'j': self.j}


class CoordChange(TransformStep):
    kind = 'coord'

    def __init__(self, i: int, b: FieldElem, m: int = 1):
        if i == 1:
            raise InputError("coordinate change cannot act on the pivot variable 1")
        if not b:
            raise InputError("coordinate change needs a nonzero coefficient")
        if m < 1:
            raise InputError(f"coordinate change needs m >= 1, got {m}")
        self.i = i
        self.b = b
        self.m = m

    def indices(self):
        return (self.i,)

    def __eq__(self, other):
        return isinstance(other, CoordChange) and (self.i, self.b, self.m) == (other.i, other.b, other.m)

    def describe(self, presentation=None) -> str:
        b = presentation.format(self.b) if presentation is not None else str(self.b)
        return f"CoordChange({self.i}, {b}, {self.m})"

    def to_dict(self, presentation) -> dict:
        return {'kind': self.kind, 'i': self.i, 'b': presentation.format(self.b), 'm': self.m}


class Trace:
    """Ordered transformation steps with the value vector after each step."""

    def __init__(self, source_variables: Sequence[str], presentation: FieldPresentation,
                 initial_values: Optional[Sequence[int]] = None):
        self.source_variables = tuple(source_variables)
        self.presentation = presentation
        self.initial_values = list(initial_values) if initial_values is not None else None
        self.steps: List[TransformStep] = []
        self.snapshots: List[List[int]] = []
        self.target_variables = tuple(target_names(self.source_variables, presentation))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(zip(self.steps, self.snapshots))

    def record(self, step: TransformStep, values: Sequence[int]):
        self.steps.append(step)
        self.snapshots.append(list(values))
        logger.debug(f"{step.describe(self.presentation)} -> values {list(values)}")

    def extend(self, other: 'Trace'):
        for step, values in other:
            self.record(step, values)

    def copy(self) -> 'Trace':
        duplicate = Trace(self.source_variables, self.presentation, self.initial_values)
        duplicate.extend(self)
        return duplicate

    @property
    def final_values(self) -> Optional[List[int]]:
        if self.snapshots:
            return list(self.snapshots[-1])
        return self.initial_values

    def origin(self, k: int) -> int:
        """Original variable position that final position k descends from."""
        for step in reversed(self.steps):
            if isinstance(step, Swap):
                if k == step.i:
                    k = step.j
                elif k == step.j:
                    k = step.i
        return k

    def to_list(self) -> List[dict]:
        """Trace JSON: one object per step with its ``values_after``."""
        result = []
        for step, values in self:
            entry = step.to_dict(self.presentation)
            entry['values_after'] = list(values)
            result.append(entry)
        return result

    @classmethod
    def from_list(cls, data: Iterable[dict], source_variables: Sequence[str],
                  presentation: FieldPresentation) -> 'Trace':
        trace = cls(source_variables, presentation)
        for entry in data:
            step = TransformStep.from_dict(entry, presentation)
            step.validate(len(trace.source_variables))
            trace.record(step, entry.get('values_after', []))
        return trace


def target_names(source_variables: Sequence[str], presentation: FieldPresentation) -> List[str]:
    """
    Names of the transformed variables: ``Y1..Yn`` unless that collides.

    Raises:
        InputError: If every candidate prefix collides
    """
    taken = set(source_variables) | set(presentation.symbols)
    n = len(source_variables)
    for prefix in TARGET_VARIABLE_PREFIXES:
        names = [f"{prefix}{k}" for k in range(1, n + 1)]
        if not taken.intersection(names):
            return names
    raise InputError(f"no free prefix among '{TARGET_VARIABLE_PREFIXES}' for transformed variables")


def apply_step(emb: Embedding, step: TransformStep) -> Embedding:
    """
    Apply one transformation step to an embedding.

    Args:
        emb (Embedding): Current embedding
        step (TransformStep): Step to apply

    Returns:
        Embedding: Transformed embedding; untouched images are shared

    Raises:
        InputError: On out-of-range indices or a monoidal step that would
            leave a variable of value <= 0
        PrecisionError: If a coordinate change leaves no nonzero coefficient
            within the precision cap
    """
    step.validate(emb.n)
    if isinstance(step, Swap):
        images = list(emb.images)
        values = emb.values()
        a, b = step.i - 1, step.j - 1
        images[a], images[b] = images[b], images[a]
        values[a], values[b] = values[b], values[a]
        return emb.with_images(images, values)

    if isinstance(step, Monoidal):
        vi, vj = emb.value_of(step.i), emb.value_of(step.j)
        if vi <= vj:
            raise InputError(
                f"{step.describe()} needs v(X{step.i}) > v(X{step.j}), got {vi} and {vj}"
            )
        quotient = divide(emb.image(step.i), emb.image(step.j), emb.cap)
        images = list(emb.images)
        values = emb.values()
        images[step.i - 1] = quotient
        values[step.i - 1] = vi - vj
        return emb.with_images(images, values)

    if isinstance(step, CoordChange):
        pivot_power = emb.power(1, step.m)
        changed = emb.image(step.i) - pivot_power.scale(step.b)
        value = changed.order(emb.cap)
        if not value.is_finite:
            raise PrecisionError(
                f"{step.describe(emb.presentation)}: no nonzero coefficient up to precision {emb.cap}",
                cap=emb.cap,
            )
        images = list(emb.images)
        values = emb.values()
        images[step.i - 1] = changed
        values[step.i - 1] = value.order
        return emb.with_images(images, values)

    raise InputError(f"unknown transformation step {step!r}")


def apply_and_record(emb: Embedding, trace: Trace, step: TransformStep) -> Embedding:
    """Apply a step and append it with its value snapshot."""
    emb = apply_step(emb, step)
    trace.record(step, emb.values())
    return emb


def replay(emb: Embedding, trace: Trace) -> Embedding:
    """
    Re-apply every step of a trace, checking each recorded value snapshot.

    Raises:
        InputError: If a recorded snapshot disagrees with the replay
    """
    for number, (step, values) in enumerate(trace, start=1):
        emb = apply_step(emb, step)
        if values and list(values) != emb.values():
            raise InputError(
                f"replay mismatch at step {number} ({step.describe(trace.presentation)}): "
                f"recorded {list(values)}, got {emb.values()}"
            )
    return emb


def express_new_in_old(trace: Trace) -> List[FieldExpr]:
    """
    Each final variable Y_k as a rational function of the source variables.

    Examples:
        [Monoidal(2, 1)] gives Y2 = X2/X1; appending CoordChange(2, T2, 1)
        gives Y2 = (X2 - T2*X1^2)/X1.
    """
    presentation = trace.presentation
    current = [Symbol(name) for name in trace.source_variables]
    for step in trace.steps:
        if isinstance(step, Swap):
            a, b = step.i - 1, step.j - 1
            current[a], current[b] = current[b], current[a]
        elif isinstance(step, Monoidal):
            current[step.i - 1] = sympy.cancel(current[step.i - 1] / current[step.j - 1])
        elif isinstance(step, CoordChange):
            b = presentation.to_expr(step.b)
            current[step.i - 1] = sympy.cancel(current[step.i - 1] - b * current[0] ** step.m)
    return [FieldExpr(expr, trace.source_variables, presentation) for expr in current]


def pullback(trace: Trace, f: FieldExpr) -> FieldExpr:
    """
    Rewrite an expression in the final variables over the source variables.

    Args:
        trace (Trace): Transformation trace
        f (FieldExpr): Expression over ``trace.target_variables``

    Returns:
        FieldExpr: Equal element of the field over the source variables
    """
    substitution = {
        Symbol(name): image.expr
        for name, image in zip(trace.target_variables, express_new_in_old(trace))
    }
    expr = sympy.cancel(f.expr.xreplace(substitution))
    return FieldExpr(expr, trace.source_variables, trace.presentation)
