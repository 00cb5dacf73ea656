"""
Result objects of the valuation algorithms and their JSON form.
"""

import logging
from typing import Dict, List, Optional, Sequence

from config.config import REPORT_SERIES_TERMS
from src.models.embedding import Embedding, FieldExpr
from src.models.field import FieldElem, FieldPresentation
from src.models.series import LazySeries, Value
from .transform import Trace

logger = logging.getLogger(__name__)

# Residue classification
ALGEBRAIC = 'algebraic'
TRANSCENDENTAL = 'transcendental'

# Chain terminals
TRANSCENDENTAL_FOUND = 'transcendental_found'
DIVISIBILITY_BROKEN = 'divisibility_broken'
DEPTH_EXHAUSTED = 'depth_exhausted'
PRECISION_EXHAUSTED = 'precision_exhausted'

# Order-function verdicts
VERDICT_YES = 'yes'
VERDICT_NO = 'no'
VERDICT_UNKNOWN = 'unknown'


class ResidueStep:
    """One residue of a chain: exponent of the pivot, residue, classification."""

    def __init__(self, exponent: int, residue: FieldElem, kind: str):
        self.exponent = exponent
        self.residue = residue
        self.kind = kind

    def __repr__(self) -> str:
        return f"ResidueStep({self.exponent}, {self.residue}, {self.kind})"

    def as_tuple(self, presentation: FieldPresentation):
        return (self.exponent, presentation.format(self.residue), self.kind)


class ResidueChain:
    """Residues of one variable against the pivot, with the reason the chain stopped."""

    def __init__(self, index: int, variable: str, steps: Sequence[ResidueStep], terminal: str,
                 detail: Optional[int] = None, presentation: Optional[FieldPresentation] = None):
        """
        Initialize the chain.

        Args:
            index (int): 1-based variable position
            variable (str): Variable name at that position
            steps (Sequence[ResidueStep]): Residues in increasing exponent order
            terminal (str): One of the chain terminal constants
            detail (int, optional): Broken value, exhausted depth or precision cap
            presentation (FieldPresentation, optional): Field for formatting
        """
        self.index = index
        self.variable = variable
        self.steps = list(steps)
        self.terminal = terminal
        self.detail = detail
        self.presentation = presentation
        self.origin: Optional[str] = None
        self.lift: Optional[FieldExpr] = None

    def __repr__(self) -> str:
        return f"ResidueChain({self.variable}, {self.steps}, {self.terminal})"

    @property
    def is_transcendental(self) -> bool:
        return self.terminal == TRANSCENDENTAL_FOUND

    def algebraic_prefix(self) -> List[ResidueStep]:
        return [step for step in self.steps if step.kind == ALGEBRAIC]

    def transcendental_step(self) -> Optional[ResidueStep]:
        if self.steps and self.steps[-1].kind == TRANSCENDENTAL:
            return self.steps[-1]
        return None

    def transcendental_residue(self) -> Optional[FieldElem]:
        step = self.transcendental_step()
        return step.residue if step is not None else None

    def terminal_dict(self) -> dict:
        terminal = {'kind': self.terminal}
        if self.terminal == DIVISIBILITY_BROKEN:
            terminal['value'] = self.detail
        elif self.terminal == DEPTH_EXHAUSTED:
            terminal['depth'] = self.detail
        elif self.terminal == PRECISION_EXHAUSTED:
            terminal['cap'] = self.detail
        return terminal

    def to_dict(self) -> dict:
        """Convert chain to dictionary format."""
        fmt = self.presentation.format
        result = {
            'variable': self.variable,
            'index': self.index,
            'steps': [
                {'exponent': step.exponent, 'residue': fmt(step.residue), 'kind': step.kind}
                for step in self.steps
            ],
            'terminal': self.terminal_dict(),
        }
        if self.origin is not None:
            result['origin'] = self.origin
        if self.lift is not None:
            result['lift'] = self.lift.format()
        return result


class ImplicitElement:
    """W_k = Y_k - sum u_{k,j} Y_1^{r_j}, truncated at the chain depth."""

    def __init__(self, name: str, chain: ResidueChain, expression: FieldExpr,
                 source_expression: FieldExpr, value: Sequence[int]):
        self.name = name
        self.chain = chain
        self.expression = expression
        self.source_expression = source_expression
        self.value = list(value)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'variable': self.chain.variable,
            'expression': self.expression.format(),
            'in_source_variables': self.source_expression.format(),
            'value': self.value,
            'depth': len(self.chain.steps),
        }


def series_terms(series: LazySeries, presentation: FieldPresentation, cap: int,
                 limit: int = REPORT_SERIES_TERMS) -> List[dict]:
    """The first ``limit`` nonzero terms of a series up to exponent ``cap``."""
    terms = []
    for e in range(series.lower_bound, cap + 1):
        c = series.coefficient(e)
        if c:
            terms.append({'e': e, 'c': presentation.format(c)})
            if len(terms) == limit:
                break
    return terms


def unit_certificate(unit_element: FieldExpr, unit_orders: Sequence[Value]) -> dict:
    """The value-1 element with the orders of its numerator and denominator images."""
    numerator_order, denominator_order = unit_orders
    return {
        'expression': unit_element.format(),
        'value': (numerator_order - denominator_order).to_json(),
        'numerator_order': numerator_order.to_json(),
        'denominator_order': denominator_order.to_json(),
    }


class AnalysisReport:
    """Everything the analysis found: trace, unit element, chains, dimension, verdict."""

    def __init__(self, source: Embedding, final: Embedding, trace: Trace, unit_element: FieldExpr,
                 unit_orders: Sequence[Value], chains: Dict[int, ResidueChain],
                 processing_order: Sequence[int], generators: Sequence[ResidueChain],
                 implicit_elements: Sequence[ImplicitElement], verdict: str,
                 diagnostics: Sequence[str]):
        self.source = source
        self.final = final
        self.trace = trace
        self.unit_element = unit_element
        self.unit_orders = list(unit_orders)
        self.chains = dict(chains)
        self.processing_order = list(processing_order)
        self.generators = list(generators)
        self.implicit_elements = list(implicit_elements)
        self.verdict = verdict
        self.diagnostics = list(diagnostics)

    @property
    def dimension(self) -> int:
        """Number of chains that ended in a transcendental residue."""
        return sum(1 for chain in self.chains.values() if chain.is_transcendental)

    @property
    def dimension_exact(self) -> bool:
        return all(
            chain.terminal in (TRANSCENDENTAL_FOUND, DIVISIBILITY_BROKEN)
            for chain in self.chains.values()
        )

    @property
    def presentation(self) -> FieldPresentation:
        return self.source.presentation

    def ordered_chains(self) -> List[ResidueChain]:
        return [self.chains[i] for i in self.processing_order]

    def field_tower(self) -> List[dict]:
        """Stages Q = Delta_1 < Delta_2 < ... in processing order."""
        fmt = self.presentation.format
        tower = [{'stage': 0, 'field': 'Q'}]
        for stage, chain in enumerate(self.ordered_chains(), start=1):
            transcendental = chain.transcendental_residue()
            tower.append({
                'stage': stage,
                'variable': chain.variable,
                'algebraic': [fmt(step.residue) for step in chain.algebraic_prefix()],
                'transcendental': fmt(transcendental) if transcendental is not None else None,
                'complete': chain.terminal in (TRANSCENDENTAL_FOUND, DIVISIBILITY_BROKEN),
            })
        return tower

    def to_dict(self) -> dict:
        """Convert report to dictionary format."""
        fmt = self.presentation.format
        targets = self.trace.target_variables
        return {
            'variables': list(self.source.variables),
            'values': dict(zip(self.source.variables, self.source.values())),
            'trace': self.trace.to_list(),
            'unit_element': unit_certificate(self.unit_element, self.unit_orders),
            'processing_order': [targets[i - 1] for i in self.processing_order],
            'chains': [chain.to_dict() for chain in self.ordered_chains()],
            'generators': {
                'transcendental': [
                    {
                        'variable': chain.variable,
                        'residue': fmt(chain.transcendental_residue()),
                        'lift': chain.lift.format() if chain.lift is not None else None,
                    }
                    for chain in self.generators
                ],
                'algebraic': {
                    chain.variable: [fmt(step.residue) for step in chain.algebraic_prefix()]
                    for chain in self.ordered_chains()
                },
            },
            'field_tower': self.field_tower(),
            'dimension': self.dimension,
            'dimension_exact': self.dimension_exact,
            'order_function': {
                'verdict': self.verdict,
                'variables': len(self.source.variables),
                'target': len(self.source.variables) - 1,
            },
            'final_values': dict(zip(targets, self.final.values())),
            'final_images': {
                name: series_terms(series, self.presentation, self.final.cap)
                for name, series in zip(targets, self.final.images)
            },
            'implicit_elements': [element.to_dict() for element in self.implicit_elements],
            'diagnostics': list(self.diagnostics),
        }


class OrderCheckReport:
    """Outcome of testing an embedding against the usual order function."""

    def __init__(self, passed: bool, degree: int, trials: int, seed: int, checked: int,
                 witness: Optional[FieldExpr] = None, witness_value: Optional[Value] = None,
                 expected: Optional[int] = None):
        self.passed = passed
        self.degree = degree
        self.trials = trials
        self.seed = seed
        self.checked = checked
        self.witness = witness
        self.witness_value = witness_value
        self.expected = expected

    def __repr__(self) -> str:
        status = 'pass' if self.passed else f'fail at {self.witness}'
        return f"OrderCheckReport({status}, checked={self.checked})"

    def to_dict(self) -> dict:
        """Convert result to dictionary format."""
        result = {
            'passed': self.passed,
            'degree': self.degree,
            'trials': self.trials,
            'seed': self.seed,
            'checked': self.checked,
        }
        if not self.passed:
            result['counterexample'] = {
                'expression': self.witness.format(),
                'value': self.witness_value.to_json(),
                'expected': self.expected,
            }
        return result
