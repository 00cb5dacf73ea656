"""
Valuation algorithms: equalization, the value-1 element, residue chains,
the dimension analysis and the order-function check.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy import Rational, Symbol
from tqdm import tqdm

from config.config import (
    DEFAULT_DEPTH,
    DEFAULT_ITERATIONS,
    DEFAULT_SEED,
    IMPLICIT_ELEMENT_PREFIX,
    ORDER_CHECK_DEGREE,
    ORDER_CHECK_MAX_DENOMINATOR,
    ORDER_CHECK_MAX_NUMERATOR,
    ORDER_CHECK_MAX_TERMS,
    ORDER_CHECK_TRIALS,
)
from src.models.embedding import Embedding, FieldExpr, value, value_orders
from src.models.errors import IterationLimitError, PrecisionError, ValuationError
from src.models.field import FieldElem, FieldPresentation, jacobian_rank, power
from .report import (
    ALGEBRAIC,
    DEPTH_EXHAUSTED,
    DIVISIBILITY_BROKEN,
    PRECISION_EXHAUSTED,
    TRANSCENDENTAL,
    TRANSCENDENTAL_FOUND,
    VERDICT_NO,
    VERDICT_UNKNOWN,
    VERDICT_YES,
    AnalysisReport,
    ImplicitElement,
    OrderCheckReport,
    ResidueChain,
    ResidueStep,
)
from .transform import CoordChange, Monoidal, Swap, Trace, apply_and_record, pullback

logger = logging.getLogger(__name__)


def equalize_values(emb: Embedding, trace: Optional[Trace] = None) -> Tuple[Embedding, Trace]:
    """
    Drive every value to the gcd of the values with monoidal steps and swaps.

    The minimum-value variable (lowest index on ties) is swapped to position 1
    and every other variable is divided by it while its value stays above the
    pivot's, until all values agree.

    Args:
        emb (Embedding): Embedding to equalize
        trace (Trace, optional): Trace to append to

    Returns:
        Tuple[Embedding, Trace]: Equalized embedding and the trace

    Examples:
        Values (2, 3) give Monoidal(2, 1), Swap(1, 2), Monoidal(2, 1) and values (1, 1).
    """
    if trace is None:
        trace = Trace(emb.variables, emb.presentation, emb.values())
    while True:
        values = emb.values()
        pivot = values.index(min(values)) + 1
        if pivot != 1:
            emb = apply_and_record(emb, trace, Swap(1, pivot))
        alpha = emb.value_of(1)
        for i in range(2, emb.n + 1):
            while emb.value_of(i) > alpha:
                emb = apply_and_record(emb, trace, Monoidal(i, 1))
        if all(v == alpha for v in emb.values()):
            logger.info(f"Values equalized at {alpha} after {len(trace)} steps")
            return emb, trace


def unit_value_element(emb: Embedding, iterations: int = DEFAULT_ITERATIONS,
                       trace: Optional[Trace] = None,
                       source: Optional[Embedding] = None) -> Tuple[Embedding, Trace, FieldExpr]:
    """
    Transform the embedding until every variable has value 1.

    Alternates equalization with coordinate changes Y_i <- Y_i - b_i Y_1,
    b_i = lc(psi_i) / lc(psi_1), which raise every value but the pivot's.

    Args:
        emb (Embedding): Starting embedding
        iterations (int): Maximal number of equalize/change rounds
        trace (Trace, optional): Trace to append to
        source (Embedding, optional): Embedding the trace starts from, ``emb``
            when no trace is given

    Returns:
        Tuple[Embedding, Trace, FieldExpr]: Final embedding, trace, and the
        pullback of Y_1, an element of value 1 under the source embedding

    Raises:
        IterationLimitError: If the common value stays above 1
        PrecisionError: If a coordinate change exhausts the precision cap
    """
    source = source or emb
    for _ in range(iterations):
        emb, trace = equalize_values(emb, trace)
        alpha = emb.value_of(1)
        if alpha == 1:
            break
        logger.info(f"Common value {alpha} > 1, changing coordinates against the pivot")
        pivot_lead = emb.image(1).coefficient(alpha)
        for i in range(2, emb.n + 1):
            b = emb.image(i).coefficient(alpha) / pivot_lead
            emb = apply_and_record(emb, trace, CoordChange(i, b, 1))
    else:
        raise IterationLimitError(emb.value_of(1), iterations)

    unit = pullback(trace, FieldExpr.variable(trace.target_variables[0], trace.target_variables,
                                             emb.presentation))
    certificate = value(source, unit)
    if certificate != 1:
        raise ValuationError(f"value-1 certificate failed: v({unit}) = {certificate}")
    logger.info(f"Element of value 1: {unit}")
    return emb, trace, unit


def transcendence_test(presentation: FieldPresentation, generators: Sequence[FieldElem],
                       candidate: FieldElem, base_rank: Optional[int] = None) -> str:
    """
    Classify ``candidate`` over Q(generators) by the Jacobian criterion.

    Returns:
        str: TRANSCENDENTAL if adjoining the candidate raises the Jacobian rank,
        ALGEBRAIC otherwise
    """
    if base_rank is None:
        base_rank = jacobian_rank(presentation, generators)
    extended = jacobian_rank(presentation, list(generators) + [candidate])
    return TRANSCENDENTAL if extended > base_rank else ALGEBRAIC


def extract_residue_chain(emb: Embedding, i: int, known_generators: Sequence[FieldElem],
                          depth: int = DEFAULT_DEPTH,
                          localize_precision: bool = False) -> ResidueChain:
    """
    Residues of variable i against the pivot variable 1.

    At each step the residue b = lc(psi_i) / lc(psi_1)^r at value r * v(psi_1)
    is classified; an algebraic residue is subtracted as b * psi_1^r and the
    chain continues, a transcendental one ends it.

    Args:
        emb (Embedding): Embedding with pivot at position 1
        i (int): 1-based position of the variable, at least 2
        known_generators (Sequence[FieldElem]): Transcendental residues found so far
        depth (int): Maximal number of residues
        localize_precision (bool): End the chain with a precision terminal
            instead of raising

    Returns:
        ResidueChain: Residues and the terminal that stopped the chain

    Raises:
        PrecisionError: If an order is not established and not localized
    """
    presentation = emb.presentation
    name = emb.variables[i - 1]
    alpha = emb.value_of(1)
    pivot_lead = emb.image(1).coefficient(alpha)
    base_rank = jacobian_rank(presentation, known_generators)

    current = emb.image(i)
    steps: List[ResidueStep] = []

    def chain(terminal: str, detail: Optional[int] = None) -> ResidueChain:
        logger.info(f"Chain of {name}: {len(steps)} residues, {terminal}")
        return ResidueChain(i, name, steps, terminal, detail, presentation)

    for _ in range(depth):
        v = current.order(emb.cap)
        if not v.is_finite:
            if localize_precision:
                return chain(PRECISION_EXHAUSTED, emb.cap)
            raise PrecisionError(
                f"order of {name} after {len(steps)} residues not established within "
                f"precision {emb.cap}",
                cap=emb.cap,
            )
        if v.order % alpha:
            return chain(DIVISIBILITY_BROKEN, v.order)
        r = v.order // alpha
        residue = current.coefficient(v.order) / power(pivot_lead, r)
        kind = transcendence_test(presentation, known_generators, residue, base_rank)
        steps.append(ResidueStep(r, residue, kind))
        logger.debug(f"{name}: residue {presentation.format(residue)} at exponent {r} is {kind}")
        if kind == TRANSCENDENTAL:
            return chain(TRANSCENDENTAL_FOUND)
        current = current - emb.power(1, r).scale(residue)

    return chain(DEPTH_EXHAUSTED, depth)


def _subtracted(chain: ResidueChain, trace: Trace, presentation: FieldPresentation) -> sympy.Expr:
    """Y_i - sum of the algebraic residues times pivot powers, in target variables."""
    pivot = Symbol(trace.target_variables[0])
    expr = Symbol(trace.target_variables[chain.index - 1])
    for step in chain.algebraic_prefix():
        expr = expr - presentation.to_expr(step.residue) * pivot ** step.exponent
    return expr


def residue_lift(trace: Trace, chain: ResidueChain) -> FieldExpr:
    """
    An element over the source variables whose residue is the chain's
    transcendental residue: (Y_i - sum b Y_1^r) / Y_1^{r_T}, pulled back.
    """
    step = chain.transcendental_step()
    if step is None:
        raise ValuationError(f"chain of {chain.variable} has no transcendental residue")
    pivot = Symbol(trace.target_variables[0])
    expr = _subtracted(chain, trace, chain.presentation) / pivot ** step.exponent
    return pullback(trace, FieldExpr(expr, trace.target_variables, chain.presentation))


class ResiduePhase:
    """Chains, generators and embedding of one pass over the non-pivot variables."""

    def __init__(self, emb: Embedding, trace: Trace):
        self.emb = emb
        self.trace = trace
        self.chains: Dict[int, ResidueChain] = {}
        self.processing_order: List[int] = []
        self.generators: List[ResidueChain] = []
        self.broken: Optional[ResidueChain] = None
        self.diagnostics: List[str] = []

    @property
    def generator_residues(self) -> List[FieldElem]:
        return [chain.transcendental_residue() for chain in self.generators]

    def record(self, chain: ResidueChain):
        chain.origin = self.trace.source_variables[self.trace.origin(chain.index) - 1]
        chain.variable = self.trace.target_variables[chain.index - 1]
        self.chains[chain.index] = chain
        self.processing_order.append(chain.index)

    def adjoin(self, chain: ResidueChain):
        """Make the transcendental residue the residue of Y_i / Y_1."""
        chain.lift = residue_lift(self.trace, chain)
        i = chain.index
        for step in chain.algebraic_prefix():
            self.emb = apply_and_record(self.emb, self.trace, CoordChange(i, step.residue, step.exponent))
        for _ in range(chain.transcendental_step().exponent - 1):
            self.emb = apply_and_record(self.emb, self.trace, Monoidal(i, 1))
        self.generators.append(chain)


def _residue_pass(emb: Embedding, trace: Trace, depth: int) -> ResiduePhase:
    phase = ResiduePhase(emb, trace)
    n = emb.n

    # first transcendental pair (1, i), searched over Q
    pair = None
    search: Dict[int, ResidueChain] = {}
    for i in range(2, n + 1):
        chain = extract_residue_chain(phase.emb, i, [], depth, localize_precision=True)
        search[i] = chain
        if chain.terminal == DIVISIBILITY_BROKEN:
            phase.broken = chain
            return phase
        if chain.is_transcendental:
            pair = i
            break

    if pair is not None:
        phase.record(search[pair])
        phase.adjoin(search[pair])

    for i in range(2, n + 1):
        if i == pair:
            continue
        if not phase.generators and i in search:
            chain = search[i]
        else:
            chain = extract_residue_chain(phase.emb, i, phase.generator_residues, depth,
                                          localize_precision=True)
        if chain.terminal == DIVISIBILITY_BROKEN:
            phase.broken = chain
            return phase
        phase.record(chain)
        if chain.is_transcendental:
            phase.adjoin(chain)
    return phase


def residue_phase(emb: Embedding, depth: int = DEFAULT_DEPTH, iterations: int = DEFAULT_ITERATIONS,
                  trace: Optional[Trace] = None, source: Optional[Embedding] = None) -> ResiduePhase:
    """
    Residue chains of every non-pivot variable against the pivot.

    A chain whose value is not a multiple of the pivot value applies its
    algebraic prefix, re-runs the value-1 construction and restarts the pass.
    After ``unit_value_element`` the pivot value is 1 and no restart happens.

    Args:
        emb (Embedding): Embedding with its pivot at position 1
        depth (int): Residue-chain depth
        iterations (int): Cap on restarts and on each value-1 construction
        trace (Trace, optional): Trace that produced ``emb``, appended to
        source (Embedding, optional): Embedding the trace starts from

    Returns:
        ResiduePhase: The completed pass; restarts are listed in ``diagnostics``

    Raises:
        IterationLimitError: If the restarts do not settle within ``iterations``
    """
    source = source or emb
    if trace is None:
        trace = Trace(emb.variables, emb.presentation, emb.values())
    current = emb
    diagnostics: List[str] = []
    for _ in range(iterations):
        phase = _residue_pass(current, trace, depth)
        if phase.broken is None:
            phase.diagnostics = diagnostics
            return phase
        chain = phase.broken
        message = (
            f"{trace.target_variables[chain.index - 1]}: value {chain.detail} is not a "
            f"multiple of the pivot value {phase.emb.value_of(1)}, restarting the value-1 construction"
        )
        logger.warning(message)
        diagnostics.append(message)
        current = phase.emb
        for step in chain.algebraic_prefix():
            current = apply_and_record(current, trace, CoordChange(chain.index, step.residue, step.exponent))
        current, trace, _ = unit_value_element(current, iterations, trace=trace, source=source)
    raise IterationLimitError(current.value_of(1), iterations)


def analyze(emb: Embedding, depth: int = DEFAULT_DEPTH,
            iterations: int = DEFAULT_ITERATIONS) -> AnalysisReport:
    """
    Full analysis: value-1 element, residue chains, residue field, verdict.

    Variables are processed in index order after the first transcendental
    pair. A chain whose value is not a multiple of the pivot value restarts
    the value-1 construction; a chain of algebraic residues that reaches the
    depth leaves its variable untransformed and yields an implicit element.

    Args:
        emb (Embedding): Embedding to analyze
        depth (int): Residue-chain depth
        iterations (int): Iteration cap of the value-1 construction

    Returns:
        AnalysisReport: Trace, chains, dimension and order-function verdict

    Raises:
        IterationLimitError: If the value group is not Z
        PrecisionError: If the value-1 construction exhausts the precision cap
    """
    source = emb
    current, trace, unit = unit_value_element(emb, iterations)
    unit_orders = value_orders(source, unit)
    phase = residue_phase(current, depth, iterations, trace=trace, source=source)
    diagnostics = list(phase.diagnostics)

    final = phase.emb
    presentation = source.presentation
    targets = trace.target_variables

    exhausted = [phase.chains[i] for i in phase.processing_order
                 if phase.chains[i].terminal == DEPTH_EXHAUSTED]
    length = len(exhausted) + 1
    implicit_elements = []
    for q, chain in enumerate(exhausted, start=1):
        expression = FieldExpr(_subtracted(chain, trace, presentation), targets, presentation)
        tuple_value = [0] * length
        tuple_value[length - 1 - q] = 1
        implicit_elements.append(ImplicitElement(
            f"{IMPLICIT_ELEMENT_PREFIX}{chain.index}", chain, expression,
            pullback(trace, expression), tuple_value,
        ))
        logger.info(f"Implicit element {IMPLICIT_ELEMENT_PREFIX}{chain.index} = {expression}")

    for i in phase.processing_order:
        chain = phase.chains[i]
        if chain.terminal == PRECISION_EXHAUSTED:
            message = f"{chain.variable}: order not established within precision {chain.detail}"
            logger.warning(message)
            diagnostics.append(message)
        elif chain.terminal == DEPTH_EXHAUSTED:
            diagnostics.append(
                f"{chain.variable}: {len(chain.steps)} algebraic residues, depth exhausted; "
                f"dimension is a lower bound"
            )

    chains = [phase.chains[i] for i in phase.processing_order]
    if all(chain.is_transcendental for chain in chains):
        verdict = VERDICT_YES
    elif all(chain.terminal == DEPTH_EXHAUSTED and trace.origin(chain.index) in source.certified
             for chain in chains if not chain.is_transcendental):
        verdict = VERDICT_NO
    else:
        verdict = VERDICT_UNKNOWN

    report = AnalysisReport(
        source=source,
        final=final,
        trace=trace,
        unit_element=unit,
        unit_orders=unit_orders,
        chains=phase.chains,
        processing_order=phase.processing_order,
        generators=phase.generators,
        implicit_elements=implicit_elements,
        verdict=verdict,
        diagnostics=diagnostics,
    )
    logger.info(f"Dimension {report.dimension} (exact: {report.dimension_exact}), verdict {verdict}")
    return report


def random_polynomial(rng: np.random.Generator, emb: Embedding, degree: int,
                      max_terms: int = ORDER_CHECK_MAX_TERMS) -> Optional[Tuple[FieldExpr, int]]:
    """
    A random polynomial with rational coefficients and total degree <= degree.

    Returns:
        Optional[Tuple[FieldExpr, int]]: The polynomial and its least total
        degree, or None if every drawn term cancelled
    """
    symbols = [Symbol(name) for name in emb.variables]
    weights = [1.0 / emb.n] * emb.n
    terms: Dict[Tuple[int, ...], Rational] = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        total = int(rng.integers(0, degree + 1))
        exponents = tuple(int(k) for k in rng.multinomial(total, weights))
        numerator = int(rng.integers(1, ORDER_CHECK_MAX_NUMERATOR + 1))
        if rng.integers(0, 2):
            numerator = -numerator
        denominator = int(rng.integers(1, ORDER_CHECK_MAX_DENOMINATOR + 1))
        terms[exponents] = terms.get(exponents, 0) + Rational(numerator, denominator)
    terms = {exponents: c for exponents, c in terms.items() if c != 0}
    if not terms:
        return None
    expr = sympy.Add(*[
        c * sympy.Mul(*[s ** k for s, k in zip(symbols, exponents)])
        for exponents, c in terms.items()
    ])
    least = min(sum(exponents) for exponents in terms)
    return FieldExpr(expr, emb.variables, emb.presentation), least


def order_function_check(emb: Embedding, degree: int = ORDER_CHECK_DEGREE,
                         trials: int = ORDER_CHECK_TRIALS, seed: int = DEFAULT_SEED,
                         progress: bool = False) -> OrderCheckReport:
    """
    Test whether v agrees with the usual order function.

    Every variable must have value 1, and each of ``trials`` seeded random
    polynomials must have value equal to its least total degree.

    Args:
        emb (Embedding): Embedding to test
        degree (int): Maximal total degree of the random polynomials
        trials (int): Number of random polynomials
        seed (int): Seed of the numpy generator
        progress (bool): Show a progress bar on standard error

    Returns:
        OrderCheckReport: Pass, or fail with a counterexample

    Raises:
        PrecisionError: If a trial's value is not established within the cap
    """
    for i, name in enumerate(emb.variables, start=1):
        if emb.value_of(i) != 1:
            witness = FieldExpr.variable(name, emb.variables, emb.presentation)
            logger.info(f"Order check fails at {name}: value {emb.value_of(i)}")
            return OrderCheckReport(False, degree, trials, seed, 0, witness,
                                    value(emb, witness), 1)

    rng = np.random.default_rng(seed)
    checked = 0
    for _ in tqdm(range(trials), desc="order check", disable=not progress):
        drawn = None
        while drawn is None:
            drawn = random_polynomial(rng, emb, degree)
        f, least = drawn
        v = value(emb, f)
        if not v.is_finite:
            raise PrecisionError(f"value of {f} not established within precision {emb.cap}", cap=emb.cap)
        checked += 1
        if v.order != least:
            logger.info(f"Order check fails at {f}: value {v}, least degree {least}")
            return OrderCheckReport(False, degree, trials, seed, checked, f, v, least)

    logger.info(f"Order check passed {checked} trials at degree {degree}")
    return OrderCheckReport(True, degree, trials, seed, checked)
