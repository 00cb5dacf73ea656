"""
Unit tests for the valuation algorithms on the golden embeddings.
"""

import unittest

from src.models.embedding import value
from src.models.errors import IterationLimitError, PrecisionError
from src.utils.report import (
    ALGEBRAIC,
    DEPTH_EXHAUSTED,
    DIVISIBILITY_BROKEN,
    PRECISION_EXHAUSTED,
    TRANSCENDENTAL,
    TRANSCENDENTAL_FOUND,
    VERDICT_NO,
    VERDICT_UNKNOWN,
    VERDICT_YES,
)
from src.utils.transform import CoordChange, Monoidal, Swap
from src.utils.valuation import (
    analyze,
    equalize_values,
    extract_residue_chain,
    order_function_check,
    residue_phase,
    transcendence_test,
    unit_value_element,
)
from tests.fixtures import build, example_document, identity_document, load_example, monomial_document


class TestEqualizeAndUnit(unittest.TestCase):
    """Test cases for equalization and the element of value 1."""

    def test_equalize_single_monoidal(self):
        """Test values (2, 4, 2) equalized by one monoidal step."""
        emb, trace = equalize_values(load_example('a'))
        self.assertEqual(trace.steps, [Monoidal(2, 1)])
        self.assertEqual(emb.values(), [2, 2, 2])

    def test_equalize_euclid(self):
        """Test (t^2, t^3) reaching the gcd 1 through a swap."""
        emb, trace = equalize_values(build(monomial_document([2, 3])))
        self.assertEqual(trace.steps, [Monoidal(2, 1), Swap(1, 2), Monoidal(2, 1)])
        self.assertEqual(emb.values(), [1, 1])

    def test_equalize_equal_values(self):
        """Test that equal values need no step."""
        emb, trace = equalize_values(build(identity_document(3)))
        self.assertEqual(len(trace), 0)
        self.assertEqual(emb.values(), [1, 1, 1])

    def test_unit_element_golden(self):
        """Test the value-1 construction for X1 -> t^2, X2 -> T2 t^4 + T2 t^6, X3 -> T2 t^2 + T3 t^5."""
        source = load_example('a')
        T2 = source.presentation.parse('T2')
        final, trace, unit = unit_value_element(source)
        self.assertEqual(trace.steps, [
            Monoidal(2, 1), CoordChange(2, T2, 1), CoordChange(3, T2, 1),
            Monoidal(2, 1), Monoidal(3, 1), Monoidal(3, 1),
            Swap(1, 3), Monoidal(2, 1), Monoidal(3, 1),
        ])
        self.assertEqual(final.values(), [1, 1, 1])
        self.assertTrue(unit.equivalent(source.parse('(X3 - T2*X1)/X1^2')))
        self.assertEqual(value(source, unit), 1)

    def test_unit_element_already_one(self):
        """Test X1 -> t, X2 -> T2 t: X1 itself, empty trace."""
        source = build(identity_document(2))
        _, trace, unit = unit_value_element(source)
        self.assertEqual(len(trace), 0)
        self.assertEqual(unit.format(), 'X1')

    def test_unit_element_from_monomials(self):
        """Test X1 -> t^2, X2 -> t^3 giving X2/X1."""
        source = build(monomial_document([2, 3]))
        _, _, unit = unit_value_element(source)
        self.assertTrue(unit.equivalent(source.parse('X2/X1')))

    def test_iteration_limit(self):
        """Test a valuation whose group is 2Z."""
        document = {
            "field": {"symbols": ["T2"]},
            "variables": ["X1", "X2"],
            "series": {
                "X1": {"terms": [{"c": "1", "e": 2}]},
                "X2": {"tails": [{"coeff": "T2^j", "exp": "2*j"}]},
            },
        }
        with self.assertRaises(IterationLimitError) as ctx:
            unit_value_element(build(document), iterations=5)
        self.assertEqual(ctx.exception.alpha, 2)
        self.assertIn('2·Z', str(ctx.exception))


class TestResidueChains(unittest.TestCase):
    """Test cases for residue chains and the transcendence test."""

    def test_chain_with_transcendental_residue(self):
        """Test X1 -> t, X2 -> t + t^3 + sum u^i t^(i+3)."""
        emb = load_example('b')
        chain = extract_residue_chain(emb, 2, [])
        u = emb.presentation.parse('u')
        one = emb.presentation.one
        self.assertEqual([(s.exponent, s.residue, s.kind) for s in chain.steps],
                         [(1, one, ALGEBRAIC), (3, one, ALGEBRAIC), (4, u, TRANSCENDENTAL)])
        self.assertEqual(chain.terminal, TRANSCENDENTAL_FOUND)

    def test_chain_depth_exhausted(self):
        """Test an infinite chain of algebraic residues cut at depth 6."""
        emb = load_example('c', depth=6)
        F = emb.presentation
        known = [F.parse('T2'), F.parse('T3'), F.parse('T4')]
        chain = extract_residue_chain(emb, 5, known, depth=6)
        self.assertEqual(chain.terminal, DEPTH_EXHAUSTED)
        self.assertEqual(chain.detail, 6)
        self.assertEqual([s.exponent for s in chain.steps], [2, 3, 4, 5, 6, 7])
        self.assertTrue(all(s.kind == ALGEBRAIC for s in chain.steps))

    def test_chain_divisibility_broken(self):
        """Test a value that is not a multiple of the pivot value."""
        chain = extract_residue_chain(build(monomial_document([2, 3])), 2, [])
        self.assertEqual(chain.terminal, DIVISIBILITY_BROKEN)
        self.assertEqual(chain.detail, 3)
        self.assertEqual(chain.steps, [])

    def test_residue_phase_restarts_above_value_one(self):
        """Test X1 -> t^2, X2 -> T2 t^3 without normalization: value 3 forces one restart."""
        document = {
            "field": {"symbols": ["T2"]},
            "variables": ["X1", "X2"],
            "series": {
                "X1": {"terms": [{"c": "1", "e": 2}]},
                "X2": {"terms": [{"c": "T2", "e": 3}]},
            },
        }
        emb = build(document)
        F = emb.presentation
        phase = residue_phase(emb)
        self.assertEqual(len(phase.diagnostics), 1)
        self.assertIn('value 3 is not a multiple of the pivot value 2', phase.diagnostics[0])
        self.assertEqual(phase.trace.steps, [Monoidal(2, 1), Swap(1, 2), Monoidal(2, 1)])
        self.assertEqual(phase.emb.values(), [1, 1])
        chain = phase.chains[2]
        self.assertEqual(chain.terminal, TRANSCENDENTAL_FOUND)
        self.assertEqual(chain.transcendental_residue(), F.parse('1/T2^2'))
        self.assertEqual(phase.generators, [chain])

        # after the value-1 construction the same embedding needs no restart
        report = analyze(emb)
        self.assertEqual(report.diagnostics, [])
        self.assertEqual(report.dimension, 1)

    def test_chain_precision(self):
        """Test a chain whose remainder vanishes within the cap."""
        emb = build(monomial_document([1, 1]))
        with self.assertRaises(PrecisionError):
            extract_residue_chain(emb, 2, [])
        chain = extract_residue_chain(emb, 2, [], localize_precision=True)
        self.assertEqual(chain.terminal, PRECISION_EXHAUSTED)
        self.assertEqual(chain.detail, 64)

    def test_transcendence_test(self):
        """Test the Jacobian criterion on small cases."""
        F = load_example('a').presentation
        T2, T3 = F.parse('T2'), F.parse('T3')
        self.assertEqual(transcendence_test(F, [], T2), TRANSCENDENTAL)
        self.assertEqual(transcendence_test(F, [T2], T2 ** 2 + F.one), ALGEBRAIC)
        self.assertEqual(transcendence_test(F, [T2], T3), TRANSCENDENTAL)
        self.assertEqual(transcendence_test(F, [], F.parse('7/2')), ALGEBRAIC)


class TestAnalyzeGolden(unittest.TestCase):
    """Test cases for the full analysis of the golden embeddings."""

    def test_analyze_a(self):
        """Test dimension 2 and the order function for the three-variable embedding."""
        source = load_example('a')
        F = source.presentation
        report = analyze(source)
        self.assertEqual(report.dimension, 2)
        self.assertTrue(report.dimension_exact)
        self.assertEqual(report.verdict, VERDICT_YES)
        self.assertEqual(report.final.values(), [1, 1, 1])
        self.assertEqual(report.processing_order, [2, 3])
        self.assertEqual([chain.transcendental_residue() for chain in report.generators],
                         [F.parse('T2/T3^2'), F.parse('1/T3^2')])
        self.assertEqual([o.order for o in report.unit_orders], [5, 4])
        self.assertEqual(report.final.image(1).coefficient(1), F.parse('T3'))
        self.assertEqual(report.final.image(2).coefficient(1), F.parse('T2/T3'))
        self.assertEqual(report.final.image(3).coefficient(1), F.parse('1/T3'))
        for chain in report.generators:
            self.assertEqual(value(source, chain.lift), 0)

    def test_analyze_b(self):
        """Test dimension 1 with coordinate changes at exponents 1 and 3."""
        source = load_example('b')
        F = source.presentation
        one, u = F.one, F.parse('u')
        report = analyze(source)
        self.assertEqual(report.trace.steps, [
            CoordChange(2, one, 1), CoordChange(2, one, 3),
            Monoidal(2, 1), Monoidal(2, 1), Monoidal(2, 1),
        ])
        self.assertEqual(report.dimension, 1)
        self.assertEqual(report.verdict, VERDICT_YES)
        self.assertEqual(report.final.image(2).truncate(3), [F.zero, u, u ** 2, u ** 3])
        self.assertEqual(value(source, source.parse('X2 - X1 - X1^3')), 4)
        lift = report.chains[2].lift
        self.assertTrue(lift.equivalent(source.parse('(X2 - X1 - X1^3)/X1^4')))

    def test_analyze_c(self):
        """Test the radical example: three generators and a depth-exhausted chain."""
        source = load_example('c', depth=6)
        F = source.presentation
        report = analyze(source, depth=6)
        self.assertEqual(report.trace.steps[0], Monoidal(5, 1))
        self.assertTrue(report.unit_element.equivalent(source.parse('X1')))
        self.assertEqual([s.residue for s in report.chains[3].steps],
                         [F.parse('T2^2'), F.parse('T2'), F.parse('T3')])
        self.assertEqual([s.kind for s in report.chains[3].steps], [ALGEBRAIC, ALGEBRAIC, TRANSCENDENTAL])
        self.assertEqual([s.residue for s in report.chains[4].steps],
                         [F.parse('T2^3'), F.parse('T2^2'), F.parse('T3'), F.parse('T4')])
        chain5 = report.chains[5]
        self.assertEqual(chain5.terminal, DEPTH_EXHAUSTED)
        self.assertEqual([s.residue for s in chain5.steps],
                         [F.parse(f'T2*T4^({j}/2)') for j in range(1, 7)])
        self.assertTrue(all(s.kind == ALGEBRAIC for s in chain5.steps))
        self.assertEqual(report.dimension, 3)
        self.assertFalse(report.dimension_exact)
        self.assertEqual(report.verdict, VERDICT_UNKNOWN)
        self.assertEqual([e.name for e in report.implicit_elements], ['W5'])
        self.assertEqual(report.implicit_elements[0].value, [1, 0])

    def test_analyze_d_certified(self):
        """Test the exponential tail: certified infinite chain gives verdict no."""
        source = load_example('d')
        report = analyze(source, depth=6)
        self.assertEqual(report.dimension, 3)
        self.assertEqual(report.verdict, VERDICT_NO)
        self.assertEqual(report.chains[5].terminal, DEPTH_EXHAUSTED)
        F = source.presentation
        self.assertEqual(report.chains[5].steps[2].residue, F.parse('T2*T4^3/6'))
        self.assertEqual([e.name for e in report.implicit_elements], ['W5'])

    def test_analyze_d_uncertified(self):
        """Test that without the certificate the verdict stays unknown."""
        document = example_document('d')
        del document['series']['X5']['certified_infinite']
        report = analyze(build(document), depth=6)
        self.assertEqual(report.verdict, VERDICT_UNKNOWN)
        self.assertEqual(report.dimension, 3)

    def test_identity_embeddings(self):
        """Test that X1 -> t, Xi -> Ti t has dimension n - 1 and passes the order check."""
        for n in (2, 3, 4):
            emb = build(identity_document(n))
            report = analyze(emb)
            self.assertEqual(report.dimension, n - 1)
            self.assertEqual(report.verdict, VERDICT_YES)
            self.assertEqual(len(report.trace), 0)
            check = order_function_check(emb, degree=5, trials=100, seed=0)
            self.assertTrue(check.passed)
            self.assertEqual(check.checked, 100)

    def test_report_dict_keys(self):
        """Test the JSON report structure."""
        data = analyze(load_example('b')).to_dict()
        for key in ['values', 'trace', 'unit_element', 'chains', 'generators', 'field_tower',
                    'dimension', 'dimension_exact', 'order_function', 'implicit_elements',
                    'diagnostics', 'processing_order', 'final_values', 'final_images']:
            self.assertIn(key, data)
        self.assertEqual(data['unit_element']['value'], 1)
        self.assertEqual(data['generators']['transcendental'][0]['residue'], 'u')
        self.assertEqual(data['order_function']['verdict'], 'yes')


class TestOrderFunctionCheck(unittest.TestCase):
    """Test cases for the randomized order-function check."""

    def test_wrong_embedding_fails_on_variable(self):
        """Test X1 -> t^2, X2 -> T2 t^2 failing with witness X1."""
        document = {
            "field": {"symbols": ["T2"]},
            "variables": ["X1", "X2"],
            "series": {
                "X1": {"terms": [{"c": "1", "e": 2}]},
                "X2": {"terms": [{"c": "T2", "e": 2}]},
            },
        }
        check = order_function_check(build(document))
        self.assertFalse(check.passed)
        self.assertEqual(check.witness.format(), 'X1')
        self.assertEqual(check.witness_value, 2)
        self.assertEqual(check.expected, 1)

    def test_transformed_embedding_passes(self):
        """Test the final embedding of the two-variable analysis at degree 4."""
        report = analyze(load_example('b'))
        final = report.final.renamed(report.trace.target_variables)
        check = order_function_check(final, degree=4, trials=30, seed=3)
        self.assertTrue(check.passed)

    def test_seeded_runs_agree(self):
        """Test that the same seed checks the same polynomials."""
        emb = build(identity_document(3))
        first = order_function_check(emb, degree=3, trials=10, seed=11).to_dict()
        second = order_function_check(emb, degree=3, trials=10, seed=11).to_dict()
        self.assertEqual(first, second)


if __name__ == '__main__':
    unittest.main()
