"""
Unit tests for embeddings, field expressions and embedding documents.
"""

import json
import unittest

import numpy as np

from src.models.embedding import Embedding, FieldExpr, evaluate, leading_data, value, value_orders
from src.models.errors import InputError
from src.models.field import FieldPresentation
from src.models.series import LazySeries, Value
from src.utils.document import json_path, parse_document, parse_exponent_rule, resolve_radical_bounds
from src.utils.valuation import random_polynomial
from tests.fixtures import build, example_document, load_example


class TestEmbedding(unittest.TestCase):
    """Test cases for values under X1 -> t^2, X2 -> T2 t^4 + T2 t^6, X3 -> T2 t^2 + T3 t^5."""

    def setUp(self):
        """Set up test fixtures."""
        self.emb = load_example('a')
        self.F = self.emb.presentation

    def test_values_checked_at_load(self):
        """Test the value vector of the document."""
        self.assertEqual(self.emb.values(), [2, 4, 2])
        self.assertEqual(self.emb.variables, ('X1', 'X2', 'X3'))

    def test_evaluate_variable(self):
        """Test that X1 evaluates to t^2."""
        series = evaluate(self.emb, self.emb.parse('X1'))
        self.assertEqual(series.truncate(3), [self.F.zero, self.F.zero, self.F.one, self.F.zero])

    def test_value_of_variable(self):
        """Test v(X2) = 4."""
        self.assertEqual(value(self.emb, self.emb.parse('X2')), 4)

    def test_value_of_unit_element(self):
        """Test that (X3 - c2 X1)/X1^2 with c2 = X2/(X1^2 + X1^3) has value 1."""
        f = self.emb.parse('(X3*(X1^2+X1^3)-X2*X1)/(X1^2*(X1^2+X1^3))')
        self.assertEqual(value(self.emb, f), 1)
        numerator_order, denominator_order = value_orders(self.emb, f)
        self.assertEqual(numerator_order.order - denominator_order.order, 1)

    def test_value_with_field_coefficients(self):
        """Test braces around coefficients and cancellation of leading terms."""
        self.assertEqual(value(self.emb, self.emb.parse('X3 - {T2}*X1')), 5)
        self.assertEqual(value(self.emb, self.emb.parse('X1/X2')), -2)

    def test_value_of_zero(self):
        """Test that the zero expression has infinite value."""
        self.assertEqual(value(self.emb, self.emb.parse('0')), Value.infinite())
        self.assertEqual(value(self.emb, self.emb.parse('X1 - X1')), Value.infinite())

    def test_value_precision_exhausted(self):
        """Test that a value beyond the cap is reported, not guessed."""
        result = value(self.emb, self.emb.parse('X1^40'))
        self.assertTrue(result.is_exhausted)
        self.assertEqual(result.cap, 64)

    def test_leading_data(self):
        """Test values and leading coefficients."""
        self.assertEqual(leading_data(self.emb, self.emb.parse('X2')), (4, self.F.parse('T2')))
        self.assertEqual(leading_data(self.emb, self.emb.parse('X3')), (2, self.F.parse('T2')))

    def draw(self, rng):
        while True:
            drawn = random_polynomial(rng, self.emb, 3)
            if drawn is not None:
                return drawn[0]

    def test_evaluate_is_a_ring_homomorphism(self):
        """Test that psi(f + g) and psi(f*g) agree with coefficient sums and convolutions."""
        rng = np.random.default_rng(17)
        k = 12
        for _ in range(15):
            f, g = self.draw(rng), self.draw(rng)
            a = evaluate(self.emb, f).truncate(k)
            b = evaluate(self.emb, g).truncate(k)
            total = evaluate(self.emb, FieldExpr(f.expr + g.expr, self.emb.variables, self.F))
            product = evaluate(self.emb, FieldExpr(f.expr * g.expr, self.emb.variables, self.F))
            self.assertEqual(total.truncate(k), [x + y for x, y in zip(a, b)])
            convolution = [sum((a[i] * b[e - i] for i in range(e + 1)), self.F.zero)
                           for e in range(k + 1)]
            self.assertEqual(product.truncate(k), convolution)

    def test_evaluate_polynomial_dense(self):
        """Test X3*(X1^2 + X1^3) - X2*X1 -> T3 t^9 + T3 t^11."""
        f = self.emb.parse('X3*(X1^2 + X1^3) - X2*X1')
        T3 = self.F.parse('T3')
        expected = [T3 if e in (9, 11) else self.F.zero for e in range(15)]
        self.assertEqual(evaluate(self.emb, f).truncate(14), expected)
        self.assertEqual(value(self.emb, f), 9)

    def test_value_of_field_constant(self):
        """Test that nonzero constants of the coefficient field have value 0."""
        self.assertEqual(value(self.emb, self.emb.parse('{T2/T3}')), 0)
        self.assertEqual(value(self.emb, self.emb.parse('-3/7')), 0)
        self.assertEqual(value(self.emb, self.emb.parse('{T2}*X1/({T3}*X1)')), 0)

    def test_negative_value_is_not_a_series(self):
        """Test that psi(f) is refused when v(f) < 0."""
        with self.assertRaises(InputError):
            evaluate(self.emb, self.emb.parse('X1/X2'))

    def test_expression_rejections(self):
        """Test unknown names, functions and fractional powers."""
        for text in ['X9 + X1', 'X1^(1/2)', 'exp(X1)', 'X1 +']:
            with self.assertRaises(InputError):
                self.emb.parse(text)

    def test_expression_format_round_trip(self):
        """Test that formatted expressions parse back to the same expression."""
        f = self.emb.parse('(X3 - {T2}*X1)/X1^2')
        self.assertEqual(self.emb.parse(f.format()), f)
        self.assertEqual(f.used_variables, ['X1', 'X3'])
        self.assertTrue(f.equivalent(self.emb.parse('X3/X1^2 - T2/X1')))


class TestEmbeddingValidation(unittest.TestCase):
    """Test cases for rejected embeddings."""

    def setUp(self):
        """Set up test fixtures."""
        self.F = FieldPresentation(['T2'])
        self.t = LazySeries.monomial(self.F, self.F.one, 1)

    def test_needs_two_variables(self):
        """Test that a single variable is rejected."""
        with self.assertRaises(InputError):
            Embedding(self.F, ['X1'], [self.t])

    def test_zero_image_rejected(self):
        """Test that a zero image has no established order."""
        with self.assertRaises(InputError) as ctx:
            Embedding(self.F, ['X1', 'X2'], [self.t, LazySeries.zero(self.F)])
        self.assertIn('image order not established', str(ctx.exception))

    def test_unit_image_rejected(self):
        """Test that images must vanish at t = 0."""
        with self.assertRaises(InputError):
            Embedding(self.F, ['X1', 'X2'], [self.t, LazySeries.constant(self.F, self.F.one)])

    def test_name_collisions(self):
        """Test variable names colliding with symbols or each other."""
        with self.assertRaises(InputError):
            Embedding(self.F, ['X1', 'T2'], [self.t, self.t])
        with self.assertRaises(InputError):
            Embedding(self.F, ['X1', 'X1'], [self.t, self.t])


class TestDocument(unittest.TestCase):
    """Test cases for parsing and validating embedding documents."""

    def setUp(self):
        """Set up test fixtures."""
        self.document = example_document('a')

    def test_schema_error_has_json_path(self):
        """Test that schema violations name their location."""
        self.document['series']['X1']['terms'][0]['e'] = 0
        with self.assertRaises(InputError) as ctx:
            build(self.document)
        self.assertIn('$.series.X1.terms[0].e', str(ctx.exception))

    def test_missing_series_rejected(self):
        """Test a declared variable without a series."""
        del self.document['series']['X3']
        with self.assertRaises(InputError):
            build(self.document)

    def test_unknown_series_rejected(self):
        """Test a series for an undeclared variable."""
        self.document['series']['X4'] = {'terms': [{'c': '1', 'e': 1}]}
        with self.assertRaises(InputError):
            build(self.document)

    def test_undeclared_symbol_rejected(self):
        """Test coefficients over undeclared symbols."""
        self.document['series']['X2']['terms'][0]['c'] = 'T9'
        with self.assertRaises(InputError) as ctx:
            build(self.document)
        self.assertIn('$.series.X2.terms[0].c', str(ctx.exception))

    def test_tail_with_pole_rejected(self):
        """Test that a tail coefficient undefined at some index fails at load time."""
        self.document['series']['X2']['tails'] = [{'coeff': 'T2/(j-5)', 'exp': 'j+6', 'from': 1}]
        with self.assertRaises(InputError) as ctx:
            build(self.document)
        self.assertIn('$.series.X2.tails[0]', str(ctx.exception))
        self.assertIn('depends on j', str(ctx.exception))

    def test_zero_image_rejected(self):
        """Test that a zero image is refused at load time."""
        self.document['series']['X1'] = {'terms': [{'c': '0', 'e': 1}]}
        with self.assertRaises(InputError):
            build(self.document)

    def test_invalid_json(self):
        """Test malformed JSON text."""
        with self.assertRaises(InputError):
            parse_document('{"field": ')

    def test_radical_base_uses_depth(self):
        """Test that {"base": 2} at depth 6 gives the bound 64."""
        emb = load_example('c', depth=6)
        self.assertEqual(emb.presentation.radical_bound['T4'], 64)
        self.assertEqual(emb.values(), [1, 1, 1, 1, 2])
        self.assertEqual(resolve_radical_bounds({'T4': {'base': 3}, 'T2': 5}, 2), {'T4': 9, 'T2': 5})

    def test_certified_positions(self):
        """Test that certified_infinite marks its variable."""
        self.assertEqual(load_example('d').certified, frozenset({5}))
        self.assertEqual(load_example('c').certified, frozenset())

    def test_exponent_rules(self):
        """Test a*j + b parsing."""
        self.assertEqual(parse_exponent_rule('j+3'), (1, 3))
        self.assertEqual(parse_exponent_rule('2*j'), (2, 0))
        self.assertEqual(parse_exponent_rule('3*j - 2'), (3, -2))
        for text in ['j^2', '-j + 4', 'j/2', 'j + T2', 4]:
            with self.assertRaises(InputError):
                parse_exponent_rule(text)

    def test_json_path(self):
        """Test rendering of error paths."""
        self.assertEqual(json_path(['series', 'X1', 'terms', 0, 'e']), '$.series.X1.terms[0].e')
        self.assertEqual(json_path([]), '$')

    def test_bytes_and_text_agree(self):
        """Test that bytes and str documents parse alike."""
        text = json.dumps(self.document)
        self.assertEqual(parse_document(text).values(), parse_document(text.encode()).values())


if __name__ == '__main__':
    unittest.main()
