#!/usr/bin/env python3
"""
Unit tests for the binomdec problem file parser
"""

import unittest
import sys
import os
import tempfile
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from binomdec.bideal import BinomialIdeal
from binomdec.exceptions import NonBinomialGenerator, ProblemSyntaxError
from binomdec.field import FieldCtx
from binomdec.problem import format_problem, ideal_lists_match, load_problem, parse_problem


class TestParseProblem(unittest.TestCase):
    """Test cases for parsing problem text"""

    def setUp(self):
        self.source = """
# {x1, x2}-cellular
field GF(7);
vars x1 x2 x3;
ideal x1^2 - x2^2, x3(x1 - x2), x3^3;   # trailing comment

expect memb <>;
expect primary <x1 - x2, x3^3> | <x1 + x2, x3>;
expect isprimary false;
"""

    def test_basic_problem(self):
        problem = parse_problem(self.source, "need_saturation.bid")
        self.assertEqual(problem.field, FieldCtx(7))
        self.assertEqual(problem.ring.variables, ("x1", "x2", "x3"))
        self.assertEqual(len(problem.ideal.generators), 3)
        self.assertIsInstance(problem.ideal, BinomialIdeal)
        self.assertEqual(problem.source, "need_saturation.bid")

    def test_implicit_multiplication(self):
        """x3(x1 - x2) expands to x1*x3 - x2*x3"""
        problem = parse_problem(self.source)
        self.assertEqual(str(problem.ideal.generators[1]), "x1*x3 - x2*x3")

    def test_expectations(self):
        problem = parse_problem(self.source)
        self.assertTrue(problem.expectation("memb").ideals[0].is_zero())
        self.assertEqual(len(problem.expectation("primary").ideals), 2)
        self.assertIs(problem.expectation("isprimary").flag, False)
        self.assertIsNone(problem.expectation("hull"))

    def test_rational_coefficients(self):
        """1/2 is 4 modulo 7"""
        problem = parse_problem("field GF(7); vars x y; ideal x - y/2;")
        ring = problem.ring
        expected = ring.gen(0) - ring.gen(1) * 4
        self.assertEqual(problem.ideal.generators[0], expected)

    def test_coefficients_reduce_modulo_p(self):
        """x^2 - 8 is x^2 - 1 over GF(7)"""
        problem = parse_problem("field GF(7); vars x; ideal x^2 - 8;")
        self.assertEqual(str(problem.ideal.generators[0]), "x^2 - 1")

    def test_extension_field_generator(self):
        """z denotes the generator of GF(4)"""
        problem = parse_problem("field GF(2^2); vars x y; ideal x - z*y;")
        g = problem.ideal.generators[0]
        self.assertEqual(len(g), 2)
        self.assertEqual(g.terms[(0, 1)], FieldCtx(2, 2).gen)

    def test_expect_over_extension(self):
        source = "field GF(5); vars x; ideal x^3 - 1; expect primary over GF(5^2) <x - 1> | <x - z> ;"
        problem = parse_problem(source)
        ideals = problem.expectation("primary").ideals
        self.assertTrue(all(i.ring.field == FieldCtx(5, 2) for i in ideals))

    def test_trinomial_rejected(self):
        with self.assertRaises(NonBinomialGenerator) as ctx:
            parse_problem("field GF(7); vars x y; ideal x + y + 1;")
        self.assertEqual(ctx.exception.generator, "x + y + 1")

    def test_terms_combining_to_a_binomial(self):
        """(x + 1)^2 - 2x is a binomial after expansion"""
        problem = parse_problem("field GF(7); vars x; ideal (x + 1)^2 - 2*x;")
        self.assertEqual(str(problem.ideal.generators[0]), "x^2 + 1")


class TestSyntaxErrors(unittest.TestCase):
    """Test cases for error positions and messages"""

    def assertSyntaxError(self, source, line=None):
        with self.assertRaises(ProblemSyntaxError) as ctx:
            parse_problem(source)
        if line is not None:
            self.assertEqual(ctx.exception.line, line)
        return ctx.exception

    def test_undeclared_symbol(self):
        error = self.assertSyntaxError("field GF(7);\nvars x y;\nideal x - w;", line=3)
        self.assertIn("w", str(error))

    def test_missing_statements(self):
        self.assertSyntaxError("field GF(7); vars x;")
        self.assertSyntaxError("vars x; ideal x;", line=1)

    def test_duplicate_statements(self):
        self.assertSyntaxError("field GF(7);\nfield GF(5);\nvars x; ideal x;", line=2)

    def test_unknown_statement(self):
        self.assertSyntaxError("field GF(7); vars x; ideal x; solve x;")

    def test_bad_field(self):
        self.assertSyntaxError("field GF(6); vars x; ideal x;", line=1)

    def test_field_symbol_reserved(self):
        self.assertSyntaxError("field GF(3^2); vars x z; ideal x;")

    def test_coefficient_undefined_mod_p(self):
        self.assertSyntaxError("field GF(7); vars x; ideal x - 1/7;")

    def test_bad_expectation(self):
        self.assertSyntaxError("field GF(7); vars x; ideal x; expect isprimary maybe;")
        self.assertSyntaxError("field GF(7); vars x; ideal x; expect solve <x>;")

    def test_unparseable_polynomial(self):
        self.assertSyntaxError("field GF(7); vars x; ideal x +* 2;")

    def test_only_arithmetic_reaches_the_parser(self):
        """Attribute access, dunder names and lambdas are rejected before sympy sees them"""
        error = self.assertSyntaxError("field GF(7);\nvars x;\nideal x.__class__;", line=3)
        self.assertIn("'.'", str(error))
        error = self.assertSyntaxError("field GF(7); vars x; ideal __import__('os');")
        self.assertIn("__import__", str(error))
        self.assertSyntaxError("field GF(7); vars x; ideal (lambda: x)();")
        self.assertSyntaxError("field GF(7); vars x; ideal x - 1.5;")
        self.assertSyntaxError("field GF(7); vars x; ideal x[0];")
        self.assertSyntaxError("field GF(7); vars x; ideal x; expect primary <x, x.y>;")

    def test_reserved_variable_names(self):
        self.assertSyntaxError("field GF(7); vars __x; ideal __x;")
        self.assertSyntaxError("field GF(7); vars lambda; ideal lambda;")


class TestProblemFiles(unittest.TestCase):
    """Test cases for reading, formatting and comparing"""

    def test_load_problem(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "small.bid")
            with open(path, "w") as f:
                f.write("field GF(3); vars x1 x2; ideal x1*x2;\n")
            problem = load_problem(path)
        self.assertEqual(problem.source, path)
        self.assertEqual(problem.field, FieldCtx(3))

    def test_format_problem_parses_back(self):
        problem = parse_problem("field GF(2^2); vars x y; ideal x^3 - y^3, x*y - z*y^2;")
        again = parse_problem(format_problem(problem))
        self.assertTrue(again.ideal.equals(problem.ideal))
        self.assertEqual(again.field, problem.field)

    def test_ideal_lists_match_is_order_free(self):
        problem = parse_problem(
            "field GF(7); vars x y; ideal x*y; expect primary <x> | <y>; expect cellular <y> | <x>;"
        )
        primary = problem.expectation("primary").ideals
        cellular = problem.expectation("cellular").ideals
        self.assertTrue(ideal_lists_match(primary, cellular, problem.field))
        self.assertFalse(ideal_lists_match(primary, primary[:1], problem.field))
        self.assertTrue(ideal_lists_match([], [], problem.field))

    def test_ideal_lists_match_across_fields(self):
        """Ideals over GF(5) and GF(25) compare after lifting"""
        problem = parse_problem(
            "field GF(5); vars x; ideal x - 1; expect primary over GF(5^2) <x - 1>;"
        )
        lifted = problem.expectation("primary").ideals
        self.assertTrue(ideal_lists_match(lifted, [problem.ideal], problem.field))


if __name__ == '__main__':
    unittest.main()
