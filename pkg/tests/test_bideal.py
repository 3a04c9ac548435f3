#!/usr/bin/env python3
"""
Unit tests for the binomdec polynomial and ideal engine
"""

import random
import unittest
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from binomdec.bideal import (
    BinomialIdeal,
    ENGINE_STATS,
    Ideal,
    PolynomialRing,
    TermOrder,
    buchberger,
    intersect_all,
    minimal_monomials,
    prune_redundant,
)
from binomdec.exceptions import NonBinomialGenerator, NotAFrobeniusPower, NotNilpotent, RingMismatch
from binomdec.field import FieldCtx
from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm

PROPERTY_CASES = int(os.environ.get("BINOMDEC_PROPERTY_CASES", "6"))


class TestPolynomial(unittest.TestCase):
    """Test cases for polynomial arithmetic and formatting"""

    def setUp(self):
        self.ring = PolynomialRing(FieldCtx(7), ("x", "y", "z"))
        self.x, self.y, self.z = (self.ring.gen(i) for i in range(3))

    def test_arithmetic(self):
        p = (self.x + self.y) * (self.x - self.y)
        self.assertEqual(p, self.x * self.x - self.y * self.y)
        self.assertTrue((p - p).is_zero)
        self.assertEqual(len(p), 2)

    def test_scalar_multiplication_wraps(self):
        """7 * x is zero in characteristic 7"""
        self.assertTrue((7 * self.x).is_zero)
        self.assertEqual(3 * self.x, self.x * 3)

    def test_leading_monomial_degrevlex(self):
        """Degree first, then the reverse lexicographic tie break"""
        p = self.x * self.z + self.y * self.y + self.x
        self.assertEqual(p.leading_monomial(), (0, 2, 0))

    def test_elimination_order(self):
        """A block order puts any term with z above the rest"""
        order = TermOrder.elimination((2,))
        p = self.x * self.x * self.x + self.z
        self.assertEqual(p.leading_monomial(order), (0, 0, 1))

    def test_format(self):
        p = self.x * self.y - self.ring.one * 3
        self.assertEqual(str(p), "x*y - 3")
        self.assertEqual(str(self.ring.zero), "0")
        self.assertEqual(str(2 * self.x * self.x), "2*x^2")

    def test_format_extension_coefficients(self):
        """Coefficients outside the prime field are parenthesized"""
        f4 = FieldCtx(2, 2)
        ring = PolynomialRing(f4, ("x", "y"))
        p = ring.gen(0) - ring.gen(1) * f4.gen
        self.assertEqual(str(p), "x + (z)*y")

    def test_frobenius(self):
        p = self.x - 2 * self.y
        self.assertEqual(str(p.frobenius(7)), "x^7 - 2*y^7")
        self.assertEqual(p.frobenius(7).leading_monomial(), (7, 0, 0))

    def test_ring_mismatch(self):
        other = PolynomialRing(FieldCtx(5), ("x",))
        with self.assertRaises(RingMismatch):
            self.x + other.gen(0)

    def test_duplicate_variables(self):
        with self.assertRaises(ValueError):
            PolynomialRing(FieldCtx(7), ("x", "x"))


class TestGroebner(unittest.TestCase):
    """Test cases for Buchberger completion"""

    def setUp(self):
        self.ring = PolynomialRing(FieldCtx(7), ("x", "y"))
        self.x, self.y = self.ring.gen(0), self.ring.gen(1)

    def test_reduced_basis_is_canonical(self):
        """Different generating sets of one ideal give the same reduced basis"""
        a = Ideal(self.ring, [self.x * self.x - self.y, self.x * self.y - self.ring.one])
        b = Ideal(self.ring, [self.x * self.y - self.ring.one, self.x * self.x - self.y,
                              self.x * self.x * self.y - self.y * self.y])
        self.assertEqual(a.groebner(), b.groebner())
        self.assertTrue(a.equals(b))
        self.assertEqual(a.key(), b.key())

    def test_membership(self):
        ideal = Ideal(self.ring, [self.x * self.x - self.y])
        self.assertTrue(ideal.member(self.x * self.x * self.x - self.x * self.y))
        self.assertFalse(ideal.member(self.x - self.y))

    def test_unit_and_zero(self):
        self.assertTrue(Ideal.unit(self.ring).is_unit())
        self.assertTrue(Ideal(self.ring, [self.x, self.x - self.ring.one]).is_unit())
        self.assertTrue(Ideal(self.ring).is_zero())
        self.assertEqual(buchberger([]), ())

    def test_engine_counters(self):
        before = ENGINE_STATS["groebner_bases"]
        Ideal(self.ring, [self.x - self.y]).groebner()
        self.assertGreater(ENGINE_STATS["groebner_bases"], before)

    def test_binomial_ideal_rejects_trinomials(self):
        with self.assertRaises(NonBinomialGenerator) as ctx:
            BinomialIdeal(self.ring, [self.x + self.y + self.ring.one])
        self.assertIn("3 terms", str(ctx.exception))

    def test_binomial_sum_stays_binomial(self):
        a = BinomialIdeal(self.ring, [self.x - self.y])
        b = BinomialIdeal(self.ring, [self.y * self.y])
        self.assertIsInstance(a + b, BinomialIdeal)
        self.assertIsInstance(a + Ideal(self.ring, [self.x]), Ideal)


class TestIdealOperations(unittest.TestCase):
    """Test cases for quotients, saturations, elimination and intersection"""

    def setUp(self):
        self.ring = PolynomialRing(FieldCtx(7), ("x", "y", "z"))
        self.x, self.y, self.z = (self.ring.gen(i) for i in range(3))

    def test_quotient_monomial(self):
        """(<x*y, x*z> : x) = <y, z>"""
        ideal = BinomialIdeal(self.ring, [self.x * self.y, self.x * self.z])
        expected = BinomialIdeal(self.ring, [self.y, self.z])
        self.assertTrue(ideal.quotient_monomial(self.x).equals(expected))

    def test_saturation(self):
        """<x^2*y - x^2*z> saturated by x is <y - z>"""
        ideal = BinomialIdeal(self.ring, [self.x * self.x * self.y - self.x * self.x * self.z])
        expected = BinomialIdeal(self.ring, [self.y - self.z])
        self.assertTrue(ideal.saturate_monomial(self.x).equals(expected))
        self.assertTrue(ideal.saturate_variables([0]).equals(expected))

    def test_eliminate(self):
        """<x - y, y - z> meets k[x, z] in <x - z>"""
        ideal = BinomialIdeal(self.ring, [self.x - self.y, self.y - self.z])
        eliminated = ideal.eliminate([0, 2])
        self.assertEqual(eliminated.ring, self.ring)
        self.assertTrue(all(g.supported_on([0, 2]) for g in eliminated.generators))
        self.assertTrue(eliminated.equals(BinomialIdeal(self.ring, [self.x - self.z])))

    def test_intersection(self):
        """<x> cap <y> = <x*y>"""
        meet = Ideal(self.ring, [self.x]).intersect(Ideal(self.ring, [self.y]))
        self.assertTrue(meet.equals(Ideal(self.ring, [self.x * self.y])))
        unit = Ideal.unit(self.ring)
        self.assertIs(unit.intersect(meet), meet)
        self.assertTrue(Ideal(self.ring).intersect(meet).is_zero())

    def test_intersect_all(self):
        ideals = [Ideal(self.ring, [g]) for g in (self.x, self.y, self.z)]
        meet = intersect_all(ideals)
        self.assertTrue(meet.member(self.x * self.y * self.z))
        self.assertFalse(meet.member(self.x * self.y))
        with self.assertRaises(ValueError):
            intersect_all([])

    def test_quasipower(self):
        """Over GF(7), <x - 2*y>^[7] = <x^7 - 2*y^7>"""
        ideal = BinomialIdeal(self.ring, [self.x - 2 * self.y])
        power = ideal.quasipower(7)
        x7 = self.ring.monomial((7, 0, 0))
        y7 = self.ring.monomial((0, 7, 0))
        self.assertTrue(power.equals(BinomialIdeal(self.ring, [x7 - 2 * y7])))
        self.assertIs(ideal.quasipower(1), ideal)
        with self.assertRaises(NotAFrobeniusPower):
            ideal.quasipower(6)

    def test_nilpotency_and_staircase(self):
        """x^3, y^2 and x*y leave the staircase 1, y, x, x^2"""
        ideal = BinomialIdeal(self.ring, [self.x * self.x * self.x, self.y * self.y, self.x * self.y])
        self.assertEqual(ideal.nilpotency_exponent(0), 3)
        self.assertEqual(ideal.nilpotency_exponent(1), 2)
        self.assertIsNone(ideal.nilpotency_exponent(2))
        self.assertEqual(ideal.monomials_outside([0, 1]),
                         [(0, 0, 0), (0, 1, 0), (1, 0, 0), (2, 0, 0)])
        with self.assertRaises(NotNilpotent):
            ideal.monomials_outside([2])

    def test_extend_field(self):
        f2 = FieldCtx(2)
        ring = PolynomialRing(f2, ("x", "y"))
        ideal = BinomialIdeal(ring, [ring.gen(0) - ring.gen(1)])
        lifted = ideal.extend_field(FieldCtx(2, 2))
        self.assertEqual(lifted.ring.field, FieldCtx(2, 2))
        self.assertEqual(lifted.generator_strings(), ["x + y"])


class TestMonomialHelpers(unittest.TestCase):
    """Test cases for minimal monomials and redundancy pruning"""

    def test_minimal_monomials(self):
        result = minimal_monomials([(2, 1), (1, 0), (0, 3), (1, 0), (0, 4)])
        self.assertEqual(result, [(1, 0), (0, 3)])

    def test_prune_redundant_drops_later_duplicates(self):
        ring = PolynomialRing(FieldCtx(3), ("x", "y"))
        x, y = ring.gen(0), ring.gen(1)
        ideals = [
            BinomialIdeal(ring, [x]),
            BinomialIdeal(ring, [y]),
            BinomialIdeal(ring, [x]),
            BinomialIdeal(ring, [x, y]),
        ]
        self.assertEqual(prune_redundant(ideals), [0, 1])


class TestIdealProperties(unittest.TestCase):
    """Randomised checks of the engine on binomial ideals in GF(5)[x, y, z]"""

    def setUp(self):
        self.rng = random.Random(909)
        self.ring = PolynomialRing(FieldCtx(5), ("x", "y", "z"))

    def random_monomial(self, max_exp=3):
        return tuple(self.rng.randint(0, max_exp) for _ in range(self.ring.nvars))

    def random_binomial_ideal(self):
        gens = []
        for _ in range(self.rng.randint(1, 3)):
            g = self.ring.monomial(self.random_monomial())
            if self.rng.random() < 0.8:
                g = g - self.ring.monomial(self.random_monomial(), self.rng.randint(1, 4))
            gens.append(g)
        return BinomialIdeal(self.ring, gens)

    def test_s_polynomials_reduce_to_zero(self):
        one = self.ring.field.one
        for _ in range(PROPERTY_CASES):
            ideal = self.random_binomial_ideal()
            basis = ideal.groebner()
            with self.subTest(ideal=[str(g) for g in ideal.generators]):
                self.assertTrue(all(ideal.member(g) for g in ideal.generators))
                leads = [g.leading_monomial() for g in basis]
                for g, lead in zip(basis, leads):
                    self.assertTrue(g.leading_coefficient().is_one)
                    others = [m for m in leads if m != lead]
                    self.assertFalse(any(monomial_divides(m, t) for m in others for t in g.terms))
                for i in range(len(basis)):
                    for j in range(i + 1, len(basis)):
                        lcm = monomial_lcm(leads[i], leads[j])
                        s = basis[i].mul_term(monomial_div(lcm, leads[i]), one) - \
                            basis[j].mul_term(monomial_div(lcm, leads[j]), one)
                        self.assertTrue(ideal.normal_form(s).is_zero)

    def test_monomial_quotient_times_monomial_lies_in_ideal(self):
        """(I : m) * m is inside I, and I is inside (I : m)"""
        one = self.ring.field.one
        for _ in range(PROPERTY_CASES):
            ideal = self.random_binomial_ideal()
            m = self.random_monomial(max_exp=2)
            colon = ideal.quotient_monomial(m)
            with self.subTest(ideal=[str(g) for g in ideal.generators], m=m):
                self.assertTrue(colon.contains(ideal))
                for g in colon.generators:
                    self.assertTrue(ideal.member(g.mul_term(m, one)))

    def test_intersection_spot_checks(self):
        for _ in range(PROPERTY_CASES):
            a = self.random_binomial_ideal()
            b = self.random_binomial_ideal()
            meet = a.intersect(b)
            with self.subTest(a=[str(g) for g in a.generators], b=[str(g) for g in b.generators]):
                for g in meet.generators:
                    self.assertTrue(a.member(g))
                    self.assertTrue(b.member(g))
                for f in a.generators:
                    for g in b.generators:
                        self.assertTrue(meet.member(f * g))
                for f in a.generators:
                    self.assertEqual(meet.member(f), b.member(f))


if __name__ == '__main__':
    unittest.main()
