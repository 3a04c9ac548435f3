#!/usr/bin/env python3
"""
Unit tests for binomdec partial characters
"""

import random
import unittest
import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))
from binomdec.bideal import PolynomialRing, intersect_all
from binomdec.character import PartialCharacter, extensions, lattice_ideal, saturations
from binomdec.exceptions import FieldMismatch, InconsistentCharacter, MissingRoots
from binomdec.field import FieldCtx, embedding
from binomdec.lattice import Lattice, quotient, sat_prime_p

LATTICE_CASES = int(os.environ.get("BINOMDEC_LATTICE_CASES", "25"))


class TestPartialCharacter(unittest.TestCase):
    """Test cases for building and evaluating characters"""

    def setUp(self):
        self.f7 = FieldCtx(7)

    def test_from_generators_reduces_to_hnf(self):
        """Consistent values on (1) and (2) give a character on Z"""
        rho = PartialCharacter.from_generators((0,), [((1,), 2), ((2,), 4)], self.f7)
        self.assertEqual(rho.lattice.rank, 1)
        self.assertEqual(rho.evaluate((1,)), self.f7.element(2))
        self.assertEqual(rho.evaluate((3,)), self.f7.one)

    def test_inconsistent_values(self):
        """2^2 is 4, not 3"""
        with self.assertRaises(InconsistentCharacter):
            PartialCharacter.from_generators((0,), [((1,), 2), ((2,), 3)], self.f7)

    def test_zero_value_rejected(self):
        lattice = Lattice.full((0,))
        with self.assertRaises(InconsistentCharacter):
            PartialCharacter(lattice, (self.f7.zero,), self.f7)

    def test_value_field_must_match(self):
        lattice = Lattice.full((0,))
        with self.assertRaises(FieldMismatch):
            PartialCharacter(lattice, (FieldCtx(5).one,), self.f7)

    def test_trivial_character(self):
        rho = PartialCharacter.trivial(Lattice.from_generators((0, 1), [(1, -1)]), self.f7)
        self.assertTrue(rho.evaluate((3, -3)).is_one)

    def test_empty_character(self):
        rho = PartialCharacter.from_generators((0, 1), [], self.f7)
        self.assertEqual(rho.lattice.rank, 0)
        self.assertTrue(rho.evaluate((0, 0)).is_one)

    def test_with_field(self):
        """Values move into an extension through the embedding"""
        f5 = FieldCtx(5)
        rho = PartialCharacter.from_generators((0,), [((1,), 2)], f5)
        lifted = rho.with_field(FieldCtx(5, 2))
        self.assertEqual(lifted.field, FieldCtx(5, 2))
        self.assertTrue(lifted.values[0].in_prime_field)
        self.assertIs(rho.with_field(f5), rho)


class TestLatticeIdeal(unittest.TestCase):
    """Test cases for the lattice ideal of a character"""

    def test_rank_one(self):
        """rho(1, -1) = 3 gives <x - 3*y>"""
        f7 = FieldCtx(7)
        ring = PolynomialRing(f7, ("x", "y"))
        rho = PartialCharacter.from_generators((0, 1), [((1, -1), 3)], f7)
        ideal = lattice_ideal(rho, ring)
        x, y = ring.gen(0), ring.gen(1)
        self.assertTrue(ideal.member(x - y * f7.element(3)))
        self.assertFalse(ideal.member(x - y))

    def test_rank_two_is_saturated(self):
        """Rank two lattices are saturated by the ambient variables"""
        f3 = FieldCtx(3)
        ring = PolynomialRing(f3, ("x", "y"))
        rho = PartialCharacter.from_generators((0, 1), [((1, -1), 1), ((0, 2), 1)], f3)
        ideal = lattice_ideal(rho, ring)
        x, y = ring.gen(0), ring.gen(1)
        self.assertTrue(ideal.member(x - y))
        self.assertTrue(ideal.member(y * y - ring.one))
        self.assertFalse(ideal.member(y - ring.one))

    def test_field_mismatch(self):
        rho = PartialCharacter.from_generators((0,), [((1,), 1)], FieldCtx(7))
        with self.assertRaises(FieldMismatch):
            lattice_ideal(rho, PolynomialRing(FieldCtx(5), ("x",)))


class TestExtensions(unittest.TestCase):
    """Test cases for extending characters to larger lattices"""

    def test_cube_roots_in_f7(self):
        """x^3 = 1 extends three ways over GF(7)"""
        f7 = FieldCtx(7)
        rho = PartialCharacter.from_generators((0,), [((3,), 1)], f7)
        result = extensions(rho, Lattice.full((0,)))
        self.assertEqual([chi.values[0].coeffs[0] for chi in result], [1, 2, 4])

    def test_missing_roots_without_extension(self):
        f5 = FieldCtx(5)
        rho = PartialCharacter.from_generators((0,), [((3,), 1)], f5)
        with self.assertRaises(MissingRoots):
            extensions(rho, Lattice.full((0,)))

    def test_roots_in_extension_field(self):
        """With extension allowed the values live in GF(25)"""
        f5 = FieldCtx(5)
        rho = PartialCharacter.from_generators((0,), [((3,), 1)], f5)
        result = extensions(rho, Lattice.full((0,)), allow_extension=True)
        self.assertEqual(len(result), 3)
        self.assertTrue(all(chi.field == FieldCtx(5, 2) for chi in result))

    def test_same_lattice(self):
        rho = PartialCharacter.from_generators((0,), [((2,), 3)], FieldCtx(7))
        self.assertEqual(extensions(rho, rho.lattice), [rho])


class TestSaturations(unittest.TestCase):
    """Test cases for saturation pairs"""

    def test_prime_to_p_index_branches(self):
        """Over GF(7) the index 3 part gives three pairs"""
        f7 = FieldCtx(7)
        rho = PartialCharacter.from_generators((0,), [((3,), 1)], f7)
        pairs = saturations(rho)
        self.assertEqual(len(pairs), 3)
        for pair in pairs:
            self.assertEqual(pair.partial.lattice.rank, 1)
            self.assertEqual(pair.saturated.values, pair.partial.values)

    def test_p_power_index_is_unique(self):
        """Over GF(2), x^2 = 1 has the single root 1"""
        f2 = FieldCtx(2)
        rho = PartialCharacter.from_generators((0,), [((2,), 1)], f2)
        pairs = saturations(rho)
        self.assertEqual(len(pairs), 1)
        self.assertEqual(pairs[0].partial, rho)
        self.assertTrue(pairs[0].saturated.evaluate((1,)).is_one)
        self.assertTrue(pairs[0].saturated.lattice.member((1,)))

    def test_mixed_index(self):
        """Index 6 over GF(4): three branches, each with a unique 2-part"""
        f4 = FieldCtx(2, 2)
        rho = PartialCharacter.from_generators((0,), [((6,), 1)], f4)
        pairs = saturations(rho)
        self.assertEqual(len(pairs), 3)
        self.assertTrue(all(pair.partial.lattice.member((2,)) for pair in pairs))
        self.assertEqual(len({pair.saturated.key() for pair in pairs}), 3)


class TestCharacterProperties(unittest.TestCase):
    """Randomised checks of extensions to Sat'_p(L) on lattices in Z^2"""

    def setUp(self):
        self.rng = random.Random(4242)

    def random_character(self, bound):
        """Character with random nonzero values on a random lattice, or None when the index is too large"""
        rng = self.rng
        vectors = [tuple(rng.randint(-bound, bound) for _ in range(2)) for _ in range(rng.randint(1, 2))]
        lattice = Lattice.from_generators((0, 1), vectors)
        if not lattice.rank:
            return None
        field = FieldCtx(rng.choice([2, 3, 5, 7]))
        upper = sat_prime_p(lattice, field.p)
        if quotient(lattice, upper).order > 6:
            return None
        values = tuple(field.element(rng.randint(1, field.p - 1)) for _ in lattice.basis)
        return PartialCharacter(lattice, values, field), upper

    def test_extension_count_is_prime_to_p_index(self):
        checked = 0
        while checked < LATTICE_CASES:
            drawn = self.random_character(bound=4)
            if drawn is None:
                continue
            checked += 1
            rho, upper = drawn
            exts = extensions(rho, upper, allow_extension=True)
            with self.subTest(rho=str(rho)):
                self.assertEqual(len(exts), quotient(rho.lattice, upper).order)
                self.assertEqual(len({ext.key() for ext in exts}), len(exts))
                self.assertEqual(len(saturations(rho, allow_extension=True)), len(exts))
                emb = embedding(rho.field, exts[0].field)
                for ext in exts:
                    self.assertTrue(ext.lattice.contains(upper) and upper.contains(ext.lattice))
                    for b, value in zip(rho.lattice.basis, rho.values):
                        self.assertEqual(ext.evaluate(b), emb(value))

    def test_lattice_ideal_is_intersection_of_extensions(self):
        """I(rho) is the intersection of I(rho_l) over the extensions rho_l to Sat'_p(L)"""
        checked = 0
        while checked < max(3, LATTICE_CASES // 5):
            drawn = self.random_character(bound=3)
            if drawn is None:
                continue
            checked += 1
            rho, upper = drawn
            exts = extensions(rho, upper, allow_extension=True)
            ring = PolynomialRing(exts[0].field, ("x", "y"))
            with self.subTest(rho=str(rho)):
                expected = lattice_ideal(rho.with_field(ring.field), ring)
                pieces = [lattice_ideal(ext, ring) for ext in exts]
                for piece in pieces:
                    self.assertTrue(piece.contains(expected))
                self.assertTrue(intersect_all(pieces).equals(expected))


if __name__ == '__main__':
    unittest.main()
