"""
Unit Tests for Normal Structure
===============================

Inner mapping generators, normality, normal closures, quotients, simplicity,
center and nucleus.
"""

import sys
import os
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.census import random_loop
from src.constructions import alternating_group, cyclic_group, dihedral_group, quaternion_group
from src.errors import NotASubloop, NotNormal
from src.limits import EngineLimits
from src.loop_core import Permutation
from src.normality import (
    all_normal_subloops,
    center,
    inner_generators,
    is_normal,
    is_simple,
    minimal_normal_subloop,
    normal_closure,
    nucleus,
    quotient,
)
from src.subloops import SubsetMask, all_subloops, is_subloop
from src.varieties import is_associative, is_commutative
from loop_corpus import corpus, involution_quintics, involutions, order10_loop, s3, three_cycle_subgroup


class TestInnerGenerators(unittest.TestCase):

    def test_count_and_identity_fixed(self):
        L = random_loop(6, seed=2)
        gens = list(inner_generators(L))
        self.assertEqual(len(gens), 2 * 36 + 6)
        self.assertEqual(len(inner_generators(L)), 2 * 36 + 6)
        for p in gens:
            self.assertTrue(p.fixes(L.identity))

    def test_abelian_group_has_trivial_inner_maps(self):
        for p in inner_generators(cyclic_group(5)):
            self.assertTrue(p.is_identity)

    def test_group_inner_maps_are_conjugations(self):
        S3 = s3()
        T = S3.mul_table
        inv = [int(S3.left_div(x, S3.identity)) for x in range(S3.n)]
        gens = inner_generators(S3)
        for x in range(S3.n):
            expected = [T[inv[x], T[z, x]] for z in range(S3.n)]
            np.testing.assert_array_equal(gens.t_images()[x], expected)
            self.assertTrue(all(p.is_identity for p in map(Permutation, gens.l_images(x))))
            self.assertTrue(all(p.is_identity for p in map(Permutation, gens.r_images(x))))


class TestNormality(unittest.TestCase):

    def test_s3(self):
        S3 = s3()
        self.assertTrue(is_normal(S3, three_cycle_subgroup(S3)))
        t = involutions(S3)[0]
        self.assertFalse(is_normal(S3, [S3.identity, t]))
        self.assertTrue(is_normal(S3, range(S3.n)))
        self.assertTrue(is_normal(S3, [S3.identity]))

    def test_rejects_non_subloop(self):
        with self.assertRaises(NotASubloop):
            is_normal(cyclic_group(6), [0, 1])

    def test_abelian_groups_all_normal(self):
        Z = cyclic_group(8)
        self.assertEqual(len(all_normal_subloops(Z)), len(all_subloops(Z)))

    def test_quaternion_group_is_hamiltonian(self):
        Q8 = quaternion_group()
        self.assertFalse(is_commutative(Q8))
        self.assertEqual(len(all_subloops(Q8)), 6)
        self.assertEqual(len(all_normal_subloops(Q8)), 6)

    def test_normal_subloops_of_s3(self):
        self.assertEqual([N.order for N in all_normal_subloops(s3())], [1, 3, 6])

    def test_threads_agree(self):
        L = dihedral_group(6)
        for H in all_subloops(L):
            self.assertEqual(is_normal(L, H), is_normal(L, H, EngineLimits(threads=3)))


class TestNormalClosure(unittest.TestCase):

    def test_s3(self):
        S3 = s3()
        A3 = three_cycle_subgroup(S3)
        self.assertEqual(normal_closure(S3, involutions(S3)[:1]).order, 6)
        self.assertEqual(normal_closure(S3, [A3.elements[1]]), A3)

    def test_closure_is_smallest_normal_superset(self):
        for name, L in corpus().items():
            if L.n > 12:
                continue
            normals = all_normal_subloops(L)
            for x in range(L.n):
                N = normal_closure(L, [x])
                self.assertTrue(is_subloop(L, N), name)
                self.assertTrue(is_normal(L, N), name)
                containing = [M for M in normals if x in M]
                self.assertEqual(N, min(containing, key=lambda s: s.order), name)


class TestQuotient(unittest.TestCase):

    def test_s3_by_a3(self):
        S3 = s3()
        A3 = three_cycle_subgroup(S3)
        qmap = quotient(S3, A3)
        self.assertEqual(qmap.quotient.n, 2)
        self.assertEqual(len(qmap.cosets), 2)
        self.assertEqual(qmap.block_of[S3.identity], 0)
        self.assertEqual(qmap.cosets[0], A3)
        self.assertEqual(qmap.preimage(qmap.image(A3)), A3)

    def test_not_normal(self):
        S3 = s3()
        with self.assertRaises(NotNormal):
            quotient(S3, [S3.identity, involutions(S3)[0]])

    def test_quotient_is_homomorphic_image(self):
        D6 = dihedral_group(6)
        for N in all_normal_subloops(D6):
            qmap = quotient(D6, N)
            Q, b = qmap.quotient.mul_table, qmap.block_of
            T = D6.mul_table
            np.testing.assert_array_equal(b[T], Q[b[:, None], b[None, :]])
            self.assertEqual(qmap.quotient.n * N.order, D6.n)

    def test_order_ten_by_quintic(self):
        L = order10_loop()
        qmap = quotient(L, range(5))
        self.assertEqual(qmap.quotient, cyclic_group(2))


class TestSimplicity(unittest.TestCase):

    def test_prime_cyclic(self):
        self.assertTrue(is_simple(cyclic_group(5)))
        self.assertFalse(is_simple(cyclic_group(6)))
        self.assertFalse(is_simple(cyclic_group(1)))

    def test_alternating_five(self):
        self.assertTrue(is_simple(alternating_group(5)))

    def test_order_five_loops_are_simple(self):
        for L in involution_quintics():
            self.assertTrue(is_simple(L))
            self.assertIsNone(minimal_normal_subloop(L))

    def test_minimal_normal_subloop(self):
        self.assertEqual(minimal_normal_subloop(cyclic_group(6)).elements, (0, 3))
        self.assertEqual(minimal_normal_subloop(order10_loop()).elements, (0, 1, 2, 3, 4))
        self.assertIsNone(minimal_normal_subloop(cyclic_group(1)))

    def test_simple_iff_two_normal_subloops(self):
        loops = dict(corpus())
        for seed in range(6):
            loops[f"random{seed}"] = random_loop(6 + seed % 3, seed=seed)
        for name, L in loops.items():
            self.assertEqual(is_simple(L), len(all_normal_subloops(L)) == 2, name)


class TestCenterNucleus(unittest.TestCase):

    def test_groups(self):
        D4 = dihedral_group(4)
        self.assertEqual(center(D4).order, 2)
        self.assertEqual(nucleus(D4).order, 8)
        self.assertEqual(center(s3()).order, 1)
        self.assertEqual(center(cyclic_group(6)).order, 6)

    def test_center_inside_nucleus(self):
        for name, L in corpus().items():
            Z, Nuc = center(L), nucleus(L)
            self.assertTrue(Z.issubset(Nuc), name)
            self.assertTrue(is_subloop(L, Nuc), name)
            self.assertTrue(is_normal(L, Z), name)

    def test_nucleus_of_nonassociative_loop_is_proper(self):
        for L in involution_quintics():
            self.assertFalse(is_associative(L))
            self.assertLess(nucleus(L).order, L.n)
            self.assertIsInstance(center(L), SubsetMask)


if __name__ == '__main__':
    unittest.main(verbosity=2)
