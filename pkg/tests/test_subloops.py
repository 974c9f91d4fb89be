"""
Unit Tests for Subloop Enumeration
==================================

Closure, the lattice search, its powerset oracle, checkpoints, caps and the
two Lagrange checks.
"""

import sys
import os
import json
import tempfile
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.census import random_loop
from src.constructions import cyclic_group, direct_product
from src.errors import CapacityError, ConfigError, NotASubloop, OracleBoundExceeded
from src.limits import EngineLimits
from src.subloops import (
    SubsetMask,
    all_subloops,
    brute_force_subloops,
    closure,
    is_subloop,
    strong_lagrange,
    subloop_table,
    weak_lagrange,
)
from loop_corpus import SLOW, census, involution_quintics, order10_loop, s3, three_cycle_subgroup


def _sets(lattice):
    return [s.elements for s in lattice]


class TestSubsetMask(unittest.TestCase):

    def test_elements_and_order(self):
        s = SubsetMask.from_elements([4, 0, 2], 6)
        self.assertEqual(s.elements, (0, 2, 4))
        self.assertEqual(s.order, 3)
        self.assertIn(2, s)
        self.assertNotIn(1, s)

    def test_canonical_order(self):
        a = SubsetMask.from_elements([0, 3], 6)
        b = SubsetMask.from_elements([0, 2, 4], 6)
        self.assertLess(a.sort_key, b.sort_key)

    def test_out_of_range(self):
        with self.assertRaises(ValueError):
            SubsetMask.from_elements([0, 6], 6)


class TestClosure(unittest.TestCase):

    def test_cyclic_closure(self):
        Z6 = cyclic_group(6)
        self.assertEqual(closure(Z6, [2]).elements, (0, 2, 4))
        self.assertEqual(closure(Z6, [1]).order, 6)
        self.assertEqual(closure(Z6, []).elements, (0,))

    def test_is_subloop(self):
        Z6 = cyclic_group(6)
        self.assertTrue(is_subloop(Z6, [0, 3]))
        self.assertFalse(is_subloop(Z6, [0, 1]))
        self.assertFalse(is_subloop(Z6, [3]))

    def test_closure_is_subloop(self):
        L = random_loop(9, seed=4)
        for x in range(L.n):
            self.assertTrue(is_subloop(L, closure(L, [x])))


class TestSubloopTable(unittest.TestCase):

    def test_three_cycles_of_s3(self):
        S3 = s3()
        A3 = three_cycle_subgroup(S3)
        sub, elems = subloop_table(S3, A3)
        self.assertEqual(sub.n, 3)
        self.assertEqual(sub.identity, 0)
        self.assertEqual(tuple(int(x) for x in elems), A3.elements)
        for i in range(3):
            for j in range(3):
                self.assertEqual(elems[sub.mul(i, j)], S3.mul(int(elems[i]), int(elems[j])))

    def test_rejects_non_subloop(self):
        with self.assertRaises(NotASubloop):
            subloop_table(cyclic_group(6), [0, 1])


class TestAllSubloops(unittest.TestCase):
    """Lattice enumeration against known groups and the powerset oracle."""

    def test_cyclic_six(self):
        lattice = all_subloops(cyclic_group(6))
        self.assertEqual(_sets(lattice), [(0,), (0, 3), (0, 2, 4), (0, 1, 2, 3, 4, 5)])
        self.assertEqual(lattice.orders(), [1, 2, 3, 6])

    def test_containment(self):
        lattice = all_subloops(cyclic_group(6))
        self.assertEqual(lattice.containment, [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)])

    def test_s3(self):
        lattice = all_subloops(s3())
        self.assertEqual(sorted(lattice.orders()), [1, 2, 2, 2, 3, 6])

    def test_klein_four(self):
        V = direct_product(cyclic_group(2), cyclic_group(2))
        self.assertEqual(len(all_subloops(V)), 5)

    def test_every_member_is_a_subloop(self):
        L = order10_loop()
        for H in all_subloops(L):
            self.assertTrue(is_subloop(L, H))
            self.assertIn(L.identity, H)

    def test_oracle_on_census(self):
        orders = range(1, 7) if SLOW else range(1, 6)
        for n in orders:
            for L in census(n):
                self.assertEqual(_sets(all_subloops(L)), _sets(brute_force_subloops(L)))

    def test_oracle_on_random_loops(self):
        for seed in range(100):
            L = random_loop(7 + seed % 6, seed=seed)
            self.assertEqual(_sets(all_subloops(L)), _sets(brute_force_subloops(L)),
                             f"seed {seed}")

    def test_threads_do_not_change_result(self):
        L = random_loop(12, seed=11)
        self.assertEqual(_sets(all_subloops(L)),
                         _sets(all_subloops(L, EngineLimits(threads=4))))

    def test_oracle_bound(self):
        with self.assertRaises(OracleBoundExceeded):
            brute_force_subloops(cyclic_group(13))


class TestCaps(unittest.TestCase):

    def test_subloop_cap(self):
        with self.assertRaises(CapacityError) as ctx:
            all_subloops(cyclic_group(6), EngineLimits(max_subloops=2))
        self.assertEqual(ctx.exception.what, "subloop count")

    def test_queue_cap(self):
        V = direct_product(cyclic_group(2), cyclic_group(2))
        with self.assertRaises(CapacityError) as ctx:
            all_subloops(V, EngineLimits(max_queue=1))
        self.assertEqual(ctx.exception.what, "queue size")

    def test_caps_must_be_positive(self):
        with self.assertRaises(ConfigError):
            EngineLimits(max_subloops=0)


class TestCheckpoint(unittest.TestCase):

    def test_checkpoint_written_and_resumed(self):
        L = random_loop(10, seed=5)
        expected = _sets(all_subloops(L))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "state.json")
            self.assertEqual(_sets(all_subloops(L, checkpoint=path)), expected)
            with open(path) as f:
                data = json.load(f)
            self.assertEqual(data["digest"], L.digest)
            self.assertEqual(data["frontier"], [])
            self.assertEqual(_sets(all_subloops(L, checkpoint=path)), expected)

    def test_checkpoint_for_other_table(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "state.json")
            all_subloops(cyclic_group(6), checkpoint=path)
            with self.assertRaises(ConfigError):
                all_subloops(direct_product(cyclic_group(2), cyclic_group(3)), checkpoint=path)


class TestLagrange(unittest.TestCase):
    """Weak and strong Lagrange checks."""

    def test_groups_hold(self):
        for L in (cyclic_group(6), s3(), direct_product(cyclic_group(2), cyclic_group(4))):
            self.assertTrue(weak_lagrange(L).holds)
            self.assertTrue(strong_lagrange(L).holds)

    def test_order_five_with_involution_fails(self):
        quintics = involution_quintics()
        self.assertEqual(len(quintics), 4)
        for L in quintics:
            result = weak_lagrange(L)
            self.assertFalse(result.holds)
            (K,) = result.witness
            self.assertEqual(K.order, 2)
            self.assertTrue(is_subloop(L, K))

    def test_census_five_without_involution_holds(self):
        holding = [L for L in census(5) if weak_lagrange(L).holds]
        self.assertEqual(len(holding), 2)

    def test_order_ten_weak_not_strong(self):
        L = order10_loop()
        self.assertTrue(weak_lagrange(L).holds)
        result = strong_lagrange(L)
        self.assertFalse(result.holds)
        K, H = result.witness
        self.assertTrue(K.issubset(H))
        self.assertEqual((K.order, H.order), (2, 5))
        self.assertEqual(result.witness_elements(), [list(K.elements), list(H.elements)])

    def test_strong_implies_weak(self):
        for seed in range(30):
            L = random_loop(8 + seed % 4, seed=seed)
            lattice = all_subloops(L)
            if strong_lagrange(L, lattice).holds:
                self.assertTrue(weak_lagrange(L, lattice).holds)

    def test_witness_is_canonical(self):
        L = involution_quintics()[0]
        orders_two = [H for H in all_subloops(L) if H.order == 2]
        self.assertEqual(weak_lagrange(L).witness[0].elements, orders_two[0].elements)


if __name__ == '__main__':
    unittest.main(verbosity=2)
