"""
Unit Tests for Loop Core
========================

Validation, identity normalization, the .tbl format, divisions and
translations.
"""

import sys
import os
import tempfile
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.errors import CapacityError, NoIdentity, NotLatin, TableSyntaxError
from src.loop_core import (
    Permutation,
    inverse_array,
    left_div,
    left_translation,
    mul,
    normalize_identity,
    parse_table,
    read_table,
    right_div,
    right_translation,
    serialize_table,
    two_sided_inverse,
    validate,
    write_table,
)
from src.census import random_loop
from src.constructions import cyclic_group, symmetric_group


Z3_TEXT = """\
# cyclic group of order 3
3
0 1 2
1 2 0

2 0 1
"""


class TestValidate(unittest.TestCase):
    """Loop axioms."""

    def test_cyclic_group(self):
        L = validate([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
        self.assertEqual(L.n, 3)
        self.assertEqual(L.identity, 0)
        self.assertIsNone(L.relabeling)

    def test_repeated_row_entry(self):
        with self.assertRaises(NotLatin) as ctx:
            validate([[0, 1, 2], [1, 1, 0], [2, 0, 1]])
        self.assertIn("Row 1", str(ctx.exception))

    def test_repeated_column_entry(self):
        with self.assertRaises(NotLatin) as ctx:
            validate([[0, 1], [0, 1]])
        self.assertIn("Column 0", str(ctx.exception))

    def test_entry_out_of_range(self):
        with self.assertRaises(NotLatin):
            validate([[0, 1], [1, 2]])

    def test_not_square(self):
        with self.assertRaises(NotLatin):
            validate([[0, 1, 2], [1, 2, 0]])

    def test_latin_square_without_identity(self):
        # x·y = -x-y mod 3
        with self.assertRaises(NoIdentity):
            validate([[0, 2, 1], [2, 1, 0], [1, 0, 2]])

    def test_identity_not_zero(self):
        # x·y = x+y+1 mod 3 has identity 2
        L = validate([[1, 2, 0], [2, 0, 1], [0, 1, 2]])
        self.assertEqual(L.identity, 2)

    def test_order_cap(self):
        with self.assertRaises(CapacityError) as ctx:
            validate(np.zeros((2049, 2049), dtype=np.int64))
        self.assertEqual(ctx.exception.cap, 2048)
        self.assertEqual(ctx.exception.exit_code, 3)


class TestNormalizeIdentity(unittest.TestCase):

    def test_relabels_identity_to_zero(self):
        L = normalize_identity(validate([[1, 2, 0], [2, 0, 1], [0, 1, 2]]))
        self.assertEqual(L.identity, 0)
        self.assertEqual(L.relabeling, (0, 2))
        np.testing.assert_array_equal(L.mul_table[0], np.arange(3))
        np.testing.assert_array_equal(L.mul_table[:, 0], np.arange(3))
        validate(L.mul_table)

    def test_normalized_table_unchanged(self):
        L = cyclic_group(4)
        self.assertIs(normalize_identity(L), L)


class TestTableFormat(unittest.TestCase):
    """The .tbl text format."""

    def test_parse_skips_comments_and_blank_lines(self):
        L = parse_table(Z3_TEXT)
        self.assertEqual(L, cyclic_group(3))

    def test_serialize_then_parse(self):
        L = symmetric_group(3)
        self.assertEqual(parse_table(serialize_table(L)), L)

    def test_serialize_relabels_identity(self):
        L = validate([[1, 0], [0, 1]])
        self.assertEqual(L.identity, 1)
        text = serialize_table(L)
        self.assertEqual(text, "2\n0 1\n1 0")
        self.assertEqual(parse_table(text), normalize_identity(L))
        M = validate([[1, 2, 0], [2, 0, 1], [0, 1, 2]])
        self.assertEqual(parse_table(serialize_table(M)), normalize_identity(M))

    def test_write_table_relabels_identity(self):
        L = validate([[1, 2, 0], [2, 0, 1], [0, 1, 2]])
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "z3.tbl")
            write_table(L, path)
            self.assertEqual(read_table(path).identity, 0)
            self.assertEqual(read_table(path), normalize_identity(L))

    def test_parse_normalizes_identity(self):
        L = parse_table("3\n1 2 0\n2 0 1\n0 1 2\n")
        self.assertEqual(L.identity, 0)
        self.assertEqual(L.relabeling, (0, 2))

    def test_bad_header(self):
        with self.assertRaises(TableSyntaxError) as ctx:
            parse_table("three\n0 1 2\n")
        self.assertIn("Line 1", str(ctx.exception))

    def test_wrong_entry_count(self):
        with self.assertRaises(TableSyntaxError) as ctx:
            parse_table("2\n0 1\n1\n")
        self.assertIn("Line 3", str(ctx.exception))

    def test_non_integer_entry(self):
        with self.assertRaises(TableSyntaxError):
            parse_table("2\n0 1\n1 x\n")

    def test_missing_rows(self):
        with self.assertRaises(TableSyntaxError):
            parse_table("3\n0 1 2\n1 2 0\n")

    def test_empty_text(self):
        with self.assertRaises(TableSyntaxError):
            parse_table("# nothing here\n\n")

    def test_header_over_cap(self):
        with self.assertRaises(CapacityError):
            parse_table("5000\n")

    def test_semantic_errors_pass_through(self):
        with self.assertRaises(NotLatin):
            parse_table("2\n0 1\n0 1\n")

    def test_write_and_read_file(self):
        L = symmetric_group(3)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "s3.tbl")
            write_table(L, path, ["S3"])
            with open(path) as f:
                self.assertTrue(f.readline().startswith("# S3"))
            self.assertEqual(read_table(path), L)


class TestOperations(unittest.TestCase):
    """Products, divisions and inverses."""

    def setUp(self):
        self.loops = [cyclic_group(5), symmetric_group(3), random_loop(7, seed=3)]

    def test_division_laws(self):
        for L in self.loops:
            for x in range(L.n):
                for y in range(L.n):
                    self.assertEqual(mul(L, x, left_div(L, x, y)), y)
                    self.assertEqual(mul(L, right_div(L, x, y), x), y)
                    self.assertEqual(left_div(L, x, mul(L, x, y)), y)
                    self.assertEqual(right_div(L, x, mul(L, y, x)), y)

    def test_cyclic_divisions(self):
        Z5 = cyclic_group(5)
        self.assertEqual(left_div(Z5, 2, 4), 2)
        self.assertEqual(right_div(Z5, 4, 1), 2)

    def test_group_inverses(self):
        S3 = symmetric_group(3)
        for x in range(S3.n):
            y = two_sided_inverse(S3, x)
            self.assertEqual(mul(S3, x, y), S3.identity)
            self.assertEqual(mul(S3, y, x), S3.identity)

    def test_inverse_array_consistent(self):
        for L in self.loops:
            inv = inverse_array(L)
            for x in range(L.n):
                if inv[x] >= 0:
                    self.assertEqual(mul(L, x, int(inv[x])), L.identity)
                    self.assertEqual(mul(L, int(inv[x]), x), L.identity)
                else:
                    self.assertIsNone(two_sided_inverse(L, x))

    def test_translations(self):
        L = random_loop(6, seed=1)
        for x in range(L.n):
            lt, rt = left_translation(L, x), right_translation(L, x)
            for y in range(L.n):
                self.assertEqual(lt(y), mul(L, x, y))
                self.assertEqual(rt(y), mul(L, y, x))
        self.assertTrue(left_translation(L, L.identity).is_identity)

    def test_digest_tracks_content(self):
        self.assertEqual(cyclic_group(4).digest, cyclic_group(4).digest)
        klein = validate([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])
        self.assertNotEqual(cyclic_group(4).digest, klein.digest)


class TestPermutation(unittest.TestCase):

    def test_composition_is_function_notation(self):
        p = Permutation([1, 2, 0])
        q = Permutation([0, 2, 1])
        self.assertEqual((p * q)(1), p(q(1)))

    def test_inverse(self):
        p = Permutation([2, 0, 3, 1])
        self.assertTrue((p * p.inverse()).is_identity)

    def test_cycles(self):
        self.assertEqual(Permutation([1, 2, 0, 3]).cycles(), [(0, 1, 2)])
        self.assertEqual(Permutation.identity(4).cycles(), [])

    def test_rejects_non_bijection(self):
        with self.assertRaises(ValueError):
            Permutation([0, 0, 1])


if __name__ == '__main__':
    unittest.main(verbosity=2)
