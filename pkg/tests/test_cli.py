"""
Unit Tests for the Command Line
===============================

Runs loopworks subcommands in a temporary directory and checks exit codes,
written files and report output.
"""

import sys
import os
import io
import json
import tempfile
import unittest
from contextlib import redirect_stdout
from unittest import mock

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.cli import RunConfig, main, run
from src.constructions import cyclic_group
from src.decision import decide_weak, parse_certificate, verify_certificate
from src.errors import ConfigError
from src.limits import EngineLimits
from src.loop_core import read_table, write_table
from src.reports import STRUCTURED, emit_report, to_document
from src.subloops import all_subloops, strong_lagrange
from loop_corpus import involution_quintics, involutions, s3, three_cycle_subgroup


def _main(*argv):
    out = io.StringIO()
    with redirect_stdout(out):
        code = main(list(argv))
    return code, out.getvalue()


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp, name)


class TestBuildAndInspect(CliTestCase):

    def test_group_then_validate(self):
        code, _ = _main("group", "cyclic", "6", "-o", self.path("z6.tbl"))
        self.assertEqual(code, 0)
        self.assertEqual(read_table(self.path("z6.tbl")).n, 6)
        code, out = _main("validate", self.path("z6.tbl"), "--format", "structured")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out), {"kind": "validate", "order": 6, "valid": True})

    def test_props_structured_is_deterministic(self):
        _main("group", "symmetric", "3", "-o", self.path("s3.tbl"))
        first = _main("props", self.path("s3.tbl"), "--format", "structured")
        second = _main("props", self.path("s3.tbl"), "--format", "structured", "--threads", "3")
        self.assertEqual(first, second)
        doc = json.loads(first[1])
        self.assertTrue(doc["flags"]["associative"])
        self.assertFalse(doc["flags"]["commutative"])
        self.assertEqual(doc["parameters"]["derivedLength"], 2)

    def test_props_text(self):
        _main("group", "quaternion", "-o", self.path("q8.tbl"))
        code, out = _main("props", self.path("q8.tbl"), "--skip-lagrange")
        self.assertEqual(code, 0)
        self.assertIn("LOOP PROPERTIES", out)
        self.assertIn("weakLagrange", out)

    def test_subloops_with_lattice(self):
        _main("group", "cyclic", "6", "-o", self.path("z6.tbl"))
        code, out = _main("subloops", self.path("z6.tbl"), "--lattice", "--format", "structured")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        self.assertEqual(doc["count"], 4)
        self.assertIn([1, 3], doc["containment"])

    def test_product_and_chein(self):
        _main("group", "cyclic", "2", "-o", self.path("z2.tbl"))
        _main("group", "symmetric", "3", "-o", self.path("s3.tbl"))
        code, _ = _main("group", "product", self.path("z2.tbl"), self.path("s3.tbl"),
                        "-o", self.path("p.tbl"))
        self.assertEqual(code, 0)
        self.assertEqual(read_table(self.path("p.tbl")).n, 12)
        code, _ = _main("group", "chein", self.path("s3.tbl"), "-o", self.path("m.tbl"))
        self.assertEqual(code, 0)
        code, out = _main("props", self.path("m.tbl"), "--skip-lagrange", "--format", "structured")
        flags = json.loads(out)["flags"]
        self.assertTrue(flags["moufang"])
        self.assertFalse(flags["associative"])

    def test_census(self):
        code, out = _main("census", "4", "-o", self.path("c4"))
        self.assertEqual(code, 0)
        self.assertEqual(sorted(os.listdir(self.path("c4"))),
                         ["loop4_0.tbl", "loop4_1.tbl", "manifest.json"])
        with open(os.path.join(self.path("c4"), "manifest.json")) as f:
            self.assertEqual(json.load(f)["classCount"], 2)


class TestLagrangeCommand(CliTestCase):

    def test_failing_loop_exits_one(self):
        write_table(involution_quintics()[0], self.path("k.tbl"))
        cert_path = self.path("k.cert")
        code, out = _main("lagrange", self.path("k.tbl"), "--certificate", cert_path)
        self.assertEqual(code, 1)
        self.assertIn("WEAK LAGRANGE: FAILS", out)
        with open(cert_path) as f:
            cert = parse_certificate(f.read())
        self.assertTrue(verify_certificate(read_table(self.path("k.tbl")), cert))

    def test_order_ten(self):
        code, _ = _main("search-order10", "-o", self.path("l10.tbl"))
        self.assertEqual(code, 0)
        self.assertEqual(_main("lagrange", self.path("l10.tbl"))[0], 0)
        code, out = _main("lagrange", self.path("l10.tbl"), "--strong", "--format", "structured")
        self.assertEqual(code, 1)
        doc = json.loads(out)
        self.assertEqual(doc["conclusion"], "fails")
        self.assertEqual([len(w) for w in doc["witness"]], [2, 5])


class TestQuotientCommand(CliTestCase):

    def test_s3_by_a3(self):
        write_table(s3(), self.path("s3.tbl"))
        normal = ",".join(str(x) for x in three_cycle_subgroup(s3()).elements)
        code, _ = _main("quotient", self.path("s3.tbl"), "--normal", normal, "-o", self.path("q.tbl"))
        self.assertEqual(code, 0)
        self.assertEqual(read_table(self.path("q.tbl")).n, 2)
        with open(self.path("q.tbl") + ".cosets") as f:
            lines = f.read().splitlines()
        self.assertEqual(len(lines), 6)
        self.assertEqual(lines[0], "0 0")

    def test_not_normal_exits_two(self):
        write_table(s3(), self.path("s3.tbl"))
        t = involutions(s3())[0]
        code, _ = _main("quotient", self.path("s3.tbl"), "--normal", f"0,{t}", "-o", self.path("q.tbl"))
        self.assertEqual(code, 2)
        self.assertFalse(os.path.exists(self.path("q.tbl")))


class TestExitCodes(CliTestCase):

    def test_malformed_table(self):
        with open(self.path("bad.tbl"), "w") as f:
            f.write("2\n0 1\n0 1\n")
        self.assertEqual(_main("validate", self.path("bad.tbl"))[0], 2)

    def test_missing_file(self):
        self.assertEqual(_main("validate", self.path("missing.tbl"))[0], 2)

    def test_subloop_cap(self):
        _main("group", "cyclic", "6", "-o", self.path("z6.tbl"))
        self.assertEqual(_main("subloops", self.path("z6.tbl"), "--max-subloops", "1")[0], 3)

    def test_paige_limits(self):
        self.assertEqual(_main("paige", "4", "-o", self.path("m4.tbl"))[0], 3)
        self.assertEqual(_main("paige", "6", "-o", self.path("m6.tbl"))[0], 2)

    def test_chein_of_non_group(self):
        write_table(involution_quintics()[0], self.path("k.tbl"))
        self.assertEqual(_main("group", "chein", self.path("k.tbl"), "-o", self.path("m.tbl"))[0], 2)

    def test_group_arguments(self):
        self.assertEqual(_main("group", "cyclic", "-o", self.path("z.tbl"))[0], 2)
        self.assertEqual(_main("group", "cyclic", "six", "-o", self.path("z.tbl"))[0], 2)

    def test_bad_environment(self):
        _main("group", "cyclic", "3", "-o", self.path("z3.tbl"))
        with mock.patch.dict(os.environ, {"LOOPWORKS_THREADS": "0"}):
            self.assertEqual(_main("validate", self.path("z3.tbl"))[0], 2)
        with mock.patch.dict(os.environ, {"LOOPWORKS_MAX_SUBLOOPS": "lots"}):
            self.assertEqual(_main("validate", self.path("z3.tbl"))[0], 2)


class TestRunConfig(unittest.TestCase):

    def test_unknown_format(self):
        with self.assertRaises(ConfigError):
            RunConfig("validate", fmt="xml")

    def test_environment_and_overrides(self):
        with mock.patch.dict(os.environ, {"LOOPWORKS_MAX_QUEUE": "50", "LOOPWORKS_THREADS": "2"}):
            limits = EngineLimits.from_env(threads=4, max_subloops=None)
        self.assertEqual(limits.max_queue, 50)
        self.assertEqual(limits.threads, 4)

    def test_run_writes_to_stream(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "z5.tbl")
            out = io.StringIO()
            code = run(RunConfig("group", {"kind": "cyclic", "params": ["5"], "output": path}), out)
            self.assertEqual(code, 0)
            self.assertIn(path, out.getvalue())


class TestReports(unittest.TestCase):

    def test_structured_is_stable(self):
        lattice = all_subloops(cyclic_group(6))
        first = emit_report(lattice, STRUCTURED, lattice_edges=True)
        self.assertEqual(first, emit_report(all_subloops(cyclic_group(6)), STRUCTURED, lattice_edges=True))
        self.assertEqual(json.loads(first)["subloops"], [[0], [0, 3], [0, 2, 4], [0, 1, 2, 3, 4, 5]])

    def test_certificate_text(self):
        text = emit_report(decide_weak(involution_quintics()[0]))
        lines = text.splitlines()
        self.assertEqual(lines[0], "WEAK LAGRANGE: FAILS")
        self.assertEqual(lines[2], "certificate weak")

    def test_lagrange_result_document(self):
        doc = to_document(strong_lagrange(s3()))
        self.assertEqual(doc, {"kind": "lagrange", "property": "strong",
                               "conclusion": "holds", "witness": []})

    def test_unknown_objects(self):
        with self.assertRaises(TypeError):
            to_document(42)
        with self.assertRaises(ValueError):
            emit_report({"kind": "x"}, "xml")


if __name__ == '__main__':
    unittest.main(verbosity=2)
