#!/usr/bin/env python3
"""
Command-line tests
Runs kneser_morse.main() against a throw-away config.ini whose output,
cache and log directories live in a temporary directory.
"""

import io
import os
import sys
import tempfile
from contextlib import redirect_stdout

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import kneser_morse

CONFIG_TEMPLATE = """[Budgets]
FaceBudget = 2000000
NodeBudget = 200000
SnfThreshold = 200000
ChromaticBound = 40
IsomorphismBound = 64
SearchFanout = 4
MatchingFaceLimit = 200000

[Output]
OutputDir = {root}/out
CacheDir = {root}/cache
LogDir = {root}/logs

[Database]
ConnectionString =
"""


class Workspace:
    """A temporary directory with its own config.ini."""

    def __init__(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.root = self._tmp.name
        self.config = os.path.join(self.root, "config.ini")
        with open(self.config, "w", encoding="utf-8") as f:
            f.write(CONFIG_TEMPLATE.format(root=self.root))

    def run(self, *argv):
        """(exit code, captured stdout)"""
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = kneser_morse.main(list(argv) + ["--config", self.config, "--quiet"])
        return code, buffer.getvalue()

    def out(self, name):
        return os.path.join(self.root, "out", name)

    def close(self):
        self._tmp.cleanup()


def test_gen_writes_graph():
    ws = Workspace()
    try:
        code, _ = ws.run("gen", "--family", "sg", "-n", "2", "-k", "1")
        assert code == 0
        with open(ws.out("sg-n2-k1.graph"), encoding="utf-8") as f:
            assert f.readline().strip() == "graph sg n=2,k=1 5 5"
    finally:
        ws.close()


def test_export_round_trip():
    ws = Workspace()
    try:
        assert ws.run("gen", "--family", "e", "-n", "3")[0] == 0
        code, text = ws.run("export", "--in", ws.out("e-n3.graph"), "--kind", "graph")
        assert code == 0
        assert "identical=true" in text
    finally:
        ws.close()


def test_verify_cycles():
    ws = Workspace()
    try:
        code, text = ws.run("verify", "--family", "cycle", "--n", "3..8")
        assert code == 0
        assert text.count("verdict=match") == 6
        assert os.path.exists(ws.out("verify-cycle.txt"))
        assert os.path.exists(os.path.join(ws.root, "cache", "ind-cycle-n6.json"))
    finally:
        ws.close()


def test_verify_structured():
    ws = Workspace()
    try:
        code, text = ws.run("verify", "--family", "path", "--n", "4,8", "--format", "structured")
        assert code == 0
        assert '"exit": 0' in text
        assert os.path.exists(ws.out("verify-path.json"))
    finally:
        ws.close()


def test_verify_small_sg_families():
    ws = Workspace()
    try:
        code, text = ws.run("verify", "--family", "sgn1", "--n", "1..4")
        assert code == 0
        assert text.count("verdict=match") == 4
        code, text = ws.run("verify", "--family", "sg1k", "--k", "0..3")
        assert code == 0
        assert os.path.exists(os.path.join(ws.root, "cache", "ind-sg1k-k3.json"))
    finally:
        ws.close()


def test_verify_over_face_budget_is_incomplete():
    ws = Workspace()
    try:
        code, text = ws.run("verify", "--family", "cycle", "--n", "12", "--budget-faces", "50")
        assert code == 3
        assert "verdict=incomplete" in text
        assert "verdict=match" not in text
    finally:
        ws.close()


def test_bad_parameters():
    ws = Workspace()
    try:
        assert ws.run("gen", "--family", "sg", "-n", "2")[0] == 2
        assert ws.run("gen", "--family", "sg", "-n", "-1", "-k", "2")[0] == 2
        assert ws.run("verify", "--family", "cycle")[0] == 2
        assert ws.run("verify", "--family", "cycle", "--n", "9..3")[0] == 2
        assert ws.run("gen", "--family", "c", "-m", "2")[0] == 2
    finally:
        ws.close()


def test_budget_exit_code():
    ws = Workspace()
    try:
        code, _ = ws.run("complex", "--family", "sg", "-n", "2", "-k", "4", "--budget-faces", "10")
        assert code == 3
    finally:
        ws.close()


def test_homology_command():
    ws = Workspace()
    try:
        code, text = ws.run("homology", "--family", "sg", "-n", "2", "-k", "4")
        assert code == 0
        assert "dim=2 betti=3" in text
    finally:
        ws.close()


def test_morse_command():
    ws = Workspace()
    try:
        code, text = ws.run("morse", "--family", "e", "-n", "5", "--emit-script")
        assert code == 0
        assert "critical dim=3 size=4 count=3" in text
        assert os.path.exists(ws.out("e-n5.script"))
        assert os.path.exists(ws.out("e-n5.matching"))
        code, text = ws.run("export", "--in", ws.out("e-n5.script"), "--kind", "script")
        assert code == 0 and "identical=true" in text
        code, text = ws.run("export", "--in", ws.out("e-n5.matching"), "--kind", "matching")
        assert code == 0 and "identical=true" in text
    finally:
        ws.close()


def test_morse_sg2k():
    ws = Workspace()
    try:
        code, text = ws.run("morse", "--family", "sg", "-n", "2", "-k", "4")
        assert code == 0
        assert "source=sg2k" in text
        assert "critical dim=2 size=3 count=3" in text
    finally:
        ws.close()


def test_classify_and_chromatic():
    ws = Workspace()
    try:
        code, text = ws.run("classify", "-n", "4")
        assert code == 0 and "A=5 B=10 M=10" in text
        code, text = ws.run("chromatic", "--family", "sg", "-n", "2", "-k", "2")
        assert code == 0 and "=4" in text
    finally:
        ws.close()


if __name__ == "__main__":
    tests = [(name, fn) for name, fn in sorted(globals().items())
             if name.startswith("test_") and callable(fn)]
    failed = 0
    for name, fn in tests:
        try:
            fn()
            print(f"✅ {name}")
        except Exception as e:
            failed += 1
            print(f"❌ {name}: {e!r}")
    print(f"\n{len(tests) - failed}/{len(tests)} passed")
    sys.exit(1 if failed else 0)
