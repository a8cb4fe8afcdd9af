#!/usr/bin/env python3
"""
Artifact format tests
Writers and readers for graphs, complexes, scripts and matchings, parse
errors with positions, and the verification report text.
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from artifacts import (format_complex, format_graph, format_matching, format_reports, format_script,
                       parse_complex, parse_graph, parse_kind, parse_matching, parse_params,
                       parse_script, report_block, summary_table)
from complexes import independence_complex
from errors import FormatError, ParameterError
from graphs import FamilyParams, basic_graph, build_family, e_graph, stable_kneser
from morse import induced_matching, run_script, verify_acyclic
from morse_scripts import cycle_script, e_graph_script
from theorems import verify_instance


def test_graph_header():
    params = FamilyParams("sg", n=2, k=1)
    text = format_graph(params, stable_kneser(2, 1))
    lines = text.splitlines()
    assert lines[0] == "graph sg n=2,k=1 5 5"
    assert lines[1] == "v 0 {1,3}"
    assert lines[6] == "e 0 2"


def test_graph_round_trip():
    for params in (FamilyParams("sg", n=2, k=3), FamilyParams("e", n=3), FamilyParams("prod", sizes=(4, 2))):
        text = format_graph(params, build_family(params))
        artifact = parse_graph(text)
        assert artifact.params == params
        assert format_graph(artifact.params, artifact.graph) == text


def test_graph_parse_errors():
    try:
        parse_graph("graph sg n=2,k=1 5 5\nv 0 {1,3}\nv x {1,4}\n")
        assert False, "bad index"
    except FormatError as e:
        assert (e.line, e.column) == (3, 3)
    try:
        parse_graph("graph sg n=2,k=1 2 0\nv 0 {1,3}\n")
        assert False, "vertex count"
    except FormatError as e:
        assert e.line == 1
    try:
        parse_graph("graph zz - 0 0\n")
        assert False, "unknown family"
    except FormatError as e:
        assert e.line == 1


def test_params():
    assert parse_params("sg", "n=2,k=1") == FamilyParams("sg", n=2, k=1)
    assert parse_params("kb", "sizes=3x3") == FamilyParams("kb", sizes=(3, 3))
    assert parse_params("el", "r=4").describe() == "r=4"
    try:
        parse_params("sg", "q=1")
        assert False, "unknown key"
    except FormatError:
        pass


def test_complex_round_trip():
    k = independence_complex(stable_kneser(2, 3))
    text = format_complex(k)
    assert text.startswith("complex 14 ")
    again = parse_complex(text)
    assert again.num_faces == k.num_faces
    assert format_complex(again) == text


def test_complex_rejects_non_maximal_faces():
    text = "complex 3 2\nv 0 1\nv 1 2\nv 2 3\nf {0,1}\nf {1}\n"
    try:
        parse_complex(text)
        assert False, "{1} is not maximal"
    except FormatError:
        pass
    try:
        parse_complex("complex 2 1\nv 0 1\nv 1 2\nf {1,0}\n")
        assert False, "descending face"
    except FormatError as e:
        assert (e.line, e.column) == (4, 3)


def test_script_round_trip():
    g = e_graph(5)
    params = FamilyParams("e", n=5)
    program = e_graph_script(5, g).program
    text = format_script(params, g, program)
    assert text.splitlines()[0] == f"script e n=5 {len(program)}"
    parsed = parse_script(text, g)
    assert parsed == program
    assert format_script(params, g, parsed) == text


def test_script_parse_errors():
    g = basic_graph("C", 5)
    try:
        parse_script("script c m=5 1\nat LX split 1\n", g)
        assert False, "bad path"
    except FormatError as e:
        assert (e.line, e.column) == (2, 4)
    try:
        parse_script("script c m=5 1\nat root split 9\n", g)
        assert False, "unknown vertex"
    except FormatError as e:
        assert e.line == 2
    try:
        parse_script("script c m=5 2\nat root split 1\n", g)
        assert False, "step count"
    except FormatError:
        pass


def test_matching_round_trip():
    g = basic_graph("C", 6)
    k = independence_complex(g)
    matching = induced_matching(g, run_script(g, cycle_script(6)), k)
    assert verify_acyclic(k, matching).ok
    params = FamilyParams("c", m=6)
    text = format_matching(params, matching)
    assert text.splitlines()[0] == f"matching c m=6 {len(matching.pairs)} 2"
    again = parse_matching(text, k)
    assert again.pairs == matching.pairs
    assert format_matching(params, again) == text


def test_matching_critical_block_checked():
    g = basic_graph("C", 5)
    k = independence_complex(g)
    matching = induced_matching(g, run_script(g, cycle_script(5)), k)
    text = format_matching(FamilyParams("c", m=5), matching)
    tampered = text.replace("c {0,3}", "c {1,3}")
    try:
        parse_matching(tampered, k)
        assert False, "critical block changed"
    except FormatError:
        pass


def test_report_text():
    report = verify_instance("cycle", 6).to_dict()
    block = report_block(report)
    assert block[0] == "instance=ind-cycle-n6"
    assert "morse.critical=1:2" in block
    assert "homology.betti=1:2" in block
    assert "homology.torsion=none" in block
    assert block[-1] == "verdict=match"
    table = summary_table([report])
    assert table[0].split() == ["instance", "prediction", "morse", "homology", "verdict"]
    assert table[2].split() == ["ind-cycle-n6", "2xS^1", "1:2", "1:2", "match"]
    assert format_reports([report]).endswith(table[-1] + "\n")


def test_parse_kind():
    assert parse_kind("matching") == "matching"
    try:
        parse_kind("movie")
        assert False, "unknown kind"
    except ParameterError:
        pass


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
