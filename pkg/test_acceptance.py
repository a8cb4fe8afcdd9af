#!/usr/bin/env python3
"""
Acceptance sweep
The long checks over every family at its full range. Several minutes of
runtime, so every test returns immediately unless KNESER_SLOW=1.

    KNESER_SLOW=1 python test_acceptance.py
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from artifacts import to_structured
from complexes import independence_complex, independence_count
from graphs import (basic_graph, c_odd, cartesian_product, classify_sg_n2, dc_cycle, e_graph,
                    expected_class_counts, is_isomorphic_small, o_param, sg_class_subgraphs)
from morse import critical_sizes, run_script
from morse_scripts import e_graph_script
from morse_sg2k import expected_critical_count, sg2k_report
from theorems import (EL_CHECK_N, MATCH, _el_terminal_problems, check_chromatic, check_neighborhood,
                      predict_ind_sg2, verify_family)

SLOW = os.environ.get("KNESER_SLOW") == "1"

E_CRITICAL = {3: (1, 3), 4: (1, 3), 5: (3, 4), 6: (1, 3), 7: (1, 5), 8: (2, 4), 9: (3, 6), 10: (1, 5)}


def _all_match(reports):
    bad = [(r.complex_id, r.to_dict()["channels"]) for r in reports if r.verdict != MATCH]
    assert not bad, bad


def test_sg2_homology():
    if not SLOW:
        return
    reports = verify_family("sg2", range(2, 9), channels=("homology",))
    _all_match(reports)
    for report in reports:
        assert report.homology.nonzero_betti() == predict_ind_sg2(report.value).expected_betti()
        assert report.homology.is_torsion_free()


def test_sg2_matchings():
    if not SLOW:
        return
    for k in range(3, 9):
        report = sg2k_report(k)
        assert not report.problems, (k, [str(p) for p in report.problems])
        assert report.order_preserving and report.acyclic and report.empty_matched, k
        assert sum(report.phi_counts.values()) == report.num_faces, k
        assert report.critical == report.expected_critical, k
        assert len(report.critical) == expected_critical_count(k), k
        assert set(report.critical_dimensions) == ({1} if k == 3 else {2}), k


def test_e_homology():
    if not SLOW:
        return
    _all_match(verify_family("e", range(3, 8)))


def test_e_scripts():
    if not SLOW:
        return
    for n, (count, size) in E_CRITICAL.items():
        g = e_graph(n)
        script = e_graph_script(n, g)
        tree = run_script(g, script.program)
        assert critical_sizes(tree) == [size] * count, n
        if n in EL_CHECK_N:
            assert _el_terminal_problems(tree, n, script.el_terminals, 64) == [], n


def test_lemma_families():
    if not SLOW:
        return
    _all_match(verify_family("el", range(0, 11)))
    _all_match(verify_family("path", range(1, 16)))
    _all_match(verify_family("cycle", range(3, 16)))


def test_face_counts_agree():
    if not SLOW:
        return
    for g in (e_graph(3), e_graph(4), basic_graph("C", 24), cartesian_product(basic_graph("C", 8),
                                                                                basic_graph("P", 3))):
        assert independence_complex(g).num_faces == independence_count(g), g.name


def test_sg_structure():
    if not SLOW:
        return
    for n in range(2, 8):
        assert classify_sg_n2(n).counts == expected_class_counts(n), n
    for n in range(4, 8):
        parts = sg_class_subgraphs(n)
        cylinder = cartesian_product(basic_graph("C", 2 * n + 2), basic_graph("P", o_param(n) - 2))
        assert is_isomorphic_small(parts["M"], cylinder), n
        ring = c_odd(n) if n % 2 == 0 else dc_cycle(n)
        assert is_isomorphic_small(parts["A"], ring), n


def test_side_claims():
    if not SLOW:
        return
    for n, k in ((1, 1), (1, 2), (2, 1), (2, 2), (3, 1)):
        assert check_chromatic(n, k).ok, (n, k)
    assert check_neighborhood(2, 2).ok
    assert check_neighborhood(2, 1).ok


def test_determinism():
    if not SLOW:
        return
    for family, values in (("sg2", range(2, 9)), ("e", range(3, 8))):
        first = to_structured([r.to_dict() for r in verify_family(family, values)])
        second = to_structured([r.to_dict() for r in verify_family(family, values)])
        assert first == second, family


if __name__ == "__main__":
    if not SLOW:
        print("Set KNESER_SLOW=1 to run the acceptance sweep.")
        sys.exit(0)
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
