#!/usr/bin/env python3
"""
Matching tree tests
Step validation, the path and cycle programs, the induced matching and its
acyclicity check, the search and the patchwork composition.
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from complexes import complex_from_maximal_faces, independence_complex
from errors import AuditError, ContractError, IncompleteTreeError, OrderError, ScriptError, SearchError
from graphs import IntLabel, basic_graph
from homology import homology
from morse import (ROOT_SIGMA, Free, GradeMap, Match, MatchingTree, PartialMatching, ScriptLine,
                   SigmaNode, Split, consistent_with_tree, critical_sizes, expand_sigma,
                   free_vertex_soundness, induced_matching, morse_summary, patchwork_compose,
                   run_script, search_tree, summary_from_tree, tree_critical_faces, validate_step,
                   verify_acyclic)
from morse_scripts import cycle_script, path_script


def _triangle_boundary():
    labels = [IntLabel(i) for i in range(1, 4)]
    return complex_from_maximal_faces(labels, [(0, 1), (1, 2), (0, 2)], "dT")


def test_validate_step():
    p3 = basic_graph("P", 3)
    assert validate_step(p3, ROOT_SIGMA, Match(1, 0)) is None
    assert "not a neighbour" in validate_step(p3, ROOT_SIGMA, Match(2, 0))
    assert "not free" in validate_step(p3, ROOT_SIGMA, Free(0))
    assert "not in graph" in validate_step(p3, ROOT_SIGMA, Split(5))
    assert validate_step(p3, SigmaNode(frozenset(), frozenset({1})), Free(0)) is None


def test_expand_sigma():
    p3 = basic_graph("P", 3)
    assert expand_sigma(p3, ROOT_SIGMA) == [(), (0,), (1,), (2,), (0, 2)]
    assert expand_sigma(p3, SigmaNode(frozenset({1}), frozenset({0, 2}))) == [(1,)]
    try:
        expand_sigma(p3, SigmaNode(frozenset({1}), frozenset()))
        assert False, "A needs its neighbourhood inside B"
    except ContractError:
        pass


def test_path_programs():
    expected = {1: [], 2: [1], 3: [1], 4: [], 5: [2], 8: [3]}
    for n, sizes in expected.items():
        tree = run_script(basic_graph("P", n), path_script(n))
        assert critical_sizes(tree) == sizes, n


def test_cycle_programs():
    c5 = run_script(basic_graph("C", 5), cycle_script(5))
    assert tree_critical_faces(c5) == [(0, 3)]
    c6 = run_script(basic_graph("C", 6), cycle_script(6))
    assert critical_sizes(c6) == [2, 2]
    c7 = run_script(basic_graph("C", 7), cycle_script(7))
    assert critical_sizes(c7) == [2]


def test_script_errors():
    p3 = basic_graph("P", 3)
    try:
        run_script(p3, [ScriptLine("", Free(0), "bad free")])
        assert False, "Free(0) is illegal at the root"
    except ScriptError as e:
        assert e.path == "" and e.step_index == 0 and e.note == "bad free"
    try:
        run_script(p3, [ScriptLine("", Split(1))])
        assert False, "tree left open"
    except IncompleteTreeError as e:
        assert e.path == "L"
    try:
        run_script(p3, [ScriptLine("", Match(1, 0)), ScriptLine("L", Free(2))])
        assert False, "L is already a nonempty leaf"
    except ScriptError as e:
        assert e.path == "L" and e.step_index == 1


def test_induced_matching_on_c6():
    g = basic_graph("C", 6)
    tree = run_script(g, cycle_script(6))
    k = independence_complex(g)
    matching = induced_matching(g, tree, k)
    assert verify_acyclic(k, matching).ok
    assert consistent_with_tree(tree, matching)
    summary = morse_summary(matching)
    assert summary.critical_counts == {1: 2}
    assert summary.empty_matched
    assert 2 * summary.num_pairs + 2 == k.num_faces
    assert summary_from_tree(tree).critical_counts == {1: 2}


def test_cyclic_matching_detected():
    k = _triangle_boundary()
    matching = PartialMatching(k, [((0,), (0, 1)), ((1,), (1, 2)), ((2,), (0, 2))])
    check = verify_acyclic(k, matching)
    assert not check.ok
    assert len(check.cycle) == 6
    assert not matching.verified


def test_morse_summary_needs_verification():
    k = _triangle_boundary()
    try:
        morse_summary(PartialMatching(k, [((0,), (0, 1))]))
        assert False, "unverified matching"
    except ContractError:
        pass


def test_check_well_formed():
    k = _triangle_boundary()
    for pairs in ([((0,), (1, 2))], [((0,), (0, 1)), ((0,), (0, 2))], [((0, 1), (0, 1, 2))]):
        try:
            verify_acyclic(k, PartialMatching(k, pairs))
            assert False, pairs
        except ContractError:
            pass


def test_search_on_c6():
    tree = search_tree(basic_graph("C", 6))
    assert tree.is_complete()
    assert critical_sizes(tree) == [2, 2]


def test_search_matches_homology():
    for g in (basic_graph("C", 8), basic_graph("P", 7), basic_graph("KB", 2, 3)):
        tree = search_tree(g)
        k = independence_complex(g)
        matching = induced_matching(g, tree, k)
        assert verify_acyclic(k, matching).ok, g.name
        total = sum(homology(k).nonzero_betti().values())
        assert len(tree.nonempty_leaves()) >= total, g.name


def test_search_budget():
    try:
        search_tree(basic_graph("C", 9), node_budget=1)
        assert False, "budget of one node cannot finish"
    except SearchError as e:
        assert isinstance(e.best, MatchingTree)
        assert e.best.is_complete()


def test_free_vertex_soundness():
    p3 = basic_graph("P", 3)
    assert not free_vertex_soundness(p3, ROOT_SIGMA, 0)
    assert free_vertex_soundness(p3, SigmaNode(frozenset(), frozenset({1})), 0)


def test_patchwork_compose():
    k = _triangle_boundary()
    # vertex 0 alone below, everything else above
    grading = GradeMap(("low", "high"), {f: ("low" if f in ((), (0,)) else "high")
                                         for f in k.all_faces()})
    per_grade = {"low": [((), (0,))], "high": [((1,), (0, 1)), ((2,), (1, 2))]}
    composed = patchwork_compose(k, grading, per_grade)
    assert composed.verified
    assert composed.critical_faces() == [(0, 2)]


def test_patchwork_rejects_bad_input():
    k = _triangle_boundary()
    upside_down = GradeMap(("low", "high"), {f: ("high" if f == () else "low") for f in k.all_faces()})
    try:
        patchwork_compose(k, upside_down, {})
        assert False, "grading is not order-preserving"
    except OrderError as e:
        assert e.smaller == "{}"
    flat = GradeMap(("only",), {f: "only" for f in k.all_faces()})
    cyclic = {"only": [((0,), (0, 1)), ((1,), (1, 2)), ((2,), (0, 2))]}
    try:
        patchwork_compose(k, flat, cyclic)
        assert False, "cycle inside a grade"
    except AuditError as e:
        assert e.grade == "only"


def test_tree_steps_replay():
    g = basic_graph("C", 7)
    tree = run_script(g, cycle_script(7))
    replayed = MatchingTree.start(g)
    for path, step in tree.steps():
        replayed.apply(path, step)
    assert tree_critical_faces(replayed) == tree_critical_faces(tree)


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
