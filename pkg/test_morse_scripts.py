#!/usr/bin/env python3
"""
E_{2n+2} script tests
Runs the hand-written programs for n = 3..10 and checks the critical cells
they leave, the recorded findings and the end-ladder residuals.
"""

import os
import sys

import networkx as nx

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from errors import ParameterError
from graphs import e_graph, el_graph, induced_subgraph, is_isomorphic_small
from morse import Search, critical_sizes, run_script
from morse_scripts import e_graph_script, lemma_graph, path_script, sigma_at

# n -> (number of critical cells, their common size)
E_CRITICAL = {3: (1, 3), 4: (1, 3), 5: (3, 4), 6: (1, 3), 7: (1, 5), 8: (2, 4), 9: (3, 6), 10: (1, 5)}


def test_e_scripts_critical_cells():
    for n, (count, size) in E_CRITICAL.items():
        g = e_graph(n)
        tree = run_script(g, e_graph_script(n, g).program)
        assert critical_sizes(tree) == [size] * count, (n, critical_sizes(tree))


def test_n3_findings():
    script = e_graph_script(3)
    assert len(script.findings) == 2
    assert all("c5" in finding.note for finding in script.findings)
    assert any(isinstance(line.step, Search) and "replaces" in line.note for line in script.program)


def test_larger_scripts_have_no_findings():
    for n in range(4, 11):
        assert e_graph_script(n).findings == [], n


def test_end_ladder_residuals():
    n = 7
    g = e_graph(n)
    script = e_graph_script(n, g)
    assert sorted(script.el_terminals.values()) == [1, 2, 2, 3]
    tree = run_script(g, script.program)
    for path, r in script.el_terminals.items():
        residual = sorted(tree.nodes[path].sigma.residual(g))
        assert is_isomorphic_small(induced_subgraph(g, residual), el_graph(r)), (path, r)


def test_even_scripts_use_no_end_ladders():
    assert e_graph_script(8).el_terminals == {}


def test_even_scripts_graft_path_programs():
    assert e_graph_script(4).path_residuals == {"L" * 6 + "RR": [2], "L" * 9: [4]}
    assert e_graph_script(6).path_residuals == {"L" * 11 + "R": [3, 3], "L" * 13: [4, 1],
                                                "L" * 10 + "RR": [4]}
    for n in (4, 6, 8, 10):
        g = e_graph(n)
        script = e_graph_script(n, g)
        assert not any(isinstance(line.step, Search) for line in script.program), n
        for path, sizes in script.path_residuals.items():
            residual = sigma_at(g, script.program, path).residual(g)
            part = g.to_networkx().subgraph(residual)
            components = sorted(len(c) for c in nx.connected_components(part))
            assert components == sorted(sizes), (n, path)
            for c in nx.connected_components(part):
                assert nx.is_isomorphic(part.subgraph(c), nx.path_graph(len(c))), (n, path)


def test_small_n_rejected():
    try:
        e_graph_script(2)
        assert False, "n=2 has no script"
    except ParameterError:
        pass
    try:
        path_script(0)
        assert False, "P_0"
    except ParameterError:
        pass


def test_lemma_graph():
    assert lemma_graph("path", 4).name == "P_4"
    assert lemma_graph("cycle", 5).name == "C_5"


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
