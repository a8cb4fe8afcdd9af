"""
morse_scripts.py

Hand-written matching-tree programs: paths (match inward from one end),
cycles (split one vertex, then two path programs) and the graphs E_{2n+2}
in both parity cases. Residual end-ladder subgraphs are left to the search;
residuals that are disjoint paths get the path program grafted on.

Vertex arithmetic on E_{2n+2} is modulo 2n+2 with representatives 1..2n+2.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import networkx as nx

from errors import ParameterError
from graphs import CycleLabel, Graph, IntLabel, basic_graph, e_graph
from morse import (ROOT_SIGMA, Free, Match, ScriptFinding, ScriptLine, Search, SigmaNode, Split,
                   child_states)


@dataclass
class EScript:
    n: int
    program: List[ScriptLine]
    findings: List[ScriptFinding] = field(default_factory=list)
    # search nodes whose residual should be an end ladder EL_r
    el_terminals: Dict[str, int] = field(default_factory=dict)
    # nodes whose residual is a disjoint union of paths, with the path sizes
    path_residuals: Dict[str, List[int]] = field(default_factory=dict)


# --- Paths and cycles ---
def path_steps(start: str, vertices: Sequence[int], note: str = "") -> List[ScriptLine]:
    """Matches v2 via v1 along a path v1 - v2 - v3 - ..., recursing on v4, v5, ..."""
    lines: List[ScriptLine] = []
    path = start
    rest = list(vertices)
    while rest:
        if len(rest) == 1:
            lines.append(ScriptLine(path, Free(rest[0]), note))
            break
        lines.append(ScriptLine(path, Match(rest[1], rest[0]), note))
        path += "L"
        rest = rest[3:]
    return lines


def path_script(n: int) -> List[ScriptLine]:
    """Program for P_n on labels 1..n."""
    if n < 1:
        raise ParameterError(f"path needs n >= 1, got {n}")
    return path_steps("", list(range(n)), f"P_{n}")


def cycle_script(n: int) -> List[ScriptLine]:
    """Program for C_n: split vertex 1, then walk the two remaining paths."""
    if n < 3:
        raise ParameterError(f"cycle needs n >= 3, got {n}")
    lines = [ScriptLine("", Split(0), f"C_{n}: split 1")]
    lines += path_steps("L", list(range(1, n)), f"C_{n} without 1")
    lines += path_steps("R", list(range(2, n - 1)), f"C_{n} with 1")
    return lines


# --- E_{2n+2} ---
class _Vertices:
    def __init__(self, g: Graph, n: int):
        self.g = g
        self.m = 2 * n + 2

    def wrap(self, i: int) -> int:
        return (i - 1) % self.m + 1

    def num(self, i: int) -> int:
        return self.g.index_of(IntLabel(self.wrap(i)))

    def cyc(self, i: int) -> int:
        return self.g.index_of(CycleLabel(self.wrap(i)))


def _odd_script(g: Graph, n: int) -> EScript:
    x = _Vertices(g, n)
    num, cyc = x.num, x.cyc
    script = EScript(n, [])
    add = script.program.append

    for i in range(n - 1):
        here = "L" * i
        add(ScriptLine(here, Split(num(i + 1)), f"i-loop i={i}: split {i + 1}"))
        add(ScriptLine(here + "R", Match(cyc(i + 3), num(i + 3)), f"i-loop i={i}: match c{i + 3} via {i + 3}"))
        add(ScriptLine(here + "RL", Free(num(i + n + 4)), f"i-loop i={i}: free {i + n + 4}"))
    for r in range(n - 1):
        here = "L" * (n - 1 + r)
        add(ScriptLine(here, Split(num(n + r)), f"r-loop r={r}: split {n + r}"))
        add(ScriptLine(here + "R", Match(cyc(n + r + 2), num(n + r + 2)),
                       f"r-loop r={r}: match c{n + r + 2} via {n + r + 2}"))
        add(ScriptLine(here + "RL", Match(cyc(n + r + 4), num(n + r + 4)),
                       f"r-loop r={r}: match c{n + r + 4} via {n + r + 4}"))
        add(ScriptLine(here + "RLL", Free(cyc(r + 2)), f"r-loop r={r}: free c{r + 2}"))

    base = "L" * (2 * n - 2)
    add(ScriptLine(base, Split(num(2 * n)), f"split {2 * n}"))

    # 2n in the face
    p1 = base + "R"
    add(ScriptLine(p1, Split(cyc(2 * n + 2)), f"2n in: split c{2 * n + 2}"))
    add(ScriptLine(p1 + "L", Free(num(2 * n + 2)), f"2n in: free {2 * n + 2}"))
    add(ScriptLine(p1 + "R", Split(cyc(n - 1)), f"2n in: split c{n - 1}"))
    add(ScriptLine(p1 + "RL", Free(cyc(n)), f"2n in: free c{n}"))
    add(ScriptLine(p1 + "RR", Search(), f"2n in: EL_{n - 4}"))
    script.el_terminals[p1 + "RR"] = n - 4

    # 2n excluded
    p2 = base + "L"
    add(ScriptLine(p2, Split(cyc(2 * n + 2)), f"2n out: split c{2 * n + 2}"))
    add(ScriptLine(p2 + "R", Free(num(2 * n + 1)), f"2n out: free {2 * n + 1}"))
    add(ScriptLine(p2 + "L", Split(num(2 * n + 1)), f"2n out: split {2 * n + 1}"))

    p3 = p2 + "LL"
    add(ScriptLine(p3, Match(num(2 * n - 1), num(2 * n + 2)), f"2n+1 out: match {2 * n - 1} via {2 * n + 2}"))
    add(ScriptLine(p3 + "L", Split(cyc(n - 1)), f"2n+1 out: split c{n - 1}"))
    add(ScriptLine(p3 + "LR", Free(cyc(2 * n + 1)), f"2n+1 out: free c{2 * n + 1}"))
    add(ScriptLine(p3 + "LL", Split(cyc(2 * n + 1)), f"2n+1 out: split c{2 * n + 1}"))
    add(ScriptLine(p3 + "LLL", Free(cyc(2 * n)), f"2n+1 out: free c{2 * n}"))
    p4 = p2 + "LR"
    if n > 3:
        add(ScriptLine(p3 + "LLR", Split(cyc(n + 2)), f"2n+1 out: split c{n + 2}"))
        add(ScriptLine(p3 + "LLRL", Free(cyc(n + 1)), f"2n+1 out: free c{n + 1}"))
        add(ScriptLine(p3 + "LLRR", Search(), f"2n+1 out: EL_{n - 5}"))
        script.el_terminals[p3 + "LLRR"] = n - 5
    else:
        # c_{n+2} = c_{2n-1} lies in N(2n-1), so the split has nothing to act on
        add(ScriptLine(p3 + "LLR", Search(), "2n+1 out: search replaces split c5"))
        script.findings.append(ScriptFinding(p3 + "LLR", "2n+1 out: split c5",
                                             "c5 = c_(2n-1) is already excluded; replaced by search"))

    add(ScriptLine(p4, Match(cyc(2 * n - 1), num(2 * n - 1)), f"2n+1 in: match c{2 * n - 1} via {2 * n - 1}"))
    add(ScriptLine(p4 + "L", Match(cyc(n), cyc(n - 1)), f"2n+1 in: match c{n} via c{n - 1}"))
    if n > 3:
        add(ScriptLine(p4 + "LL", Split(cyc(n + 2)), f"2n+1 in: split c{n + 2}"))
        add(ScriptLine(p4 + "LLL", Search(), f"2n+1 in: EL_{n - 5}"))
        add(ScriptLine(p4 + "LLR", Search(), f"2n+1 in: EL_{n - 6}"))
        script.el_terminals[p4 + "LLL"] = n - 5
        script.el_terminals[p4 + "LLR"] = n - 6
    else:
        script.findings.append(ScriptFinding(p4 + "LL", "2n+1 in: split c5",
                                             "node is already a nonempty leaf; step dropped"))
    return script


def sigma_at(g: Graph, program: Sequence[ScriptLine], path: str) -> SigmaNode:
    """Replays the steps on the way from the root down to `path`."""
    steps = {line.path: line.step for line in program}
    node = ROOT_SIGMA
    for depth, side in enumerate(path):
        step = steps.get(path[:depth])
        if step is None or isinstance(step, Search):
            raise ParameterError(f"no step at '{path[:depth] or 'root'}' on the way to '{path}'")
        children = child_states(g, node, step)
        child = children[0] if side == "L" else (children[1] if len(children) > 1 else None)
        if child is None:
            raise ParameterError(f"'{path}' has no state below '{path[:depth] or 'root'}'")
        node = child
    return node


def residual_paths(g: Graph, node: SigmaNode) -> Optional[List[List[int]]]:
    """The residual as vertex sequences of its path components, or None if it is not a union of paths."""
    sub = g.to_networkx().subgraph(node.residual(g))
    paths = []
    for component in sorted(nx.connected_components(sub), key=min):
        part = sub.subgraph(component)
        if not nx.is_tree(part) or max(d for _, d in part.degree) > 2:
            return None
        start = min(v for v, d in part.degree if d <= 1)
        paths.append([start] + [v for _, v in nx.dfs_edges(part, start)])
    return paths


def _graft_paths(g: Graph, script: EScript, path: str, note: str) -> None:
    paths = residual_paths(g, sigma_at(g, script.program, path))
    if paths is None:
        script.findings.append(ScriptFinding(path, note, "residual is not a union of paths; replaced by search"))
        script.program.append(ScriptLine(path, Search(), note))
        return
    script.path_residuals[path] = [len(p) for p in paths]
    # one component of size 1 mod 3 makes the whole node contractible
    cones = [p for p in paths if len(p) % 3 == 1]
    if cones:
        script.program.extend(path_steps(path, min(cones, key=len), note))
        return
    here = path
    for vertices in paths:
        lines = path_steps(here, vertices, note)
        script.program.extend(lines)
        here += "L" * len(lines)


def _even_script(g: Graph, n: int) -> EScript:
    x = _Vertices(g, n)
    num, cyc = x.num, x.cyc
    script = EScript(n, [])
    add = script.program.append

    for i in range(2 * n - 2):
        here = "L" * i
        add(ScriptLine(here, Split(num(i + 1)), f"i-loop i={i}: split {i + 1}"))
        spoke = i + n + 4 if i % 2 else i + 3
        add(ScriptLine(here + "R", Match(cyc(spoke), num(i + 3)),
                       f"i-loop i={i}: match c{x.wrap(spoke)} via {x.wrap(i + 3)}"))
        add(ScriptLine(here + "RL", Free(num(i + 5)), f"i-loop i={i}: free {x.wrap(i + 5)}"))

    base = "L" * (2 * n - 2)
    add(ScriptLine(base, Split(cyc(n + 1)), f"split c{n + 1}"))

    out = base + "L"
    if n % 6 in (0, 2):
        add(ScriptLine(out, Split(num(2 * n + 1)), f"c{n + 1} out: split {2 * n + 1}"))
        _graft_paths(g, script, out + "R", f"c{n + 1} out, {2 * n + 1} in: two paths")
        add(ScriptLine(out + "L", Match(num(2 * n - 1), num(2 * n + 2)),
                       f"c{n + 1} out, {2 * n + 1} out: match {2 * n - 1} via {2 * n + 2}"))
        _graft_paths(g, script, out + "LL", f"c{n + 1} out, {2 * n + 1} out: path")
    else:
        kk = (n - 4) // 6
        here = out
        for l in range(kk):
            add(ScriptLine(here, Match(cyc(n + 5 + 6 * l), cyc(n + 3 + 6 * l)),
                           f"c{n + 1} out: match c{n + 5 + 6 * l} via c{n + 3 + 6 * l}"))
            here += "L"
        add(ScriptLine(here, Split(num(2 * n)), f"c{n + 1} out: split {2 * n}"))
        add(ScriptLine(here + "R", Free(num(2 * n + 2)), f"c{n + 1} out, {2 * n} in: free {2 * n + 2}"))
        inner = here + "L"
        for l in range(kk + 1):
            add(ScriptLine(inner, Match(cyc(n - 3 - 6 * l), cyc(n - 1 - 6 * l)),
                           f"c{n + 1} out, {2 * n} out: match c{n - 3 - 6 * l} via c{n - 1 - 6 * l}"))
            inner += "L"
        _graft_paths(g, script, inner, f"c{n + 1} out, {2 * n} out: P_4")

    into = base + "R"
    add(ScriptLine(into, Split(num(2 * n)), f"c{n + 1} in: split {2 * n}"))
    _graft_paths(g, script, into + "R", f"c{n + 1} in, {2 * n} in: path")
    add(ScriptLine(into + "L", Match(cyc(2 * n + 1), num(2 * n + 1)),
                   f"c{n + 1} in, {2 * n} out: match c{2 * n + 1} via {2 * n + 1}"))
    add(ScriptLine(into + "LL", Free(num(2 * n - 1)), f"c{n + 1} in, {2 * n} out: free {2 * n - 1}"))
    return script


def e_graph_script(n: int, g: Optional[Graph] = None) -> EScript:
    """The node-addressed program for E_{2n+2}, n >= 3."""
    if n < 3:
        raise ParameterError(f"E_(2n+2) scripts need n >= 3, got {n}")
    g = g or e_graph(n)
    script = _odd_script(g, n) if n % 2 else _even_script(g, n)
    for finding in script.findings:
        logging.warning("E_%d script: %s at '%s': %s", 2 * n + 2, finding.note,
                        finding.path or "root", finding.reason)
    return script


def lemma_graph(family: str, n: int) -> Graph:
    """P_n or C_n matching the path/cycle programs above."""
    return basic_graph("P" if family == "path" else "C", n)
