"""
morse.py

Matching trees over the independence complex of a graph, the acyclic
matchings they induce, acyclicity verification on the face poset, Patchwork
composition of graded matchings, and a deterministic backtracking search for
small matching trees.

A tree node is a state Sigma(A, B): the independent sets containing A and
avoiding B. Children are addressed by L/R paths from the root:

    Split(v)     path+"L" = Sigma(A, B+v)        path+"R" = Sigma(A+v, B+N(v))
    Match(v, p)  path+"L" = Sigma(A+v, B+N(v))
    Free(p)      path+"L" = empty leaf

A state with no residual vertex (V minus A and B is empty) is a nonempty leaf
holding the single face A.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from complexes import (Face, SimplicialComplex, cover_pairs, face_sort_key, independence_complex,
                       independence_polynomial_at_minus_one)
from errors import (AuditError, ContractError, IncompleteTreeError, OrderError,
                    ScriptError, SearchError, SizeError)
from graphs import Graph

# --- Constants ---
DEFAULT_NODE_BUDGET = 200_000
DEFAULT_SEARCH_FANOUT = 4
SEARCH_VERTEX_BOUND = 40

ROOT = ""


def path_name(path: str) -> str:
    return path or "root"


# --- Steps and states ---
@dataclass(frozen=True)
class Free:
    p: int


@dataclass(frozen=True)
class Match:
    v: int
    p: int


@dataclass(frozen=True)
class Split:
    v: int


@dataclass(frozen=True)
class Search:
    """Script instruction: graft a searched subtree onto the node."""


TreeStep = Union[Free, Match, Split]
ScriptStep = Union[Free, Match, Split, Search]


@dataclass(frozen=True)
class SigmaNode:
    a: FrozenSet[int]
    b: FrozenSet[int]

    def residual(self, g: Graph) -> FrozenSet[int]:
        return frozenset(range(g.num_vertices)) - self.a - self.b


ROOT_SIGMA = SigmaNode(frozenset(), frozenset())


def sigma_violation(g: Graph, node: SigmaNode) -> Optional[str]:
    if node.a & node.b:
        return f"A and B intersect in {sorted(node.a & node.b)}"
    for v in node.a:
        if g.adjacency[v] & node.a:
            return f"A is not independent at vertex {g.labels[v]}"
        if not g.adjacency[v] <= node.b:
            return f"N({g.labels[v]}) is not contained in B"
    return None


def _iter_sigma(g: Graph, node: SigmaNode) -> Iterator[Face]:
    residual = sorted(node.residual(g))
    base = tuple(sorted(node.a))

    def extend(start: int, chosen: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        yield chosen
        for pos in range(start, len(residual)):
            v = residual[pos]
            if not any(u in g.adjacency[v] for u in chosen):
                yield from extend(pos + 1, chosen + (v,))

    for extra in extend(0, ()):
        yield tuple(sorted(base + extra))


def expand_sigma(g: Graph, node: SigmaNode) -> List[Face]:
    """All faces of Sigma(A, B), ascending."""
    violation = sigma_violation(g, node)
    if violation:
        raise ContractError(f"invalid node: {violation}")
    return sorted(_iter_sigma(g, node), key=face_sort_key)


def sigma_count_capped(g: Graph, node: SigmaNode, cap: int = 2) -> int:
    """|Sigma(A, B)|, enumerated with an early exit at `cap`."""
    return sum(1 for _ in itertools.islice(_iter_sigma(g, node), cap))


def validate_step(g: Graph, node: SigmaNode, step: TreeStep) -> Optional[str]:
    """None if the step is legal at the node, otherwise a description of the violation."""
    used = node.a | node.b
    label = g.labels

    def in_range(v: int) -> bool:
        return 0 <= v < g.num_vertices

    if isinstance(step, Split):
        if not in_range(step.v):
            return f"split vertex {step.v} not in graph"
        if step.v in used:
            return f"split vertex {label[step.v]} already in A or B"
        return None
    if isinstance(step, Free):
        if not in_range(step.p):
            return f"free vertex {step.p} not in graph"
        if step.p in used:
            return f"free vertex {label[step.p]} already in A or B"
        left = g.adjacency[step.p] - used
        if left:
            return f"{label[step.p]} is not free: neighbours {[str(label[u]) for u in sorted(left)]} remain"
        return None
    if isinstance(step, Match):
        if not (in_range(step.v) and in_range(step.p)):
            return "match vertices not in graph"
        if step.p in used:
            return f"witness {label[step.p]} already in A or B"
        if step.v not in g.adjacency[step.p]:
            return f"{label[step.v]} is not a neighbour of {label[step.p]}"
        left = g.adjacency[step.p] - used
        if left != {step.v}:
            return (f"N({label[step.p]}) minus (A u B) is "
                    f"{[str(label[u]) for u in sorted(left)]}, expected only {label[step.v]}")
        return None
    return f"unknown step {step!r}"


def child_states(g: Graph, node: SigmaNode, step: TreeStep) -> List[Optional[SigmaNode]]:
    """Child states in path order; None stands for the empty leaf below a Free step."""
    if isinstance(step, Split):
        return [SigmaNode(node.a, node.b | {step.v}),
                SigmaNode(node.a | {step.v}, node.b | g.adjacency[step.v])]
    if isinstance(step, Match):
        return [SigmaNode(node.a | {step.v}, node.b | g.adjacency[step.v])]
    return [None]


# --- Matching tree ---
@dataclass
class TreeNode:
    path: str
    sigma: Optional[SigmaNode]
    kind: str = "open"          # open, internal, empty, nonempty
    step: Optional[TreeStep] = None
    children: List[str] = field(default_factory=list)


@dataclass
class MatchingTree:
    graph: Graph
    nodes: Dict[str, TreeNode] = field(default_factory=dict)

    @classmethod
    def start(cls, g: Graph) -> "MatchingTree":
        tree = cls(g)
        tree._add_node(ROOT, ROOT_SIGMA)
        return tree

    def _add_node(self, path: str, sigma: Optional[SigmaNode]) -> TreeNode:
        if sigma is None:
            node = TreeNode(path, None, "empty")
        elif sigma_count_capped(self.graph, sigma) == 1:
            node = TreeNode(path, sigma, "nonempty")
        else:
            node = TreeNode(path, sigma, "open")
        self.nodes[path] = node
        return node

    def apply(self, path: str, step: TreeStep, step_index: int = 0, note: str = "") -> List[str]:
        """Applies one validated step at an open leaf; returns the new child paths."""
        node = self.nodes.get(path)
        if node is None:
            raise ScriptError(path, step_index, "no such node", note)
        if node.kind != "open":
            raise ScriptError(path, step_index, f"node is {node.kind}, not an open leaf", note)
        violation = validate_step(self.graph, node.sigma, step)
        if violation:
            raise ScriptError(path, step_index, violation, note)
        node.step = step
        node.kind = "internal"
        for suffix, sigma in zip("LR", child_states(self.graph, node.sigma, step)):
            self._add_node(path + suffix, sigma)
            node.children.append(path + suffix)
        return node.children

    def leaves(self) -> List[TreeNode]:
        return [n for _, n in sorted(self.nodes.items()) if n.kind != "internal"]

    def nonempty_leaves(self) -> List[TreeNode]:
        return [n for n in self.leaves() if n.kind == "nonempty"]

    def open_leaves(self) -> List[TreeNode]:
        return [n for n in self.leaves() if n.kind == "open"]

    def is_complete(self) -> bool:
        return not self.open_leaves()

    def ensure_complete(self) -> None:
        pending = self.open_leaves()
        if pending:
            raise IncompleteTreeError(pending[0].path)

    def steps(self) -> List[Tuple[str, TreeStep]]:
        """Applied steps in breadth-first path order, replayable from the root."""
        internal = [n for n in self.nodes.values() if n.kind == "internal"]
        internal.sort(key=lambda n: (len(n.path), n.path))
        return [(n.path, n.step) for n in internal]


def tree_critical_faces(tree: MatchingTree) -> List[Face]:
    """A-sets of the nonempty leaves, ascending."""
    return sorted((tuple(sorted(n.sigma.a)) for n in tree.nonempty_leaves()), key=face_sort_key)


def critical_sizes(tree: MatchingTree) -> List[int]:
    return sorted(len(n.sigma.a) for n in tree.nonempty_leaves())


# --- Scripts ---
@dataclass(frozen=True)
class ScriptLine:
    path: str
    step: ScriptStep
    note: str = ""


@dataclass(frozen=True)
class ScriptFinding:
    """A prose step that could not be applied and was replaced by search."""
    path: str
    note: str
    reason: str


def run_script(g: Graph, program: Sequence[ScriptLine], node_budget: int = DEFAULT_NODE_BUDGET,
               fanout: int = DEFAULT_SEARCH_FANOUT) -> MatchingTree:
    """Executes a node-addressed program, validating every step, and checks completeness."""
    tree = MatchingTree.start(g)
    for index, line in enumerate(program):
        if isinstance(line.step, Search):
            node = tree.nodes.get(line.path)
            if node is None or node.kind != "open":
                raise ScriptError(line.path, index, "search target is not an open leaf", line.note)
            graft_search(tree, line.path, node_budget, fanout)
        else:
            tree.apply(line.path, line.step, index, line.note)
    tree.ensure_complete()
    for leaf in tree.nonempty_leaves():
        if expand_sigma(g, leaf.sigma) != [tuple(sorted(leaf.sigma.a))]:
            raise ContractError(f"leaf '{path_name(leaf.path)}' does not hold exactly its A-set")
    logging.debug("script on %s: %d nodes, %d critical leaves",
                  g.name, len(tree.nodes), len(tree.nonempty_leaves()))
    return tree


# --- Search ---
@dataclass(frozen=True)
class _Plan:
    step: Optional[TreeStep]
    children: Tuple["_Plan", ...]
    sizes: Tuple[int, ...]      # critical cell sizes relative to the subtree root


_EMPTY_LEAF = _Plan(None, (), ())
_SINGLE_LEAF = _Plan(None, (), (0,))


def default_objective(sizes: Tuple[int, ...]) -> tuple:
    """Fewest critical cells, then smallest spread of sizes, then sizes."""
    spread = (max(sizes) - min(sizes)) if sizes else 0
    return (len(sizes), spread, sizes)


class _Searcher:
    def __init__(self, g: Graph, objective: Callable[[Tuple[int, ...]], tuple],
                 node_budget: int, fanout: int):
        self.g = g
        self.objective = objective
        self.node_budget = node_budget
        self.fanout = fanout
        self.memo: Dict[FrozenSet[int], _Plan] = {}
        self.bounds: Dict[FrozenSet[int], int] = {}

    def lower_bound(self, residual: FrozenSet[int]) -> int:
        # the number of critical cells is at least |reduced Euler characteristic|
        if residual not in self.bounds:
            self.bounds[residual] = abs(independence_polynomial_at_minus_one(self.g, residual))
        return self.bounds[residual]

    def candidates(self, residual: FrozenSet[int]) -> List[TreeStep]:
        adj = self.g.adjacency
        steps: List[TreeStep] = []
        seen_v = set()
        for p in sorted(residual):
            left = adj[p] & residual
            if len(left) == 1:
                (v,) = left
                if v not in seen_v:
                    seen_v.add(v)
                    steps.append(Match(v, p))
        degrees = {v: len(adj[v] & residual) for v in residual}
        by_degree = sorted(residual, key=lambda v: (-degrees[v], v))
        steps.extend(Split(v) for v in by_degree[:self.fanout])
        return steps

    def children(self, residual: FrozenSet[int], step: TreeStep) -> List[FrozenSet[int]]:
        adj = self.g.adjacency
        if isinstance(step, Split):
            return [residual - {step.v}, residual - {step.v} - adj[step.v]]
        return [residual - {step.v} - adj[step.v]]

    def combine(self, step: TreeStep, plans: List[_Plan]) -> _Plan:
        if isinstance(step, Split):
            out_sizes, in_sizes = plans[0].sizes, tuple(s + 1 for s in plans[1].sizes)
            return _Plan(step, tuple(plans), tuple(sorted(out_sizes + in_sizes)))
        return _Plan(step, tuple(plans), tuple(s + 1 for s in plans[0].sizes))

    def best(self, residual: FrozenSet[int]) -> _Plan:
        if residual in self.memo:
            return self.memo[residual]
        if not residual:
            return _SINGLE_LEAF
        if len(self.memo) >= self.node_budget:
            raise _BudgetExhausted()
        adj = self.g.adjacency
        for p in sorted(residual):
            if not adj[p] & residual:
                plan = _Plan(Free(p), (_EMPTY_LEAF,), ())
                self.memo[residual] = plan
                return plan
        bound = self.lower_bound(residual)
        chosen: Optional[_Plan] = None
        for step in self.candidates(residual):
            plan = self.combine(step, [self.best(r) for r in self.children(residual, step)])
            if chosen is None or self.objective(plan.sizes) < self.objective(chosen.sizes):
                chosen = plan
            spread = (max(chosen.sizes) - min(chosen.sizes)) if chosen.sizes else 0
            if len(chosen.sizes) <= bound and spread == 0:
                break
        self.memo[residual] = chosen
        return chosen

    def greedy(self, residual: FrozenSet[int]) -> _Plan:
        """First candidate at every node; used as the fallback when the budget runs out."""
        if not residual:
            return _SINGLE_LEAF
        for p in sorted(residual):
            if not self.g.adjacency[p] & residual:
                return _Plan(Free(p), (_EMPTY_LEAF,), ())
        step = self.candidates(residual)[0]
        return self.combine(step, [self.greedy(r) for r in self.children(residual, step)])


class _BudgetExhausted(Exception):
    pass


def _replay(tree: MatchingTree, path: str, plan: _Plan) -> None:
    if plan.step is None:
        return
    child_paths = tree.apply(path, plan.step, note="search")
    for child_path, child_plan in zip(child_paths, plan.children):
        _replay(tree, child_path, child_plan)


def graft_search(tree: MatchingTree, path: str, node_budget: int = DEFAULT_NODE_BUDGET,
                 fanout: int = DEFAULT_SEARCH_FANOUT,
                 objective: Callable[[Tuple[int, ...]], tuple] = default_objective) -> None:
    """Replaces the open leaf at `path` by the best subtree the search finds on its residual."""
    g = tree.graph
    residual = tree.nodes[path].sigma.residual(g)
    if len(residual) > SEARCH_VERTEX_BOUND:
        raise SizeError("search vertex bound", SEARCH_VERTEX_BOUND,
                        f"residual of {len(residual)} vertices at '{path_name(path)}'")
    searcher = _Searcher(g, objective, node_budget, fanout)
    try:
        plan = searcher.best(residual)
    except _BudgetExhausted:
        _replay(tree, path, searcher.greedy(residual))
        raise SearchError(f"search node budget {node_budget} exhausted at '{path_name(path)}'",
                          best=tree) from None
    _replay(tree, path, plan)


def search_tree(g: Graph, objective: Callable[[Tuple[int, ...]], tuple] = default_objective,
                node_budget: int = DEFAULT_NODE_BUDGET, fanout: int = DEFAULT_SEARCH_FANOUT) -> MatchingTree:
    """Deterministic backtracking search for a matching tree with few critical cells."""
    if g.num_vertices > SEARCH_VERTEX_BOUND:
        raise SizeError("search vertex bound", SEARCH_VERTEX_BOUND,
                        f"{g.name} has {g.num_vertices} vertices")
    tree = MatchingTree.start(g)
    if tree.nodes[ROOT].kind == "open":
        graft_search(tree, ROOT, node_budget, fanout, objective)
    return tree


# --- Matchings ---
@dataclass
class PartialMatching:
    complex: SimplicialComplex
    pairs: List[Tuple[Face, Face]]
    verified: bool = False

    def __post_init__(self):
        self.pairs = sorted(self.pairs, key=lambda pair: (face_sort_key(pair[0]), pair[1]))

    def matched_faces(self) -> set:
        return {f for pair in self.pairs for f in pair}

    def critical_faces(self) -> List[Face]:
        matched = self.matched_faces()
        return [f for f in self.complex.all_faces() if f not in matched]


def induced_matching(g: Graph, tree: MatchingTree, k: Optional[SimplicialComplex] = None,
                     face_budget: Optional[int] = None) -> PartialMatching:
    """Routes every face down the tree and pairs it by toggling the witness of the first Free/Match it meets."""
    tree.ensure_complete()
    if k is None:
        k = independence_complex(g, face_budget) if face_budget else independence_complex(g)
    pairs: List[Tuple[Face, Face]] = []
    for face in k.all_faces():
        members = set(face)
        node = tree.nodes[ROOT]
        while True:
            step = node.step
            if node.kind == "nonempty":
                if face != tuple(sorted(node.sigma.a)):
                    raise ContractError(
                        f"face {k.label_face(face)} reached leaf '{path_name(node.path)}' "
                        f"but the leaf holds {k.label_face(tuple(sorted(node.sigma.a)))}")
                break
            if node.kind != "internal":
                raise ContractError(f"face {k.label_face(face)} reached empty leaf '{path_name(node.path)}'")
            if isinstance(step, Split):
                node = tree.nodes[node.children[1 if step.v in members else 0]]
                continue
            if isinstance(step, Match) and step.v in members:
                node = tree.nodes[node.children[0]]
                continue
            if step.p not in members:
                pairs.append((face, tuple(sorted(face + (step.p,)))))
            break
    return PartialMatching(k, pairs)


@dataclass(frozen=True)
class AcyclicityCheck:
    ok: bool
    cycle: Tuple[Face, ...] = ()


def check_well_formed(k: SimplicialComplex, matching: PartialMatching) -> None:
    seen = set()
    for lower, upper in matching.pairs:
        if not (k.contains(lower) and k.contains(upper)):
            raise ContractError(f"pair ({k.label_face(lower)}, {k.label_face(upper)}) leaves the complex")
        if len(upper) != len(lower) + 1 or not set(lower) < set(upper):
            raise ContractError(f"pair ({lower}, {upper}) is not a cover pair")
        for f in (lower, upper):
            if f in seen:
                raise ContractError(f"face {k.label_face(f)} is matched twice")
            seen.add(f)


def verify_acyclic(k: SimplicialComplex, matching: PartialMatching) -> AcyclicityCheck:
    """Looks for b1 > d(b1) < b2 > d(b2) < ... < b1 among the matched pairs."""
    check_well_formed(k, matching)
    down = {upper: lower for lower, upper in matching.pairs}
    universe = range(len(k.labels))
    digraph = nx.DiGraph()
    digraph.add_nodes_from(down)
    for upper, lower in down.items():
        members = set(lower)
        for x in universe:
            if x in members:
                continue
            other = tuple(sorted(lower + (x,)))
            if other != upper and other in down:
                digraph.add_edge(upper, other)
    try:
        edges = nx.find_cycle(digraph)
    except nx.NetworkXNoCycle:
        matching.verified = True
        return AcyclicityCheck(True)
    cycle: List[Face] = []
    for upper, _ in edges:
        cycle.extend((upper, down[upper]))
    logging.warning("matching on %s has a cycle of length %d", k.name, len(edges))
    return AcyclicityCheck(False, tuple(cycle))


# --- Patchwork ---
@dataclass
class GradeMap:
    chain: Tuple[object, ...]
    assignment: Dict[Face, object]

    def __post_init__(self):
        self._rank = {grade: i for i, grade in enumerate(self.chain)}

    def rank(self, face: Face) -> int:
        return self._rank[self.assignment[face]]

    def fiber(self, grade: object) -> List[Face]:
        return [f for f, q in self.assignment.items() if q == grade]


def check_order_preserving(k: SimplicialComplex, grading: GradeMap,
                           faces: Optional[set] = None) -> None:
    """Raises OrderError on the first cover pair sigma < tau with grade(sigma) > grade(tau)."""
    for sigma, tau in cover_pairs_within(k, faces):
        if grading.rank(sigma) > grading.rank(tau):
            raise OrderError(k.label_face(sigma), k.label_face(tau),
                             f"grade {grading.assignment[sigma]} of {k.label_face(sigma)} exceeds "
                             f"grade {grading.assignment[tau]} of {k.label_face(tau)}")


def cover_pairs_within(k: SimplicialComplex, faces: Optional[set] = None) -> Iterator[Tuple[Face, Face]]:
    for sigma, tau in cover_pairs(k):
        if faces is None or (sigma in faces and tau in faces):
            yield sigma, tau


def patchwork_compose(k: SimplicialComplex, grading: GradeMap,
                      per_grade: Dict[object, List[Tuple[Face, Face]]],
                      faces: Optional[set] = None) -> PartialMatching:
    """Union of per-grade acyclic matchings under an order-preserving grading.

    `faces` restricts the grading to a sub-poset (a fibre of an outer grading).
    """
    check_order_preserving(k, grading, faces)
    union: List[Tuple[Face, Face]] = []
    for grade in grading.chain:
        pairs = per_grade.get(grade, [])
        for lower, upper in pairs:
            if grading.assignment.get(lower) != grade or grading.assignment.get(upper) != grade:
                raise ContractError(f"pair ({k.label_face(lower)}, {k.label_face(upper)}) "
                                    f"leaves grade {grade}")
        check = verify_acyclic(k, PartialMatching(k, pairs))
        if not check.ok:
            raise AuditError(grade, "matching has a cycle: " + " ".join(k.label_face(f) for f in check.cycle))
        union.extend(pairs)
    composed = PartialMatching(k, union)
    if not verify_acyclic(k, composed).ok:
        raise AuditError("all", "composed matching has a cycle")
    return composed


# --- Summaries ---
@dataclass(frozen=True)
class MorseSummary:
    critical_counts: Dict[int, int]
    empty_matched: bool
    num_pairs: Optional[int] = None
    num_faces: Optional[int] = None

    def single_dimension(self) -> Optional[Tuple[int, int]]:
        nonzero = [(d, c) for d, c in sorted(self.critical_counts.items()) if c]
        return nonzero[0] if len(nonzero) == 1 else None

    def total_critical(self) -> int:
        return sum(self.critical_counts.values())

    def to_dict(self) -> Dict[str, object]:
        return {
            "critical": {str(d): c for d, c in sorted(self.critical_counts.items())},
            "empty_matched": self.empty_matched,
            "pairs": self.num_pairs,
            "faces": self.num_faces,
        }


def morse_summary(matching: PartialMatching) -> MorseSummary:
    if not matching.verified:
        raise ContractError("morse_summary needs a matching verified acyclic")
    counts: Dict[int, int] = {}
    critical = matching.critical_faces()
    for face in critical:
        counts[len(face) - 1] = counts.get(len(face) - 1, 0) + 1
    summary = MorseSummary(counts, () not in critical, len(matching.pairs), matching.complex.num_faces)
    if 2 * summary.num_pairs + summary.total_critical() != summary.num_faces:
        raise ContractError("pairs and critical cells do not account for every face")
    return summary


def summary_from_tree(tree: MatchingTree) -> MorseSummary:
    """Critical counts read off the leaves without building the complex."""
    counts: Dict[int, int] = {}
    for size in critical_sizes(tree):
        counts[size - 1] = counts.get(size - 1, 0) + 1
    return MorseSummary(counts, -1 not in counts)


def free_vertex_soundness(g: Graph, node: SigmaNode, p: int) -> bool:
    """Free(p) pairs every face of Sigma(A, B) with a partner inside Sigma(A, B)."""
    if validate_step(g, node, Free(p)) is not None:
        return False
    faces = set(expand_sigma(g, node))
    paired = 0
    for face in faces:
        if p in face:
            continue
        partner = tuple(sorted(face + (p,)))
        if partner not in faces:
            return False
        paired += 1
    return 2 * paired == len(faces)


def consistent_with_tree(tree: MatchingTree, matching: PartialMatching) -> bool:
    return sorted(matching.critical_faces(), key=face_sort_key) == tree_critical_faces(tree)
