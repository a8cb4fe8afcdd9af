"""
graphs.py

Generators for every graph family the toolkit works with: Kneser and
stable Kneser graphs, cycles, paths, complete and complete bipartite
graphs, the antipodal cycle DC_{2n+2}, the odd cycle C_{n+1}, the end-ladder
graphs EL_r, the graphs E_{2n+2} and cartesian products. Also classifies the
vertices of SG_{n,2} into alternating end, bipartite end and middle vertices,
and provides the two small exact oracles (chromatic number, isomorphism).

Graphs are immutable. Every generator emits vertices sorted by label, so all
downstream artifacts are deterministic.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from errors import ParameterError, SizeError

# --- Constants ---
DEFAULT_CHROMATIC_BOUND = 40
DEFAULT_ISOMORPHISM_BOUND = 64

FAMILY_TAGS = ("kg", "sg", "c", "p", "k", "kb", "dc", "codd", "el", "e", "prod")


# --- Vertex labels ---
@dataclass(frozen=True)
class SubsetLabel:
    """An n-subset of [m], entries strictly increasing."""
    items: Tuple[int, ...]

    def sort_key(self) -> tuple:
        return (0, len(self.items), self.items)

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.items) + "}"


@dataclass(frozen=True)
class IntLabel:
    value: int

    def sort_key(self) -> tuple:
        return (1, self.value)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class CycleLabel:
    """The vertex c_i of DC_{2n+2} or C_{n+1}."""
    index: int

    def sort_key(self) -> tuple:
        return (2, self.index)

    def __str__(self) -> str:
        return f"c{self.index}"


@dataclass(frozen=True)
class PairLabel:
    left: "VertexLabel"
    right: "VertexLabel"

    def sort_key(self) -> tuple:
        return (3, self.left.sort_key(), self.right.sort_key())

    def __str__(self) -> str:
        return f"({self.left},{self.right})"


VertexLabel = Union[SubsetLabel, IntLabel, CycleLabel, PairLabel]


def parse_label(text: str) -> VertexLabel:
    """Inverse of str() on labels: '{1,3,5}', 'c7', '12', '(a,b)'."""
    text = text.strip()
    if not text:
        raise ParameterError("empty vertex label")
    if text.startswith("{") and text.endswith("}"):
        body = text[1:-1]
        items = tuple(int(x) for x in body.split(",")) if body else ()
        return SubsetLabel(items)
    if text.startswith("(") and text.endswith(")"):
        body = text[1:-1]
        depth = 0
        for pos, ch in enumerate(body):
            if ch in "({":
                depth += 1
            elif ch in ")}":
                depth -= 1
            elif ch == "," and depth == 0:
                return PairLabel(parse_label(body[:pos]), parse_label(body[pos + 1:]))
        raise ParameterError(f"malformed pair label '{text}'")
    if text.startswith("c"):
        return CycleLabel(int(text[1:]))
    return IntLabel(int(text))


# --- Graph ---
@dataclass(frozen=True)
class Graph:
    """Labeled vertices plus a symmetric, irreflexive adjacency."""
    name: str
    labels: Tuple[VertexLabel, ...]
    adjacency: Tuple[FrozenSet[int], ...]

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as index pairs (i, j), i < j, in lexicographic order."""
        return [(i, j) for i in range(self.num_vertices)
                for j in sorted(self.adjacency[i]) if i < j]

    @cached_property
    def _index(self) -> Dict[VertexLabel, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, label: VertexLabel) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ParameterError(f"vertex {label} not in graph {self.name}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def to_networkx(self) -> nx.Graph:
        nx_graph = nx.Graph()
        for i, label in enumerate(self.labels):
            nx_graph.add_node(i, label=str(label))
        nx_graph.add_edges_from(self.edges())
        return nx_graph


def graph_from_edges(name: str, labels: Sequence[VertexLabel],
                     edges: Iterable[Tuple[VertexLabel, VertexLabel]]) -> Graph:
    """Builds a Graph from labeled edges, sorting vertices by label."""
    ordered = sorted(labels, key=lambda label: label.sort_key())
    if len(set(ordered)) != len(ordered):
        raise ParameterError(f"duplicate vertex labels in {name}")
    index = {label: i for i, label in enumerate(ordered)}
    adjacency: List[set] = [set() for _ in ordered]
    for u, v in edges:
        if u == v:
            raise ParameterError(f"self-loop at {u} in {name}")
        try:
            iu, iv = index[u], index[v]
        except KeyError as e:
            raise ParameterError(f"edge endpoint {e.args[0]} unknown in {name}") from None
        adjacency[iu].add(iv)
        adjacency[iv].add(iu)
    return Graph(name, tuple(ordered), tuple(frozenset(a) for a in adjacency))


@dataclass(frozen=True)
class FamilyParams:
    family: str
    n: Optional[int] = None
    k: Optional[int] = None
    r: Optional[int] = None
    m: Optional[int] = None
    sizes: Tuple[int, ...] = field(default_factory=tuple)

    def describe(self) -> str:
        """Compact, whitespace-free parameter string, e.g. 'n=2,k=1'."""
        parts = []
        for key in ("n", "k", "r", "m"):
            value = getattr(self, key)
            if value is not None:
                parts.append(f"{key}={value}")
        if self.sizes:
            parts.append("sizes=" + "x".join(str(s) for s in self.sizes))
        return ",".join(parts) or "-"


# --- Stable subsets and Kneser graphs ---
def is_stable(subset: Iterable[int], m: int) -> bool:
    """True iff no two cyclically consecutive elements of [m] both occur."""
    members = set(subset)
    for x in members:
        if not 1 <= x <= m:
            raise ParameterError(f"entry {x} outside [1, {m}]")
    if len(members) < 2:
        return True
    return not any((x % m) + 1 in members for x in members)


def _check_kneser_params(n: int, k: int) -> None:
    if n < 1 or k < 0:
        raise ParameterError(f"need n >= 1 and k >= 0, got n={n}, k={k}")


def _disjointness_graph(name: str, subsets: List[Tuple[int, ...]]) -> Graph:
    masks = [sum(1 << x for x in s) for s in subsets]
    labels = [SubsetLabel(s) for s in subsets]
    edges = [(labels[i], labels[j])
             for i, j in itertools.combinations(range(len(subsets)), 2)
             if masks[i] & masks[j] == 0]
    return graph_from_edges(name, labels, edges)


def stable_kneser(n: int, k: int) -> Graph:
    """SG_{n,k}: stable n-subsets of [2n+k], edges between disjoint subsets."""
    _check_kneser_params(n, k)
    m = 2 * n + k
    subsets = [s for s in itertools.combinations(range(1, m + 1), n) if is_stable(s, m)]
    logging.debug("SG_{%d,%d}: %d stable subsets", n, k, len(subsets))
    return _disjointness_graph(f"SG_{n},{k}", subsets)


def kneser(n: int, k: int) -> Graph:
    """KG_{n,k}: all n-subsets of [2n+k], edges between disjoint subsets."""
    _check_kneser_params(n, k)
    m = 2 * n + k
    return _disjointness_graph(f"KG_{n},{k}", list(itertools.combinations(range(1, m + 1), n)))


# --- Basic families ---
def basic_graph(tag: str, *sizes: int) -> Graph:
    """C_j, P_j, K_j or K_{a,b} on integer labels 1, 2, ..."""
    tag = tag.upper()
    if tag == "C":
        (j,) = sizes
        if j < 3:
            raise ParameterError(f"cycle needs at least 3 vertices, got {j}")
        labels = [IntLabel(i) for i in range(1, j + 1)]
        edges = [(labels[i], labels[(i + 1) % j]) for i in range(j)]
        return graph_from_edges(f"C_{j}", labels, edges)
    if tag == "P":
        (j,) = sizes
        if j < 1:
            raise ParameterError(f"path needs at least 1 vertex, got {j}")
        labels = [IntLabel(i) for i in range(1, j + 1)]
        edges = [(labels[i], labels[i + 1]) for i in range(j - 1)]
        return graph_from_edges(f"P_{j}", labels, edges)
    if tag == "K":
        (j,) = sizes
        if j < 1:
            raise ParameterError(f"complete graph needs at least 1 vertex, got {j}")
        labels = [IntLabel(i) for i in range(1, j + 1)]
        return graph_from_edges(f"K_{j}", labels, itertools.combinations(labels, 2))
    if tag == "KB":
        a, b = sizes
        if a < 1 or b < 1:
            raise ParameterError(f"bipartite parts must be nonempty, got {a},{b}")
        left = [IntLabel(i) for i in range(1, a + 1)]
        right = [IntLabel(i) for i in range(a + 1, a + b + 1)]
        return graph_from_edges(f"K_{a},{b}", left + right, itertools.product(left, right))
    raise ParameterError(f"unknown basic graph tag '{tag}'")


def _cyc(i: int, modulus: int) -> CycleLabel:
    return CycleLabel((i - 1) % modulus + 1)


def dc_cycle(n: int) -> Graph:
    """DC_{2n+2}: a (2n+2)-cycle plus the n+1 antipodal chords."""
    if n < 2:
        raise ParameterError(f"DC_(2n+2) needs n >= 2, got {n}")
    m = 2 * n + 2
    labels = [CycleLabel(i) for i in range(1, m + 1)]
    edges = [(_cyc(i, m), _cyc(i + 1, m)) for i in range(1, m + 1)]
    edges += [(_cyc(i, m), _cyc(i + n + 1, m)) for i in range(1, n + 2)]
    return graph_from_edges(f"DC_{m}", labels, edges)


def c_odd(n: int) -> Graph:
    """C_{n+1} on c_1, c_3, ..., c_{2n+1}; only defined for even n."""
    if n < 2 or n % 2:
        raise ParameterError(f"C_(n+1) on odd labels needs even n >= 2, got {n}")
    m = 2 * n + 2
    labels = [CycleLabel(i) for i in range(1, m, 2)]
    edges = [(_cyc(i, m), _cyc(i + 2, m)) for i in range(1, m, 2)]
    return graph_from_edges(f"C_{n + 1}odd", labels, edges)


def _bipartite_block(n: int) -> Tuple[List[IntLabel], List[Tuple[IntLabel, IntLabel]]]:
    m = 2 * n + 2
    numbers = [IntLabel(i) for i in range(1, m + 1)]
    edges = [(IntLabel(i), IntLabel(j)) for i in range(1, m + 1, 2) for j in range(2, m + 1, 2)]
    return numbers, edges


def e_graph(n: int) -> Graph:
    """E_{2n+2}: K_{n+1,n+1} joined by spokes to DC_{2n+2} (n odd) or C_{n+1} (n even)."""
    if n < 2:
        raise ParameterError(f"E_(2n+2) needs n >= 2, got {n}")
    m = 2 * n + 2
    numbers, edges = _bipartite_block(n)
    if n % 2:
        ring = dc_cycle(n)
        spokes = [(IntLabel(i), CycleLabel(i)) for i in range(1, m + 1)]
    else:
        ring = c_odd(n)
        spokes = []
        for i in range(1, m, 2):
            spokes.append((CycleLabel(i), IntLabel(i)))
            spokes.append((CycleLabel(i), IntLabel((i + n) % m + 1)))
    ring_edges = [(ring.labels[i], ring.labels[j]) for i, j in ring.edges()]
    return graph_from_edges(f"E_{m}", numbers + list(ring.labels), edges + ring_edges + spokes)


def el_graph(r: int) -> Graph:
    """EL_r as a ladder: path a_1..a_r, path b_1..b_{r+2}, rungs a_i - b_{i+1}.

    a_i is labeled i and b_j is labeled r + j. For r = 0 this is K_2 and for
    r = 1 the star K_{1,3}.
    """
    if r < 0:
        raise ParameterError(f"EL_r needs r >= 0, got {r}")
    a = [IntLabel(i) for i in range(1, r + 1)]
    b = [IntLabel(r + j) for j in range(1, r + 3)]
    edges = [(a[i], a[i + 1]) for i in range(r - 1)]
    edges += [(b[j], b[j + 1]) for j in range(r + 1)]
    edges += [(a[i], b[i + 1]) for i in range(r)]
    return graph_from_edges(f"EL_{r}", a + b, edges)


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """G □ H on PairLabels."""
    if g.num_vertices == 0 or h.num_vertices == 0:
        raise ParameterError("cartesian product of an empty graph")
    product = nx.cartesian_product(g.to_networkx(), h.to_networkx())
    labels = [PairLabel(g.labels[u], h.labels[v]) for u, v in product.nodes]
    edges = [(PairLabel(g.labels[a[0]], h.labels[a[1]]), PairLabel(g.labels[b[0]], h.labels[b[1]]))
             for a, b in product.edges]
    return graph_from_edges(f"{g.name}x{h.name}", labels, edges)


# --- Vertex classification of SG_{n,2} ---
def p_param(n: int) -> int:
    return n if n % 2 else n - 1


def o_param(n: int) -> int:
    return (n + 1) // 2 if (n + 1) % 2 == 0 else (n + 2) // 2


@dataclass(frozen=True)
class VertexClassification:
    n: int
    classes: Dict[str, Tuple[int, ...]]

    @property
    def counts(self) -> Tuple[int, int, int]:
        return tuple(len(self.classes[c]) for c in ("A", "B", "M"))

    def class_of(self, v: int) -> str:
        for name, members in self.classes.items():
            if v in members:
                return name
        raise ParameterError(f"vertex {v} unclassified")


def alternating_base_pattern(n: int) -> Tuple[int, ...]:
    p = p_param(n)
    return tuple(range(1, p + 1, 2)) + tuple(range(p + 3, 2 * n + 1, 2))


def classify_sg_n2(n: int) -> VertexClassification:
    """Splits the vertices of SG_{n,2} into classes A, B and M."""
    if n < 2:
        raise ParameterError(f"classification needs n >= 2, got {n}")
    m = 2 * n + 2
    graph = stable_kneser(n, 2)
    base = alternating_base_pattern(n)
    orbit = {tuple(sorted((x + s - 1) % m + 1 for x in base)) for s in range(m)}
    evens = set(range(2, m + 1, 2))
    odds = set(range(1, m + 1, 2))
    classes: Dict[str, List[int]] = {"A": [], "B": [], "M": []}
    for v, label in enumerate(graph.labels):
        items = label.items
        members = set(items)
        if items in orbit:
            classes["A"].append(v)
        elif (members < evens) or (members < odds):
            classes["B"].append(v)
        else:
            classes["M"].append(v)
    result = VertexClassification(n, {c: tuple(vs) for c, vs in classes.items()})
    logging.debug("SG_{%d,2} classes (A,B,M) = %s", n, result.counts)
    return result


def expected_class_counts(n: int) -> Tuple[int, int, int]:
    a = n + 1 if n % 2 == 0 else 2 * n + 2
    return a, 2 * n + 2, (2 * n + 2) * (o_param(n) - 2)


def sg_class_subgraphs(n: int) -> Dict[str, Graph]:
    graph = stable_kneser(n, 2)
    classification = classify_sg_n2(n)
    return {c: induced_subgraph(graph, vs) for c, vs in classification.classes.items()}


# --- Subgraphs, isomorphism, coloring ---
def induced_subgraph(g: Graph, vertices: Iterable[Union[int, VertexLabel]]) -> Graph:
    """Subgraph induced on the given vertex indices (or labels), labels preserved."""
    chosen = set()
    for v in vertices:
        if isinstance(v, int):
            if not 0 <= v < g.num_vertices:
                raise ParameterError(f"vertex index {v} not in {g.name}")
            chosen.add(v)
        else:
            chosen.add(g.index_of(v))
    labels = [g.labels[v] for v in chosen]
    edges = [(g.labels[u], g.labels[w]) for u in chosen for w in g.adjacency[u] if w in chosen and u < w]
    return graph_from_edges(f"{g.name}[{len(chosen)}]", labels, edges)


def is_isomorphic_small(g: Graph, h: Graph, bound: int = DEFAULT_ISOMORPHISM_BOUND) -> bool:
    """Exact isomorphism test (VF2++) for graphs with at most `bound` vertices."""
    for graph in (g, h):
        if graph.num_vertices > bound:
            raise SizeError("isomorphism bound", bound,
                            f"{graph.name} has {graph.num_vertices} vertices (bound {bound})")
    if g.num_vertices != h.num_vertices or g.num_edges != h.num_edges:
        return False
    if sorted(g.degree(v) for v in range(g.num_vertices)) != \
            sorted(h.degree(v) for v in range(h.num_vertices)):
        return False
    if g.num_vertices == 0:
        return True
    return nx.vf2pp_is_isomorphic(g.to_networkx(), h.to_networkx())


def is_bipartite(g: Graph) -> bool:
    return nx.is_bipartite(g.to_networkx())


def is_regular(g: Graph, degree: Optional[int] = None) -> bool:
    degrees = {g.degree(v) for v in range(g.num_vertices)}
    if degree is not None:
        return degrees == {degree}
    return len(degrees) <= 1


def _saturation_order(g: Graph) -> List[int]:
    # static DSATUR-like ordering: repeatedly take the vertex with most
    # already-ordered neighbours, ties by degree then index
    remaining = set(range(g.num_vertices))
    order: List[int] = []
    placed = set()
    while remaining:
        v = max(sorted(remaining), key=lambda u: (len(g.adjacency[u] & placed), g.degree(u)))
        order.append(v)
        placed.add(v)
        remaining.remove(v)
    return order


def _find_k_coloring(g: Graph, k: int, order: List[int]) -> Optional[List[int]]:
    coloring = [-1] * g.num_vertices

    def extend(pos: int, used: int) -> bool:
        if pos == len(order):
            return True
        v = order[pos]
        forbidden = {coloring[u] for u in g.adjacency[v]}
        for color in range(used):
            if color not in forbidden:
                coloring[v] = color
                if extend(pos + 1, used):
                    return True
        if used < k:
            coloring[v] = used
            if extend(pos + 1, used + 1):
                return True
        coloring[v] = -1
        return False

    return coloring if extend(0, 0) else None


def chromatic_number_exact(g: Graph, bound: int = DEFAULT_CHROMATIC_BOUND) -> int:
    """Exact chromatic number by backtracking over color classes."""
    if g.num_vertices > bound:
        raise SizeError("chromatic bound", bound,
                        f"{g.name} has {g.num_vertices} vertices (bound {bound})")
    if g.num_vertices == 0:
        return 0
    order = _saturation_order(g)
    lower = 1 if g.num_edges == 0 else 2
    for k in range(lower, g.num_vertices + 1):
        if _find_k_coloring(g, k, order) is not None:
            return k
    return g.num_vertices


# --- Family dispatcher ---
def build_family(params: FamilyParams) -> Graph:
    """Builds the graph named by a FamilyParams record."""
    fam = params.family

    def need(name: str) -> int:
        value = getattr(params, name)
        if value is None:
            raise ParameterError(f"family '{fam}' needs parameter {name}")
        return value

    if fam == "kg":
        return kneser(need("n"), need("k"))
    if fam == "sg":
        return stable_kneser(need("n"), need("k"))
    if fam in ("c", "p", "k"):
        return basic_graph(fam.upper(), need("m"))
    if fam == "kb":
        if len(params.sizes) != 2:
            raise ParameterError("family 'kb' needs two sizes")
        return basic_graph("KB", *params.sizes)
    if fam == "dc":
        return dc_cycle(need("n"))
    if fam == "codd":
        return c_odd(need("n"))
    if fam == "el":
        return el_graph(need("r"))
    if fam == "e":
        return e_graph(need("n"))
    if fam == "prod":
        if len(params.sizes) != 2:
            raise ParameterError("family 'prod' needs two sizes (cycle, path)")
        cycle_size, path_size = params.sizes
        return cartesian_product(basic_graph("C", cycle_size), basic_graph("P", path_size))
    raise ParameterError(f"unknown family '{fam}'; expected one of {', '.join(FAMILY_TAGS)}")
