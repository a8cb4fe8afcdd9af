"""
complexes.py

Independence and neighborhood complexes with explicit face sets, f-vectors,
Euler characteristics and the cover relation of the face poset. The empty
face is a first-class face of dimension -1.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from errors import ParameterError, SizeError
from graphs import Graph, SubsetLabel, VertexLabel

# --- Constants ---
DEFAULT_FACE_BUDGET = 2_000_000

Face = Tuple[int, ...]


def face_sort_key(face: Face) -> Tuple[int, Face]:
    return (len(face), face)


@dataclass(frozen=True)
class FVector:
    """f_{-1}, f_0, f_1, ...; counts[0] is the empty face."""
    counts: Tuple[int, ...]

    def f(self, d: int) -> int:
        index = d + 1
        return self.counts[index] if 0 <= index < len(self.counts) else 0

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.counts) + ")"


@dataclass(frozen=True)
class SimplicialComplex:
    """All faces of a complex, grouped by dimension, each group sorted."""
    name: str
    labels: Tuple[VertexLabel, ...]
    faces_by_dim: Tuple[Tuple[Face, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.faces_by_dim) - 2

    @property
    def num_faces(self) -> int:
        return sum(len(group) for group in self.faces_by_dim)

    def faces_of_dim(self, d: int) -> Tuple[Face, ...]:
        index = d + 1
        if 0 <= index < len(self.faces_by_dim):
            return self.faces_by_dim[index]
        return ()

    def all_faces(self) -> Iterator[Face]:
        for group in self.faces_by_dim:
            yield from group

    @cached_property
    def position(self) -> Dict[Face, int]:
        """Face -> position inside its dimension group."""
        return {face: i for group in self.faces_by_dim for i, face in enumerate(group)}

    def contains(self, face: Iterable[int]) -> bool:
        return tuple(sorted(face)) in self.position

    @cached_property
    def maximal_faces(self) -> Tuple[Face, ...]:
        covered = set()
        for face in self.all_faces():
            for i in range(len(face)):
                covered.add(face[:i] + face[i + 1:])
        return tuple(f for f in self.all_faces() if f not in covered)

    def label_face(self, face: Face) -> str:
        return "{" + ",".join(str(self.labels[i]) for i in face) + "}"


def _group_faces(faces: Iterable[Face]) -> Tuple[Tuple[Face, ...], ...]:
    groups: Dict[int, List[Face]] = {}
    for face in faces:
        groups.setdefault(len(face), []).append(face)
    top = max(groups) if groups else -1
    return tuple(tuple(sorted(groups.get(size, []))) for size in range(top + 1))


# --- Independence complex ---
def _adjacency_masks(g: Graph) -> List[int]:
    return [sum(1 << u for u in g.adjacency[v]) for v in range(g.num_vertices)]


def independence_complex(g: Graph, face_budget: int = DEFAULT_FACE_BUDGET) -> SimplicialComplex:
    """Ind(G): all independent sets of G, by ordered backtracking level by level."""
    masks = _adjacency_masks(g)
    full = (1 << g.num_vertices) - 1
    # each entry carries the mask of vertices that may still be appended
    level: List[Tuple[Face, int]] = [((), full)]
    groups: List[Tuple[Face, ...]] = []
    total = 0
    while level:
        groups.append(tuple(face for face, _ in level))
        total += len(level)
        if total > face_budget:
            raise SizeError("face budget", face_budget,
                            f"Ind({g.name}) exceeds the face budget of {face_budget}")
        next_level: List[Tuple[Face, int]] = []
        for face, allowed in level:
            bits = allowed
            while bits:
                low = bits & -bits
                v = low.bit_length() - 1
                bits ^= low
                higher = full & ~((low << 1) - 1)
                next_level.append((face + (v,), allowed & ~masks[v] & higher))
        level = next_level
    logging.debug("Ind(%s): %d faces, dimension %d", g.name, total, len(groups) - 2)
    return SimplicialComplex(f"Ind({g.name})", g.labels, tuple(groups))


def complex_from_maximal_faces(labels: Sequence[VertexLabel], maximal: Iterable[Iterable[int]],
                               name: str = "K", face_budget: int = DEFAULT_FACE_BUDGET) -> SimplicialComplex:
    """Downward closure of the given generators (the empty face is always included)."""
    faces = {()}
    for generator in maximal:
        generator = tuple(sorted(set(generator)))
        for v in generator:
            if not 0 <= v < len(labels):
                raise ParameterError(f"face vertex {v} outside universe of size {len(labels)}")
        for size in range(1, len(generator) + 1):
            faces.update(itertools.combinations(generator, size))
        if len(faces) > face_budget:
            raise SizeError("face budget", face_budget, f"{name} exceeds the face budget of {face_budget}")
    return SimplicialComplex(name, tuple(labels), _group_faces(faces))


def neighborhood_complex(g: Graph, face_budget: int = DEFAULT_FACE_BUDGET) -> SimplicialComplex:
    """Complex generated by the neighbor sets N(v)."""
    generators = [sorted(g.adjacency[v]) for v in range(g.num_vertices)]
    return complex_from_maximal_faces(g.labels, generators, f"N({g.name})", face_budget)


# --- Counts ---
def f_vector(k: SimplicialComplex) -> FVector:
    return FVector(tuple(len(group) for group in k.faces_by_dim))


def euler_characteristic(k: SimplicialComplex) -> int:
    """Unreduced: sum over d >= 0 of (-1)^d f_d."""
    return sum((-1) ** (size - 1) * len(group)
               for size, group in enumerate(k.faces_by_dim) if size >= 1)


def cover_pairs(k: SimplicialComplex) -> Iterator[Tuple[Face, Face]]:
    """(facet, face) pairs in ascending coface order, facets ascending within a coface."""
    for group in k.faces_by_dim[1:]:
        for tau in group:
            for i in reversed(range(len(tau))):
                yield tau[:i] + tau[i + 1:], tau


def independence_count(g: Graph) -> int:
    """Number of independent sets (empty set included) by vertex in/out recursion."""
    masks = _adjacency_masks(g)

    @lru_cache(maxsize=None)
    def count(remaining: int) -> int:
        if not remaining:
            return 1
        low = remaining & -remaining
        v = low.bit_length() - 1
        rest = remaining ^ low
        return count(rest) + count(rest & ~masks[v])

    return count((1 << g.num_vertices) - 1)


def independence_polynomial_at_minus_one(g: Graph, vertices: Optional[Iterable[int]] = None) -> int:
    """I(G[S]; -1) = sum over independent sets I of (-1)^|I|.

    Minus this value is the reduced Euler characteristic of Ind(G[S]).
    """
    masks = _adjacency_masks(g)
    start = sum(1 << v for v in (range(g.num_vertices) if vertices is None else vertices))

    @lru_cache(maxsize=None)
    def evaluate(remaining: int) -> int:
        if not remaining:
            return 1
        # an isolated vertex contributes a factor (1 + x)
        best, best_degree = -1, -1
        bits = remaining
        while bits:
            low = bits & -bits
            v = low.bit_length() - 1
            bits ^= low
            degree = bin(masks[v] & remaining).count("1")
            if degree == 0:
                return 0
            if degree > best_degree:
                best, best_degree = v, degree
        rest = remaining & ~(1 << best)
        return evaluate(rest) - evaluate(rest & ~masks[best])

    return evaluate(start)


# --- Ind(SG_{2,k}) maximal faces ---
def wheels_and_triangles(k: int) -> Dict[str, Tuple[SubsetLabel, ...]]:
    """Claimed maximal faces of Ind(SG_{2,k}): wheels W_i and stable triangles T_{i,j,h}."""
    if k < 2:
        raise ParameterError(f"wheels and triangles need k >= 2, got {k}")
    m = k + 4

    def adjacent(a: int, b: int) -> bool:
        return (a - b) % m in (1, m - 1)

    faces: Dict[str, Tuple[SubsetLabel, ...]] = {}
    for i in range(1, m + 1):
        wheel = sorted(tuple(sorted((i, j))) for j in range(1, m + 1)
                       if j != i and not adjacent(i, j))
        faces[f"W{i}"] = tuple(SubsetLabel(p) for p in wheel)
    for i, j, h in itertools.combinations(range(1, m + 1), 3):
        if adjacent(i, j) or adjacent(j, h) or adjacent(i, h):
            continue
        faces[f"T{i},{j},{h}"] = (SubsetLabel((i, j)), SubsetLabel((i, h)), SubsetLabel((j, h)))
    return faces


def labels_to_face(g: Graph, labels: Iterable[VertexLabel]) -> Face:
    return tuple(sorted(g.index_of(label) for label in labels))
