"""
homology.py

Integral reduced simplicial homology by boundary matrices and Smith normal
form. Exact integer arithmetic throughout; Python ints give arbitrary
precision.

The SNF runs in two phases: sparse elimination on unit pivots (Markowitz
style, smallest column first, sparsest row inside the column), then a dense
gcd-based diagonalization of whatever is left. Boundary matrices of the
complexes handled here are almost entirely consumed by the first phase.
"""

import heapq
import logging
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Dict, List, Optional, Set, Tuple

from complexes import Face, SimplicialComplex
from errors import SizeError

# --- Constants ---
DEFAULT_SNF_THRESHOLD = 200_000


@dataclass
class IntegerMatrix:
    """Sparse integer matrix stored by columns (row -> value)."""
    num_rows: int
    num_cols: int
    columns: List[Dict[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.columns:
            self.columns = [{} for _ in range(self.num_cols)]

    @classmethod
    def from_dense(cls, rows: List[List[int]]) -> "IntegerMatrix":
        num_rows = len(rows)
        num_cols = len(rows[0]) if rows else 0
        columns = [{i: rows[i][j] for i in range(num_rows) if rows[i][j]} for j in range(num_cols)]
        return cls(num_rows, num_cols, columns)

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * self.num_cols for _ in range(self.num_rows)]
        for j, column in enumerate(self.columns):
            for i, value in column.items():
                dense[i][j] = value
        return dense

    @property
    def num_entries(self) -> int:
        return sum(len(c) for c in self.columns)

    def multiply(self, other: "IntegerMatrix") -> "IntegerMatrix":
        """self · other."""
        product = []
        for column in other.columns:
            result: Dict[int, int] = {}
            for k, b in column.items():
                for i, a in self.columns[k].items():
                    result[i] = result.get(i, 0) + a * b
            product.append({i: v for i, v in result.items() if v})
        return IntegerMatrix(self.num_rows, other.num_cols, product)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)


@dataclass
class ChainComplex:
    """Reduced chain complex: bases[d + 1] lists the d-faces; boundaries[d] is ∂_d."""
    bases: List[Tuple[Face, ...]]
    boundaries: Dict[int, IntegerMatrix]

    @property
    def top_dimension(self) -> int:
        return len(self.bases) - 2

    def rank_of_chains(self, d: int) -> int:
        index = d + 1
        return len(self.bases[index]) if 0 <= index < len(self.bases) else 0

    def boundary_squared_is_zero(self) -> bool:
        for d in range(1, self.top_dimension + 1):
            if not self.boundaries[d - 1].multiply(self.boundaries[d]).is_zero():
                logging.error("∂_%d ∘ ∂_%d is not zero", d - 1, d)
                return False
        return True


@dataclass
class HomologyResult:
    """Reduced Betti numbers and torsion factors per dimension, from -1 upward."""
    complex_id: str
    betti: Dict[int, int]
    torsion: Optional[Dict[int, Tuple[int, ...]]]
    num_faces: int = 0

    @property
    def torsion_checked(self) -> bool:
        return self.torsion is not None

    def is_torsion_free(self) -> bool:
        return self.torsion is not None and all(not t for t in self.torsion.values())

    def nonzero_betti(self) -> Dict[int, int]:
        return {d: b for d, b in sorted(self.betti.items()) if b}

    def report_rows(self) -> List[str]:
        rows = []
        for d in sorted(self.betti):
            if self.torsion is None:
                torsion = "skipped"
            else:
                torsion = "[" + ",".join(str(t) for t in self.torsion.get(d, ())) + "]"
            rows.append(f"homology {self.complex_id} dim={d} betti={self.betti[d]} torsion={torsion}")
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "complex_id": self.complex_id,
            "num_faces": self.num_faces,
            "betti": {str(d): b for d, b in sorted(self.betti.items())},
            "torsion": None if self.torsion is None else
            {str(d): list(t) for d, t in sorted(self.torsion.items())},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HomologyResult":
        torsion = data.get("torsion")
        return cls(
            complex_id=data["complex_id"],
            betti={int(d): int(b) for d, b in data["betti"].items()},
            torsion=None if torsion is None else {int(d): tuple(t) for d, t in torsion.items()},
            num_faces=int(data.get("num_faces", 0)),
        )


# --- Chain complex ---
def boundary_matrices(k: SimplicialComplex, face_budget: Optional[int] = None) -> ChainComplex:
    """Reduced boundary matrices; sign of a facet is (-1)^position of the removed vertex."""
    if face_budget is not None and k.num_faces > face_budget:
        raise SizeError("face budget", face_budget, f"{k.name} has {k.num_faces} faces")
    bases = [tuple(group) for group in k.faces_by_dim]
    boundaries: Dict[int, IntegerMatrix] = {}
    for d in range(0, len(bases) - 1):
        lower = {face: i for i, face in enumerate(bases[d])}
        columns = []
        for tau in bases[d + 1]:
            columns.append({lower[tau[:i] + tau[i + 1:]]: (-1) ** i for i in range(len(tau))})
        boundaries[d] = IntegerMatrix(len(bases[d]), len(bases[d + 1]), columns)
    return ChainComplex(bases, boundaries)


# --- Smith normal form ---
def _unit_elimination(matrix: IntegerMatrix) -> Tuple[int, Dict[int, Dict[int, int]]]:
    """Eliminates unit pivots; returns (#pivots, leftover columns)."""
    cols: Dict[int, Dict[int, int]] = {j: dict(c) for j, c in enumerate(matrix.columns) if c}
    rows: Dict[int, Set[int]] = {}
    for j, column in cols.items():
        for i in column:
            rows.setdefault(i, set()).add(j)

    heap = [(len(c), j) for j, c in cols.items()]
    heapq.heapify(heap)
    pivots = 0
    while heap:
        size, j = heapq.heappop(heap)
        column = cols.get(j)
        if column is None or len(column) != size:
            continue
        candidates = [i for i, v in column.items() if v in (1, -1)]
        if not candidates:
            continue
        r = min(candidates, key=lambda i: (len(rows[i]), i))
        p = column[r]
        pivot_col = cols.pop(j)
        for i in pivot_col:
            rows[i].discard(j)
        for j2 in sorted(rows[r]):
            col2 = cols[j2]
            factor = col2[r] * p
            for i, v in pivot_col.items():
                new = col2.get(i, 0) - factor * v
                if new:
                    if i not in col2:
                        rows[i].add(j2)
                    col2[i] = new
                elif i in col2:
                    del col2[i]
                    rows[i].discard(j2)
            if col2:
                heapq.heappush(heap, (len(col2), j2))
            else:
                del cols[j2]
        del rows[r]
        pivots += 1
    return pivots, {j: c for j, c in cols.items() if c}


def _dense_diagonal(dense: List[List[int]]) -> List[int]:
    """Diagonalizes by unimodular row/column operations; returns |diagonal| entries."""
    a = [row[:] for row in dense]
    num_rows = len(a)
    num_cols = len(a[0]) if a else 0
    diagonal = []
    t = 0
    while t < min(num_rows, num_cols):
        best = None
        for i in range(t, num_rows):
            for j in range(t, num_cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            pivot = a[t][t]
            for i in range(t + 1, num_rows):
                if a[i][t]:
                    q = a[i][t] // pivot
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            for j in range(t + 1, num_cols):
                if a[t][j]:
                    q = a[t][j] // pivot
                    for row in a:
                        row[j] -= q * row[t]
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, num_rows) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, num_cols) if a[t][j]]
            if not rest:
                break
            _, i, j = min(rest)
            if j == t:
                a[t], a[i] = a[i], a[t]
            else:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diagonal.append(abs(a[t][t]))
        t += 1
    return diagonal


def _normalize_divisibility(diagonal: List[int]) -> List[int]:
    """diag(a, b) is equivalent to diag(gcd, lcm); repeat until d_1 | d_2 | ..."""
    d = sorted(x for x in diagonal if x)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = math.gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return d


def smith_normal_form(matrix: IntegerMatrix) -> List[int]:
    """Invariant factors d_1 | d_2 | ... | d_r, all positive; r is the rank."""
    pivots, leftover = _unit_elimination(matrix)
    factors = [1] * pivots
    if leftover:
        row_ids = sorted({i for c in leftover.values() for i in c})
        row_pos = {i: p for p, i in enumerate(row_ids)}
        col_ids = sorted(leftover)
        dense = [[0] * len(col_ids) for _ in row_ids]
        for q, j in enumerate(col_ids):
            for i, v in leftover[j].items():
                dense[row_pos[i]][q] = v
        logging.debug("SNF dense phase on a %dx%d block", len(row_ids), len(col_ids))
        factors += _dense_diagonal(dense)
    return _normalize_divisibility(factors)


def rational_rank(matrix: IntegerMatrix) -> int:
    """Rank over Q by fraction-free column elimination with content normalization."""
    cols = [dict(c) for c in matrix.columns if c]
    rank = 0
    pivot_rows: Dict[int, Dict[int, int]] = {}
    for column in cols:
        column = dict(column)
        while column:
            r = min(column)
            if r not in pivot_rows:
                content = reduce(math.gcd, column.values())
                pivot_rows[r] = {i: v // content for i, v in column.items()}
                rank += 1
                break
            pivot = pivot_rows[r]
            a, b = pivot[r], column[r]
            g = math.gcd(a, b)
            ma, mb = a // g, b // g
            combined: Dict[int, int] = {}
            for i in set(column) | set(pivot):
                value = ma * column.get(i, 0) - mb * pivot.get(i, 0)
                if value:
                    combined[i] = value
            if combined:
                content = reduce(math.gcd, combined.values())
                combined = {i: v // content for i, v in combined.items()}
            column = combined
    return rank


# --- Homology ---
def homology(k: SimplicialComplex, snf_threshold: int = DEFAULT_SNF_THRESHOLD,
             complex_id: Optional[str] = None, face_budget: Optional[int] = None) -> HomologyResult:
    """Reduced integral homology of K; torsion is skipped above snf_threshold faces."""
    chain = boundary_matrices(k, face_budget)
    with_torsion = k.num_faces <= snf_threshold
    ranks: Dict[int, int] = {}
    factors: Dict[int, List[int]] = {}
    for d, matrix in chain.boundaries.items():
        if with_torsion:
            factors[d] = smith_normal_form(matrix)
            ranks[d] = len(factors[d])
        else:
            ranks[d] = rational_rank(matrix)
    betti = {}
    torsion: Optional[Dict[int, Tuple[int, ...]]] = {} if with_torsion else None
    for d in range(-1, chain.top_dimension + 1):
        betti[d] = chain.rank_of_chains(d) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if torsion is not None:
            torsion[d] = tuple(f for f in factors.get(d + 1, []) if f > 1)
    result = HomologyResult(complex_id or k.name, betti, torsion, k.num_faces)
    if torsion is not None and not result.is_torsion_free():
        logging.warning("torsion found in %s: %s", result.complex_id,
                        {d: t for d, t in torsion.items() if t})
    if not with_torsion:
        logging.info("%s: %d faces above SNF threshold, torsion skipped", result.complex_id, k.num_faces)
    return result


def reduced_euler_from_betti(result: HomologyResult) -> int:
    return sum((-1) ** d * b for d, b in result.betti.items())
