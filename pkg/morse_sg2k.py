"""
morse_sg2k.py

The explicit acyclic matching on Ind(SG_{2,k}). Faces are sets of stable
pairs {a,b} of [k+4] that pairwise intersect: stars (all pairs through one
element) and triangles T_{i,j,h}.

A first grading phi sends every face to the chain 3 < 4 < ... < k+4. On each
grade l < k+4 the matching toggles {1,l}. The top fibre is graded again by
psi onto the chain

    b < r_6 < ... < r_{k+3} < m_1 < m_2 < t_2 < s_4 < ... < s_{k+2} < m_3 < m_4 < t_{k+4}

where two-element grades pair their two faces, t_2 toggles {2,4} and t_{k+4}
toggles {2,k+4}. For k = 3 the grades m_1 and m_2 are dropped and their three
faces {{2,5},{2,7}}, {{2,4},{2,5}}, {{2,4},{2,5},{2,7}} are graded t_2.

Classification is audit-first: every clause is evaluated, the first listed
clause wins for phi and any face hit by clauses of different grades is
recorded as an ambiguity finding.
"""

import itertools
import logging
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Dict, List, Optional, Tuple

from complexes import Face, SimplicialComplex, independence_complex
from errors import AuditError, KneserMorseError, ParameterError, PartitionError
from graphs import Graph, stable_kneser
from morse import (GradeMap, PartialMatching, check_order_preserving, patchwork_compose,
                   verify_acyclic)

Pair = Tuple[int, int]
Pairs = Tuple[Pair, ...]


# --- Face shapes ---
def is_star_at(pairs: Pairs, c: int) -> bool:
    return bool(pairs) and all(c in p for p in pairs)


def triangle_of(pairs: Pairs) -> Optional[Tuple[int, int, int]]:
    """(i, j, h) if the face is T_{i,j,h}, otherwise None."""
    if len(pairs) != 3:
        return None
    elements = sorted({x for p in pairs for x in p})
    if len(elements) != 3:
        return None
    i, j, h = elements
    return (i, j, h) if set(pairs) == {(i, j), (i, h), (j, h)} else None


def _eq(pairs: Pairs, *wanted: Pair) -> bool:
    return set(pairs) == {tuple(sorted(w)) for w in wanted} and len(pairs) == len(wanted)


def face_pairs(g: Graph, face: Face) -> Pairs:
    return tuple(g.labels[v].items for v in face)


def format_pairs(pairs: Pairs) -> str:
    return "{" + ",".join("{%d,%d}" % p for p in pairs) + "}"


# --- phi ---
Clause = Tuple[object, str, Callable[[Pairs], bool]]


def phi_clauses(k: int) -> List[Clause]:
    """The phi case table in listed order: (grade, clause name, predicate)."""
    top = k + 4
    clauses: List[Clause] = [
        (3, "empty", lambda s: not s),
        (3, "subset of W_1", lambda s: is_star_at(s, 1)),
        (3, "subset of W_3", lambda s: is_star_at(s, 3)),
        (3, "{1,j},{3,j}", lambda s: any(_eq(s, (1, j), (3, j)) for j in range(4, top))),
        (3, "T_1,3,j", lambda s: any(_eq(s, (1, 3), (1, j), (3, j)) for j in range(4, top))),
    ]
    for l in range(4, top):
        clauses += [
            (l, "{2,l}", lambda s, l=l: _eq(s, (2, l))),
            (l, "{1,l},{2,l}", lambda s, l=l: _eq(s, (1, l), (2, l))),
            (l, "{l,j}", lambda s, l=l: len(s) == 1 and s[0][0] == l),
            (l, "{l,i},{l,j} l<i<j", lambda s, l=l: len(s) == 2 and s[0][0] == l and s[1][0] == l),
            (l, "{i,l},{l,j} i<l<j", lambda s, l=l: len(s) == 2 and s[0][1] == l and s[1][0] == l),
            (l, "{i,l},{j,l} 2<=i<j<l",
             lambda s, l=l: len(s) == 2 and s[0][1] == l and s[1][1] == l and s[0][0] >= 2),
            (l, "star at l, r>=3", lambda s, l=l: len(s) >= 3 and is_star_at(s, l)),
            (l, "{1,j},{l,j}", lambda s, l=l: any(_eq(s, (1, j), (l, j)) for j in range(l + 1, top))),
            (l, "T_1,l,j", lambda s, l=l: any(_eq(s, (1, l), (1, j), (l, j)) for j in range(l + 1, top))),
        ]
    clauses += [
        (top, "{2,k+4}", lambda s: _eq(s, (2, top))),
        (top, "star at 2, r>=2", lambda s: len(s) >= 2 and is_star_at(s, 2)),
        (top, "star at k+4, r>=2", lambda s: len(s) >= 2 and is_star_at(s, top)),
        (top, "triangle avoiding 1", lambda s: triangle_of(s) is not None and 1 not in triangle_of(s)),
    ]
    return clauses


@dataclass
class GradingFinding:
    face: str
    grades: Tuple[object, ...]
    clauses: Tuple[str, ...]


def _check_k(k: int, minimum: int = 3) -> None:
    if k < minimum:
        raise ParameterError(f"SG_(2,k) grading needs k >= {minimum}, got {k}")


def sg2k_phi(k: int, pairs: Pairs, clauses: Optional[List[Clause]] = None,
             findings: Optional[List[GradingFinding]] = None) -> int:
    """phi-grade of a face given as its stable pairs; first listed clause wins."""
    _check_k(k)
    clauses = clauses or phi_clauses(k)
    hits = [(grade, name) for grade, name, test in clauses if test(pairs)]
    if not hits:
        raise PartitionError(f"phi: face {format_pairs(pairs)} matches no case", face=pairs)
    grades = tuple(dict.fromkeys(g for g, _ in hits))
    if len(grades) > 1 and findings is not None:
        findings.append(GradingFinding(format_pairs(pairs), grades, tuple(n for _, n in hits)))
    return hits[0][0]


# --- psi ---
def psi_chain(k: int) -> Tuple[str, ...]:
    top = k + 4
    chain = ["b"] + [f"r{i}" for i in range(6, k + 4)]
    if k >= 4:
        chain += ["m1", "m2"]
    chain += ["t2"] + [f"s{j}" for j in range(4, k + 3)] + ["m3", "m4", f"t{top}"]
    return tuple(chain)


def psi_clauses(k: int) -> List[Clause]:
    top = k + 4
    m1_faces = [((2, 5), (2, 7)), ((2, 5), (2, 7), (5, 7))]
    m2_faces = [((2, 4), (2, 5)), ((2, 4), (2, 5), (2, 7))]
    clauses: List[Clause] = [
        ("b", "{2,k+4}", lambda s: _eq(s, (2, top))),
        ("b", "{2,4},{2,k+4}", lambda s: _eq(s, (2, 4), (2, top))),
    ]
    for i in range(6, k + 4):
        clauses += [
            (f"r{i}", "{2,4},{2,i}", lambda s, i=i: _eq(s, (2, 4), (2, i))),
            (f"r{i}", "T_2,4,i", lambda s, i=i: _eq(s, (2, 4), (2, i), (4, i))),
        ]
    if k >= 4:
        clauses += [("m1", "m_1 face", lambda s, f=f: _eq(s, *f)) for f in m1_faces]
        clauses += [("m2", "m_2 face", lambda s, f=f: _eq(s, *f)) for f in m2_faces]
        t2_exceptions = [((2, 5), (2, 7)), ((2, 4), (2, 5), (2, 7))]
    else:
        # m_1 and m_2 dissolve into t_2; their triangle T_{2,5,7} is already s_5
        clauses += [("t2", "moved from m_2", lambda s: _eq(s, (2, 4), (2, 5)))]
        t2_exceptions = []
    clauses += [
        ("t2", "{2,i},{2,j} 5<=i<j",
         lambda s: len(s) == 2 and is_star_at(s, 2) and min(x for p in s for x in p if x != 2) >= 5
         and not any(_eq(s, *e) for e in t2_exceptions)),
        ("t2", "star at 2, r>=3",
         lambda s: len(s) >= 3 and is_star_at(s, 2) and not any(_eq(s, *e) for e in t2_exceptions)),
    ]
    for j in range(4, k + 3):
        clauses += [
            (f"s{j}", "{2,k+4},{j,k+4}", lambda s, j=j: _eq(s, (2, top), (j, top))),
            (f"s{j}", "T_2,j,k+4", lambda s, j=j: _eq(s, (2, top), (j, top), (2, j))),
        ]
    clauses += [
        ("m3", "{3,k+4},{5,k+4}", lambda s: _eq(s, (3, top), (5, top))),
        ("m3", "T_3,5,k+4", lambda s: _eq(s, (3, top), (5, top), (3, 5))),
        ("m4", "{2,k+4},{3,k+4}", lambda s: _eq(s, (2, top), (3, top))),
        ("m4", "{2,k+4},{3,k+4},{5,k+4}", lambda s: _eq(s, (2, top), (3, top), (5, top))),
        (f"t{top}", "{i,k+4},{j,k+4} 3<=i<j",
         lambda s: len(s) == 2 and is_star_at(s, top) and min(x for p in s for x in p) >= 3
         and not _eq(s, (3, top), (5, top))),
        (f"t{top}", "star at k+4, r>=3",
         lambda s: len(s) >= 3 and is_star_at(s, top) and not _eq(s, (2, top), (3, top), (5, top))),
    ]
    return clauses


def sg2k_psi(k: int, pairs: Pairs, clauses: Optional[List[Clause]] = None) -> str:
    """psi-grade of a face in phi^{-1}(k+4); exactly one case must apply."""
    _check_k(k)
    clauses = clauses or psi_clauses(k)
    hits = [(grade, name) for grade, name, test in clauses if test(pairs)]
    if not hits and triangle_of(pairs) is not None:
        # triangles not listed by any other clause
        return f"t{k + 4}"
    if not hits:
        raise PartitionError(f"psi: face {format_pairs(pairs)} matches no case", face=pairs)
    if len({g for g, _ in hits}) > 1:
        raise PartitionError(f"psi: face {format_pairs(pairs)} matches "
                             + ", ".join(f"{g} ({n})" for g, n in hits), face=pairs)
    return hits[0][0]


# --- Expected critical cells ---
def triangles_avoiding_one(k: int) -> List[Tuple[int, int, int]]:
    top = k + 4

    def adjacent(a: int, b: int) -> bool:
        return (a - b) % top in (1, top - 1)

    return [(i, j, h) for i, j, h in itertools.combinations(range(2, top + 1), 3)
            if not (adjacent(i, j) or adjacent(j, h) or adjacent(i, h))]


def excluded_triangles(k: int) -> List[Tuple[int, int, int]]:
    """The set S of triangles avoiding 1 that psi pairs off."""
    top = k + 4
    excluded = [(2, 4, j) for j in range(6, k + 4)]
    excluded += [(2, j, top) for j in range(4, k + 3)]
    excluded += [(3, 5, top), (2, 5, 7)]
    return excluded


def expected_critical_pairs(k: int) -> List[Pairs]:
    _check_k(k)
    if k == 3:
        return [((2, 4), (2, 5))]
    excluded = set(excluded_triangles(k))
    return [((i, j), (i, h), (j, h)) for i, j, h in triangles_avoiding_one(k) if (i, j, h) not in excluded]


def expected_critical_count(k: int) -> int:
    _check_k(k)
    return 1 if k == 3 else comb(k + 1, 3) - (2 * k - 1)


# --- Matching ---
@dataclass
class SG2kReport:
    """Audit record of the SG_{2,k} matching."""
    k: int
    num_faces: int = 0
    phi_counts: Dict[int, int] = field(default_factory=dict)
    psi_counts: Dict[str, int] = field(default_factory=dict)
    ambiguities: List[GradingFinding] = field(default_factory=list)
    problems: List[KneserMorseError] = field(default_factory=list)
    order_preserving: bool = False
    acyclic: bool = False
    empty_matched: bool = False
    critical: List[str] = field(default_factory=list)
    expected_critical: List[str] = field(default_factory=list)
    critical_dimensions: List[int] = field(default_factory=list)
    matching: Optional[PartialMatching] = None

    @property
    def ok(self) -> bool:
        return (not self.problems and self.order_preserving and self.acyclic and self.empty_matched
                and self.critical == self.expected_critical)

    def to_dict(self) -> Dict[str, object]:
        return {
            "k": self.k,
            "faces": self.num_faces,
            "phi_counts": {str(g): c for g, c in sorted(self.phi_counts.items())},
            "psi_counts": dict(self.psi_counts),
            "ambiguities": [{"face": a.face, "grades": [str(g) for g in a.grades]} for a in self.ambiguities],
            "problems": [str(p) for p in self.problems],
            "order_preserving": self.order_preserving,
            "acyclic": self.acyclic,
            "empty_matched": self.empty_matched,
            "critical": self.critical,
            "expected_critical": self.expected_critical,
            "verdict": "match" if self.ok else "mismatch",
        }


def _toggle(fiber: set, pair_index: int, grade: object, everything: bool) -> List[Tuple[Face, Face]]:
    pairs = []
    for face in sorted(fiber):
        if pair_index in face:
            continue
        partner = tuple(sorted(face + (pair_index,)))
        if partner in fiber:
            pairs.append((face, partner))
        elif everything:
            raise AuditError(grade, f"toggling leaves the grade at face {face}")
    return pairs


def _grade_fibers(assignment: Dict[Face, object]) -> Dict[object, set]:
    fibers: Dict[object, set] = {}
    for face, grade in assignment.items():
        fibers.setdefault(grade, set()).add(face)
    return fibers


def sg2k_report(k: int, complex_: Optional[SimplicialComplex] = None) -> SG2kReport:
    """Builds phi, psi and the composed matching, recording every failure instead of raising."""
    _check_k(k)
    top = k + 4
    report = SG2kReport(k)
    report.expected_critical = sorted(format_pairs(p) for p in expected_critical_pairs(k))
    g = stable_kneser(2, k)
    cx = complex_ or independence_complex(g)
    report.num_faces = cx.num_faces
    index = {label.items: v for v, label in enumerate(g.labels)}

    phi_table = phi_clauses(k)
    phi_assignment: Dict[Face, object] = {}
    for face in cx.all_faces():
        try:
            phi_assignment[face] = sg2k_phi(k, face_pairs(g, face), phi_table, report.ambiguities)
        except PartitionError as e:
            report.problems.append(e)
    if report.ambiguities:
        logging.warning("SG_{2,%d}: %d faces hit phi clauses of different grades", k, len(report.ambiguities))
        for finding in report.ambiguities:
            logging.debug("phi ambiguity %s: grades %s via %s", finding.face, finding.grades, finding.clauses)
    fibers = _grade_fibers(phi_assignment)
    report.phi_counts = {grade: len(fibers.get(grade, ())) for grade in range(3, top + 1)}

    top_fiber = fibers.get(top, set())
    psi_table = psi_clauses(k)
    psi_assignment: Dict[Face, object] = {}
    for face in sorted(top_fiber):
        try:
            psi_assignment[face] = sg2k_psi(k, face_pairs(g, face), psi_table)
        except PartitionError as e:
            report.problems.append(e)
    chain = psi_chain(k)
    psi_fibers = _grade_fibers(psi_assignment)
    report.psi_counts = {grade: len(psi_fibers.get(grade, ())) for grade in chain}
    if report.problems:
        for problem in report.problems:
            logging.warning("SG_{2,%d}: %s", k, problem)
        return report

    phi_map = GradeMap(tuple(range(3, top + 1)), phi_assignment)
    psi_map = GradeMap(chain, psi_assignment)
    try:
        check_order_preserving(cx, phi_map)
        check_order_preserving(cx, psi_map, faces=top_fiber)
        report.order_preserving = True
    except KneserMorseError as e:
        report.problems.append(e)
        logging.warning("SG_{2,%d}: %s", k, e)
        return report

    try:
        per_grade: Dict[object, List[Tuple[Face, Face]]] = {}
        for l in range(3, top):
            per_grade[l] = _toggle(fibers.get(l, set()), index[(1, l)], l, everything=True)
            if 2 * len(per_grade[l]) != len(fibers.get(l, ())):
                raise AuditError(l, "faces left unmatched")
        psi_pairs: Dict[object, List[Tuple[Face, Face]]] = {}
        for grade in chain:
            fiber = psi_fibers.get(grade, set())
            if grade == "t2":
                # at k=3, {{2,4},{2,5}} sits in t_2 but its facet {{2,5}} has phi-grade 5
                stay = {tuple(sorted(index[p] for p in pairs)) for pairs in expected_critical_pairs(k)} \
                    if k == 3 else set()
                psi_pairs[grade] = _toggle(fiber, index[(2, 4)], grade, everything=not stay)
                matched = {face for pair in psi_pairs[grade] for face in pair}
                if fiber - matched != stay:
                    raise AuditError(grade, f"{len(fiber - matched)} faces left unmatched, "
                                            f"expected {len(stay)}")
            elif grade == f"t{top}":
                psi_pairs[grade] = _toggle(fiber, index[(2, top)], grade, everything=False)
            else:
                lower, upper = sorted(fiber, key=len) if len(fiber) == 2 else (None, None)
                if lower is None or len(upper) != len(lower) + 1 or not set(lower) < set(upper):
                    raise AuditError(grade, f"expected a cover pair, found {len(fiber)} faces")
                psi_pairs[grade] = [(lower, upper)]
        inner = patchwork_compose(cx, psi_map, psi_pairs, faces=top_fiber)
        per_grade[top] = inner.pairs
        matching = patchwork_compose(cx, phi_map, per_grade)
    except KneserMorseError as e:
        report.problems.append(e)
        logging.warning("SG_{2,%d}: %s", k, e)
        return report

    report.matching = matching
    report.acyclic = verify_acyclic(cx, matching).ok
    critical = matching.critical_faces()
    report.empty_matched = () not in critical
    report.critical = sorted(format_pairs(face_pairs(g, f)) for f in critical)
    report.critical_dimensions = sorted(len(f) - 1 for f in critical)
    if report.critical != report.expected_critical:
        logging.warning("SG_{2,%d}: %d critical cells, expected %d", k,
                        len(report.critical), len(report.expected_critical))
    return report


def sg2k_matching(k: int) -> Tuple[PartialMatching, List[Face]]:
    """The composed matching and its critical faces; raises on the first audit failure."""
    report = sg2k_report(k)
    if report.problems:
        raise report.problems[0]
    if not report.ok:
        raise AuditError(f"t{k + 4}", "critical cells differ from the expected set")
    return report.matching, report.matching.critical_faces()
