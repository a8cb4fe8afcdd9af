"""
theorems.py

Closed-form homotopy predictions for the independence complexes of cycles,
paths, end ladders, SG_{2,k}, E_{2n+2} and the small SG_{n,k} that are complete
graphs or odd cycles, the Morse critical-cell counts the
matching constructions should produce, and the sweep that reconciles three
channels per instance: prediction, Morse run and the homology oracle.

The homology channel never consumes Morse data and the Morse channel never
consumes homology data. Cross-channel invariants are checked afterwards,
once both channels have produced their numbers.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

import db
from complexes import (DEFAULT_FACE_BUDGET, SimplicialComplex, euler_characteristic, f_vector,
                       independence_complex, independence_count, neighborhood_complex)
from errors import KneserMorseError, ParameterError, SearchError, SizeError
from graphs import (DEFAULT_CHROMATIC_BOUND, DEFAULT_ISOMORPHISM_BOUND, Graph, basic_graph,
                    c_odd, cartesian_product, chromatic_number_exact, classify_sg_n2, dc_cycle,
                    e_graph, el_graph, expected_class_counts, induced_subgraph, is_isomorphic_small,
                    o_param, stable_kneser)
from homology import (DEFAULT_SNF_THRESHOLD, HomologyResult, boundary_matrices, homology,
                      reduced_euler_from_betti)
from morse import (DEFAULT_NODE_BUDGET, DEFAULT_SEARCH_FANOUT, MatchingTree, MorseSummary,
                   consistent_with_tree, expand_sigma, induced_matching, morse_summary, path_name,
                   run_script, search_tree, summary_from_tree, verify_acyclic)
from morse_scripts import cycle_script, e_graph_script, path_script
from morse_sg2k import expected_critical_count, sg2k_report

# --- Constants ---
VERIFY_FAMILIES = ("cycle", "path", "el", "sg2", "e", "sg1k", "sgn0", "sgn1", "sgn2")
FAMILY_PARAM = {"cycle": "n", "path": "n", "el": "r", "sg2": "k", "e": "n",
                "sg1k": "k", "sgn0": "n", "sgn1": "n", "sgn2": "n"}
SMALL_SG_FAMILIES = ("sg1k", "sgn0", "sgn1")
DEFAULT_MATCHING_FACE_LIMIT = 200_000
BOUNDARY_CHECK_FACES = 20_000
# odd n whose scripted trees end in EL_r residuals; even n has none
EL_CHECK_N = (7, 8, 9)

MATCH, MISMATCH, SKIPPED = "match", "mismatch", "skipped"
INCOMPLETE = "incomplete"


# --- Predictions ---
@dataclass(frozen=True)
class Prediction:
    """A wedge of spheres given as (dimension, count) pairs; no pairs means contractible."""
    spheres: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        for dim, count in self.spheres:
            if dim < 0 or count < 1:
                raise ParameterError(f"invalid sphere term {count} x S^{dim}")

    @property
    def contractible(self) -> bool:
        return not self.spheres

    def expected_betti(self) -> Dict[int, int]:
        betti: Dict[int, int] = {}
        for dim, count in self.spheres:
            betti[dim] = betti.get(dim, 0) + count
        return betti

    def expected_sizes(self) -> Dict[int, int]:
        """Critical-cell counts keyed by dimension for a perfect matching of the wedge."""
        return self.expected_betti()

    def __str__(self) -> str:
        if self.contractible:
            return "contractible"
        return " v ".join(f"{count}xS^{dim}" if count > 1 else f"S^{dim}"
                          for dim, count in self.spheres)


CONTRACTIBLE = Prediction()


def _wedge(dim: int, count: int) -> Prediction:
    return Prediction(((dim, count),))


def predict_ind_cycle(n: int) -> Prediction:
    if n < 3:
        raise ParameterError(f"cycles need n >= 3, got {n}")
    r, rest = divmod(n, 3)
    if rest == 0:
        return _wedge(r - 1, 2)
    if rest == 1:
        return _wedge(r - 1, 1)
    return _wedge(r, 1)     # n = 3(r+1) - 1


def predict_ind_path(n: int) -> Prediction:
    if n < 1:
        raise ParameterError(f"paths need n >= 1, got {n}")
    k, rest = divmod(n, 3)
    if rest == 1:
        return CONTRACTIBLE
    if rest == 0:
        return _wedge(k - 1, 1)
    return _wedge(k, 1)


def predict_ind_el(r: int) -> Prediction:
    if r < 0:
        raise ParameterError(f"EL_r needs r >= 0, got {r}")
    k, rest = divmod(r, 4)
    return _wedge(2 * k, 1) if rest in (0, 1) else CONTRACTIBLE


def sg2_sphere_count(k: int) -> int:
    return (k - 3) * (k - 1) * (k + 4) // 6 - 1


def predict_ind_sg2(k: int) -> Prediction:
    if k < 2:
        raise ParameterError(f"SG_(2,k) needs k >= 2, got {k}")
    if k == 2:
        return _wedge(1, 2)
    if k == 3:
        return _wedge(1, 1)
    return _wedge(2, sg2_sphere_count(k))


def predict_ind_small_sg(n: int, k: int) -> Prediction:
    """The cases where SG_{n,k} is a complete graph or an odd cycle."""
    if n < 1 or k < 0:
        raise ParameterError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    if n == 1:
        return _wedge(0, k + 1)
    if k == 0:
        return _wedge(0, 1)
    if k == 1:
        return predict_ind_cycle(2 * n + 1)
    raise ParameterError(f"SG_({n},{k}) is not one of the small cases")


def small_sg_params(family: str, value: int) -> Tuple[int, int]:
    """(n, k) of a small-case family member."""
    if family == "sg1k":
        return 1, value
    if family == "sgn0":
        return value, 0
    if family == "sgn1":
        return value, 1
    raise ParameterError(f"'{family}' is not a small-case family")


def parity_case(n: int) -> Tuple[str, int]:
    """The unique residue case of E_{2n+2} that n falls into, with its k."""
    if n < 3:
        raise ParameterError(f"E_(2n+2) predictions need n >= 3, got {n}")
    cases = []
    for tag, modulus, residue in (("4k+1", 4, 1), ("4k+3", 4, 3),
                                  ("6k", 6, 0), ("6k+2", 6, 2), ("6k+4", 6, 4)):
        if n % modulus == residue:
            cases.append((tag, (n - residue) // modulus))
    if len(cases) != 1:
        raise ParameterError(f"n={n} falls into {len(cases)} parity cases")
    return cases[0]


def predict_ind_e(n: int) -> Prediction:
    tag, k = parity_case(n)
    return {
        "4k+1": _wedge(2 * k + 1, 3),
        "4k+3": _wedge(2 * k + 2, 1),
        "6k": _wedge(2 * k, 1),
        "6k+2": _wedge(2 * k + 1, 2),
        "6k+4": _wedge(2 * k + 2, 1),
    }[tag]


def predict_neighborhood_sg(n: int, k: int) -> Prediction:
    """The neighborhood complex of SG_{n,k} is a homotopy k-sphere."""
    return _wedge(k, 1)


def predict_chromatic_sg(n: int, k: int) -> int:
    return k + 2


def formula_identity(k: int) -> bool:
    """(k-3)(k-1)(k+4)/6 - 1 equals C(k+1,3) - (2k-1), and is an integer."""
    left = Fraction((k - 3) * (k - 1) * (k + 4), 6) - 1
    right = comb(k + 1, 3) - (2 * k - 1)
    return left.denominator == 1 and left == right


# --- Expected Morse counts ---
def _cells(size: int, count: int) -> MorseSummary:
    return MorseSummary({size - 1: count} if count else {}, empty_matched=size > 0 or count == 0)


def predict_morse_counts(family: str, value: int) -> MorseSummary:
    """Critical cells the designated matching construction should leave, keyed by dimension."""
    if family == "el":
        if value < 0:
            raise ParameterError(f"EL_r needs r >= 0, got {value}")
        k, rest = divmod(value, 4)
        return _cells(2 * k + 1, 1) if rest in (0, 1) else _cells(0, 0)
    if family == "path":
        if value < 1:
            raise ParameterError(f"paths need n >= 1, got {value}")
        k, rest = divmod(value, 3)
        if rest == 1:
            return _cells(0, 0)
        return _cells(k, 1) if rest == 0 else _cells(k + 1, 1)
    if family == "cycle":
        if value < 3:
            raise ParameterError(f"cycles need n >= 3, got {value}")
        r, rest = divmod(value, 3)
        if rest == 0:
            return _cells(r, 2)
        return _cells(r, 1) if rest == 1 else _cells(r + 1, 1)
    if family == "sg2":
        if value < 2:
            raise ParameterError(f"SG_(2,k) needs k >= 2, got {value}")
        if value == 2:
            return _cells(2, 2)
        if value == 3:
            return _cells(2, 1)
        return _cells(3, expected_critical_count(value))
    if family == "e":
        ((dim, count),) = predict_ind_e(value).spheres
        return _cells(dim + 1, count)
    if family in SMALL_SG_FAMILIES:
        n, k = small_sg_params(family, value)
        predict_ind_small_sg(n, k)  # rejects n < 1
        if n == 1:
            return _cells(1, k + 1)
        return _cells(1, 1) if k == 0 else predict_morse_counts("cycle", 2 * n + 1)
    raise ParameterError(f"no Morse count prediction for family '{family}'")


def predict_family(family: str, value: int) -> Optional[Prediction]:
    if family == "cycle":
        return predict_ind_cycle(value)
    if family == "path":
        return predict_ind_path(value)
    if family == "el":
        return predict_ind_el(value)
    if family == "sg2":
        return predict_ind_sg2(value)
    if family == "e":
        return predict_ind_e(value) if value >= 3 else None
    if family in SMALL_SG_FAMILIES:
        return predict_ind_small_sg(*small_sg_params(family, value))
    if family == "sgn2":
        return None
    raise ParameterError(f"unknown verify family '{family}'; expected one of {', '.join(VERIFY_FAMILIES)}")


def family_graph(family: str, value: int) -> Graph:
    if family == "cycle":
        return basic_graph("C", value)
    if family == "path":
        return basic_graph("P", value)
    if family == "el":
        return el_graph(value)
    if family == "sg2":
        return stable_kneser(2, value)
    if family == "e":
        return e_graph(value)
    if family in SMALL_SG_FAMILIES:
        return stable_kneser(*small_sg_params(family, value))
    if family == "sgn2":
        if value < 3:
            raise ParameterError(f"exploratory SG_(n,2) sweep needs n >= 3, got {value}")
        return stable_kneser(value, 2)
    raise ParameterError(f"unknown verify family '{family}'; expected one of {', '.join(VERIFY_FAMILIES)}")


def complex_id(family: str, value: int) -> str:
    if family not in FAMILY_PARAM:
        raise ParameterError(f"unknown verify family '{family}'")
    return f"ind-{family}-{FAMILY_PARAM[family]}{value}"


# --- Reports ---
@dataclass
class VerifySettings:
    face_budget: int = DEFAULT_FACE_BUDGET
    node_budget: int = DEFAULT_NODE_BUDGET
    snf_threshold: int = DEFAULT_SNF_THRESHOLD
    search_fanout: int = DEFAULT_SEARCH_FANOUT
    matching_face_limit: int = DEFAULT_MATCHING_FACE_LIMIT
    isomorphism_bound: int = DEFAULT_ISOMORPHISM_BOUND


@dataclass
class ChannelVerdict:
    status: str
    reasons: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {"status": self.status, "reasons": list(self.reasons)}


@dataclass
class VerificationReport:
    family: str
    value: int
    complex_id: str
    prediction: Optional[Prediction]
    expected_morse: Optional[MorseSummary] = None
    morse: Optional[MorseSummary] = None
    morse_source: str = ""
    homology: Optional[HomologyResult] = None
    channels: Dict[str, ChannelVerdict] = field(default_factory=dict)
    num_vertices: int = 0
    num_faces: Optional[int] = None
    f_vector: str = ""
    findings: List[str] = field(default_factory=list)
    budget_exhausted: bool = False

    @property
    def param(self) -> str:
        return f"{FAMILY_PARAM[self.family]}={self.value}"

    @property
    def verdict(self) -> str:
        statuses = [c.status for c in self.channels.values()]
        if MISMATCH in statuses:
            return MISMATCH
        if self.budget_exhausted:
            return INCOMPLETE
        if self.prediction is None:
            return "exploratory"
        return MATCH

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "param": self.param,
            "complex_id": self.complex_id,
            "vertices": self.num_vertices,
            "faces": self.num_faces,
            "f_vector": self.f_vector,
            "prediction": None if self.prediction is None else str(self.prediction),
            "expected_morse": None if self.expected_morse is None else self.expected_morse.to_dict(),
            "morse": None if self.morse is None else self.morse.to_dict(),
            "morse_source": self.morse_source,
            "homology": None if self.homology is None else self.homology.to_dict(),
            "channels": {name: c.to_dict() for name, c in sorted(self.channels.items())},
            "findings": list(self.findings),
            "budget_exhausted": self.budget_exhausted,
            "verdict": self.verdict,
        }


def sweep_exit_code(reports: Sequence[VerificationReport]) -> int:
    """0 all match, 1 any mismatch, 3 budget exhausted without a mismatch."""
    if any(r.verdict == MISMATCH for r in reports):
        return 1
    if any(r.budget_exhausted for r in reports):
        return 3
    return 0


# --- Channels ---
def _morse_counts_equal(a: MorseSummary, b: MorseSummary) -> bool:
    return a.critical_counts == b.critical_counts and a.empty_matched == b.empty_matched


def _check_leaves(tree: MatchingTree) -> List[str]:
    problems = []
    for leaf in tree.nonempty_leaves():
        if expand_sigma(tree.graph, leaf.sigma) != [tuple(sorted(leaf.sigma.a))]:
            problems.append(f"leaf '{path_name(leaf.path)}' holds more than its A-set")
    return problems


def _el_terminal_problems(tree: MatchingTree, n: int, terminals: Dict[str, int],
                          bound: int) -> List[str]:
    """Residuals at EL_r search nodes must be EL_r, and their subtrees must leave Lemma counts."""
    problems = []
    g = tree.graph
    for path, r in sorted(terminals.items()):
        if r < 0:
            continue
        node = tree.nodes[path]
        residual = sorted(node.sigma.residual(g))
        if not is_isomorphic_small(induced_subgraph(g, residual), el_graph(r), bound):
            problems.append(f"E_{2 * n + 2}: residual at '{path}' is not EL_{r}")
            continue
        base = len(node.sigma.a)
        counts: Dict[int, int] = {}
        for leaf in tree.nonempty_leaves():
            if leaf.path.startswith(path):
                dim = len(leaf.sigma.a) - base - 1
                counts[dim] = counts.get(dim, 0) + 1
        if counts != predict_morse_counts("el", r).critical_counts:
            problems.append(f"E_{2 * n + 2}: subtree at '{path}' leaves {counts} on EL_{r}")
    return problems


def _designated_tree(family: str, value: int, g: Graph, settings: VerifySettings,
                     report: VerificationReport) -> Tuple[MatchingTree, List[str]]:
    """The scripted or searched tree for the instance, plus EL terminal problems."""
    if family == "cycle":
        report.morse_source = "script"
        return run_script(g, cycle_script(value), settings.node_budget, settings.search_fanout), []
    if family == "path":
        report.morse_source = "script"
        return run_script(g, path_script(value), settings.node_budget, settings.search_fanout), []
    if family == "e":
        script = e_graph_script(value, g)
        report.morse_source = "script"
        for finding in script.findings:
            report.findings.append(f"'{path_name(finding.path)}' {finding.note}: {finding.reason}")
        tree = run_script(g, script.program, settings.node_budget, settings.search_fanout)
        problems = []
        if value in EL_CHECK_N:
            problems = _el_terminal_problems(tree, value, script.el_terminals, settings.isomorphism_bound)
        return tree, problems
    report.morse_source = "search"
    return search_tree(g, node_budget=settings.node_budget, fanout=settings.search_fanout), []


def _run_morse(family: str, value: int, g: Graph, complex_: Optional[SimplicialComplex],
               settings: VerifySettings, report: VerificationReport) -> ChannelVerdict:
    reasons: List[str] = []
    if family == "sg2" and value >= 3:
        report.morse_source = "sg2k"
        audit = sg2k_report(value, complex_)
        reasons.extend(str(p) for p in audit.problems)
        if audit.matching is not None and audit.acyclic:
            report.morse = morse_summary(audit.matching)
        if not audit.ok and not audit.problems:
            reasons.append(f"SG_(2,{value}) audit failed: {len(audit.critical)} critical cells, "
                           f"{len(audit.expected_critical)} expected")
        if report.morse is None:
            return ChannelVerdict(MISMATCH, reasons or ["no matching produced"])
    else:
        tree, problems = _designated_tree(family, value, g, settings, report)
        reasons.extend(problems)
        reasons.extend(_check_leaves(tree))
        report.morse = summary_from_tree(tree)
        if complex_ is not None:
            matching = induced_matching(g, tree, complex_)
            check = verify_acyclic(complex_, matching)
            if not check.ok:
                reasons.append(f"induced matching has a cycle of length {len(check.cycle) // 2}")
            else:
                report.morse = morse_summary(matching)
                if not consistent_with_tree(tree, matching):
                    reasons.append("critical cells differ from the nonempty leaves")
        else:
            report.findings.append("acyclicity not verified: complex above the matching face limit")

    if report.expected_morse is not None and not _morse_counts_equal(report.morse, report.expected_morse):
        reasons.append(f"critical cells {report.morse.critical_counts}, "
                       f"expected {report.expected_morse.critical_counts}")
    return ChannelVerdict(MISMATCH if reasons else MATCH, reasons)


def _run_homology(cid: str, complex_: SimplicialComplex, settings: VerifySettings,
                  cache_dir: Optional[str], force: bool) -> HomologyResult:
    if cache_dir and not force:
        cached = db.load_from_cache(cid, cache_dir)
        if cached:
            logging.info("Using cached homology for %s.", cid)
            return HomologyResult.from_dict(cached)
    result = homology(complex_, settings.snf_threshold, cid, settings.face_budget)
    if cache_dir:
        db.save_to_cache(cid, result.to_dict(), cache_dir)
    return result


def _homology_verdict(result: HomologyResult, prediction: Optional[Prediction]) -> ChannelVerdict:
    if prediction is None:
        return ChannelVerdict(SKIPPED, ["no prediction, raw homology reported"])
    reasons = []
    if result.nonzero_betti() != prediction.expected_betti():
        reasons.append(f"reduced Betti {result.nonzero_betti()}, expected {prediction.expected_betti()}")
    if result.torsion_checked and not result.is_torsion_free():
        reasons.append("torsion present")
    elif not result.torsion_checked:
        return ChannelVerdict(MISMATCH if reasons else MATCH, reasons + ["torsion skipped"])
    return ChannelVerdict(MISMATCH if reasons else MATCH, reasons)


def cross_channel_problems(complex_: Optional[SimplicialComplex], morse: Optional[MorseSummary],
                           result: Optional[HomologyResult]) -> List[str]:
    """Euler, Morse inequalities, boundary-squared and the single-dimension agreement."""
    problems = []
    if complex_ is not None and result is not None:
        if euler_characteristic(complex_) - 1 != reduced_euler_from_betti(result):
            problems.append("Euler characteristic from the f-vector differs from the Betti sum")
        if complex_.num_faces <= BOUNDARY_CHECK_FACES and \
                not boundary_matrices(complex_).boundary_squared_is_zero():
            problems.append("boundary of boundary is nonzero")
    if morse is not None and result is not None:
        for dim, beta in result.betti.items():
            if morse.critical_counts.get(dim, 0) < beta:
                problems.append(f"Morse inequality fails in dimension {dim}")
        euler = sum((-1) ** d * c for d, c in morse.critical_counts.items())
        if euler != reduced_euler_from_betti(result):
            problems.append("alternating critical count differs from the Betti sum")
        single = morse.single_dimension()
        if single is not None and result.nonzero_betti() != {single[0]: single[1]}:
            problems.append(f"critical cells only in dimension {single[0]} but Betti is "
                            f"{result.nonzero_betti()}")
        if not morse.critical_counts and result.nonzero_betti():
            problems.append("no critical cells but nonzero homology")
    return problems


def verify_instance(family: str, value: int, channels: Iterable[str] = ("morse", "homology"),
                    settings: Optional[VerifySettings] = None, cache_dir: Optional[str] = None,
                    force: bool = False) -> VerificationReport:
    settings = settings or VerifySettings()
    channels = set(channels)
    prediction = predict_family(family, value)
    g = family_graph(family, value)
    report = VerificationReport(family, value, complex_id(family, value), prediction,
                                num_vertices=g.num_vertices)
    if prediction is not None and family != "sgn2":
        report.expected_morse = predict_morse_counts(family, value)

    complex_: Optional[SimplicialComplex] = None
    try:
        faces = independence_count(g)
        limit = settings.face_budget if "homology" in channels else \
            min(settings.face_budget, settings.matching_face_limit)
        if faces <= limit:
            complex_ = independence_complex(g, settings.face_budget)
            report.num_faces = complex_.num_faces
            report.f_vector = str(f_vector(complex_))
        else:
            report.num_faces = faces
            logging.info("%s: %d faces, complex not built", report.complex_id, faces)
            if "homology" in channels:
                report.budget_exhausted = True
                report.findings.append(f"{faces} faces exceed the face budget {settings.face_budget}")
    except SizeError as e:
        report.budget_exhausted = True
        report.findings.append(str(e))

    if "morse" in channels and report.expected_morse is not None:
        try:
            report.channels["morse"] = _run_morse(family, value, g, complex_, settings, report)
        except (SizeError, SearchError) as e:
            report.budget_exhausted = True
            report.channels["morse"] = ChannelVerdict(SKIPPED, [str(e)])
        except KneserMorseError as e:
            report.channels["morse"] = ChannelVerdict(MISMATCH, [f"{type(e).__name__}: {e}"])
    elif "morse" in channels:
        report.channels["morse"] = ChannelVerdict(SKIPPED, ["no designated matching construction"])

    if "homology" in channels:
        if complex_ is None:
            report.channels["homology"] = ChannelVerdict(SKIPPED, ["complex not built: face budget"])
        else:
            try:
                report.homology = _run_homology(report.complex_id, complex_, settings, cache_dir, force)
                report.channels["homology"] = _homology_verdict(report.homology, prediction)
            except SizeError as e:
                report.budget_exhausted = True
                report.channels["homology"] = ChannelVerdict(SKIPPED, [str(e)])

    problems = cross_channel_problems(complex_, report.morse, report.homology)
    if complex_ is not None or report.morse is not None:
        report.channels["invariants"] = ChannelVerdict(MISMATCH if problems else MATCH, problems)

    if report.verdict == MISMATCH:
        for name, verdict in sorted(report.channels.items()):
            for reason in verdict.reasons:
                logging.warning("%s %s: %s", report.complex_id, name, reason)
    logging.info("%s: %s", report.complex_id, report.verdict)
    return report


def verify_family(family: str, values: Iterable[int], channels: Iterable[str] = ("morse", "homology"),
                  settings: Optional[VerifySettings] = None, cache_dir: Optional[str] = None,
                  force: bool = False, progress: bool = False) -> List[VerificationReport]:
    """One report per value, in ascending order."""
    if family not in VERIFY_FAMILIES:
        raise ParameterError(f"unknown verify family '{family}'; expected one of {', '.join(VERIFY_FAMILIES)}")
    channels = tuple(channels)
    unknown = set(channels) - {"morse", "homology"}
    if unknown:
        raise ParameterError(f"unknown channels {sorted(unknown)}")
    reports = []
    for value in tqdm(sorted(set(values)), desc=f"verify {family}", disable=not progress):
        reports.append(verify_instance(family, value, channels, settings, cache_dir, force))
    return reports


# --- Side claims ---
@dataclass(frozen=True)
class ClaimCheck:
    name: str
    ok: bool
    detail: str = ""


def check_chromatic(n: int, k: int, bound: int = DEFAULT_CHROMATIC_BOUND) -> ClaimCheck:
    g = stable_kneser(n, k)
    chi = chromatic_number_exact(g, bound)
    return ClaimCheck(f"chi(SG_{n},{k})", chi == predict_chromatic_sg(n, k), f"chi={chi}")


def check_vertex_critical(n: int, k: int, bound: int = DEFAULT_CHROMATIC_BOUND) -> ClaimCheck:
    """Removing any single vertex of SG_{n,k} lowers the chromatic number by one."""
    g = stable_kneser(n, k)
    target = predict_chromatic_sg(n, k) - 1
    for v in range(g.num_vertices):
        rest = induced_subgraph(g, [u for u in range(g.num_vertices) if u != v])
        chi = chromatic_number_exact(rest, bound)
        if chi != target:
            return ClaimCheck(f"critical(SG_{n},{k})", False, f"removing {g.labels[v]} leaves chi={chi}")
    return ClaimCheck(f"critical(SG_{n},{k})", True)


def check_neighborhood(n: int, k: int, snf_threshold: int = DEFAULT_SNF_THRESHOLD) -> ClaimCheck:
    result = homology(neighborhood_complex(stable_kneser(n, k)), snf_threshold, f"nbhd-sg-n{n}-k{k}")
    expected = predict_neighborhood_sg(n, k).expected_betti()
    ok = result.nonzero_betti() == expected and (not result.torsion_checked or result.is_torsion_free())
    return ClaimCheck(f"N(SG_{n},{k})", ok, f"betti={result.nonzero_betti()}")


def check_sg_structure(n: int, bound: int = DEFAULT_ISOMORPHISM_BOUND) -> List[ClaimCheck]:
    """Class sizes of SG_{n,2} and the shapes the three classes induce."""
    g = stable_kneser(n, 2)
    classes = classify_sg_n2(n)
    checks = [ClaimCheck(f"classes(SG_{n},2)", classes.counts == expected_class_counts(n),
                         f"counts={classes.counts}")]
    a_graph = induced_subgraph(g, classes.classes["A"])
    b_graph = induced_subgraph(g, classes.classes["B"])
    ring = c_odd(n) if n % 2 == 0 else dc_cycle(n)
    checks.append(ClaimCheck("alternating ends", is_isomorphic_small(a_graph, ring, bound), ring.name))
    bipartite = basic_graph("KB", n + 1, n + 1)
    checks.append(ClaimCheck("bipartite ends", is_isomorphic_small(b_graph, bipartite, bound), bipartite.name))
    if o_param(n) >= 3:
        middle = set(classes.classes["M"])
        cylinder = cartesian_product(basic_graph("C", 2 * n + 2), basic_graph("P", o_param(n) - 2))
        checks.append(ClaimCheck("middle cylinder",
                                 is_isomorphic_small(induced_subgraph(g, middle), cylinder, bound),
                                 cylinder.name))
        b_links = {len(g.adjacency[v] & middle) for v in classes.classes["B"]}
        checks.append(ClaimCheck("bipartite end links", b_links == {1}, f"middle neighbours {sorted(b_links)}"))
        a_links = {len(g.adjacency[v] & middle) for v in classes.classes["A"]}
        wanted = {2} if n % 2 == 0 else {1}
        checks.append(ClaimCheck("alternating end links", a_links == wanted,
                                 f"middle neighbours {sorted(a_links)}"))
    return checks
