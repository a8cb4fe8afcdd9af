"""
artifacts.py

Plain-text formats for every artifact the command line writes: graphs,
complexes (maximal-face form), matching-tree scripts, matchings and
verification reports. Every writer is deterministic, and every reader
re-emits byte-identical text for anything a writer produced.

Parse failures raise FormatError with 1-based line and column.
"""

import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from complexes import Face, SimplicialComplex, complex_from_maximal_faces, face_sort_key
from errors import FormatError, ParameterError
from graphs import FAMILY_TAGS, FamilyParams, Graph, graph_from_edges, parse_label
from homology import HomologyResult
from morse import Free, Match, PartialMatching, ScriptLine, Search, Split, path_name

PARAM_KEYS = ("n", "k", "r", "m")


# --- Helpers ---
def _tokens(line: str) -> List[Tuple[str, int]]:
    """Whitespace-separated tokens with their 1-based columns."""
    result = []
    pos = 0
    for token in line.split():
        pos = line.index(token, pos)
        result.append((token, pos + 1))
        pos += len(token)
    return result


def _int(token: str, line: int, column: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"expected integer {what}, found '{token}'", line, column) from None


def _lines(text: str) -> List[Tuple[int, str]]:
    return [(i + 1, raw.rstrip("\n")) for i, raw in enumerate(text.splitlines()) if raw.strip()]


def format_params(params: FamilyParams) -> str:
    return params.describe()


def parse_params(family: str, text: str, line: int = 0, column: int = 0) -> FamilyParams:
    """Inverse of FamilyParams.describe()."""
    if family not in FAMILY_TAGS:
        raise FormatError(f"unknown family '{family}'", line, column)
    values: Dict[str, Any] = {}
    if text != "-":
        for part in text.split(","):
            key, sep, value = part.partition("=")
            if not sep:
                raise FormatError(f"malformed parameter '{part}'", line, column)
            try:
                if key == "sizes":
                    values["sizes"] = tuple(int(s) for s in value.split("x"))
                elif key in PARAM_KEYS:
                    values[key] = int(value)
                else:
                    raise FormatError(f"unknown parameter '{key}'", line, column)
            except ValueError:
                raise FormatError(f"malformed parameter '{part}'", line, column) from None
    return FamilyParams(family, **values)


def _face_text(face: Face) -> str:
    return "{" + ",".join(str(v) for v in face) + "}"


def _parse_face(token: str, line: int, column: int, universe: int) -> Face:
    if not (token.startswith("{") and token.endswith("}")):
        raise FormatError(f"expected a face like {{0,2}}, found '{token}'", line, column)
    body = token[1:-1]
    members = [_int(x, line, column, "vertex") for x in body.split(",")] if body else []
    if members != sorted(set(members)):
        raise FormatError(f"face '{token}' is not strictly ascending", line, column)
    if members and not (0 <= members[0] and members[-1] < universe):
        raise FormatError(f"face '{token}' leaves the vertex range 0..{universe - 1}", line, column)
    return tuple(members)


# --- Graphs ---
@dataclass(frozen=True)
class GraphArtifact:
    params: FamilyParams
    graph: Graph


def format_graph(params: FamilyParams, g: Graph) -> str:
    rows = [f"graph {params.family} {format_params(params)} {g.num_vertices} {g.num_edges}"]
    rows += [f"v {i} {label}" for i, label in enumerate(g.labels)]
    rows += [f"e {i} {j}" for i, j in g.edges()]
    return "\n".join(rows) + "\n"


def parse_graph(text: str) -> GraphArtifact:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty graph file", 1, 1)
    number, header = lines[0]
    tokens = _tokens(header)
    if len(tokens) != 5 or tokens[0][0] != "graph":
        raise FormatError("expected 'graph <family> <params> <|V|> <|E|>'", number, 1)
    params = parse_params(tokens[1][0], tokens[2][0], number, tokens[2][1])
    num_v = _int(tokens[3][0], number, tokens[3][1], "|V|")
    num_e = _int(tokens[4][0], number, tokens[4][1], "|E|")

    labels = []
    edges = []
    for number, row in lines[1:]:
        tokens = _tokens(row)
        kind = tokens[0][0]
        if kind == "v" and len(tokens) == 3:
            index = _int(tokens[1][0], number, tokens[1][1], "vertex index")
            if index != len(labels) or edges:
                raise FormatError(f"vertex {index} out of order", number, tokens[1][1])
            try:
                labels.append(parse_label(tokens[2][0]))
            except ValueError as e:
                raise FormatError(str(e), number, tokens[2][1]) from None
        elif kind == "e" and len(tokens) == 3:
            i = _int(tokens[1][0], number, tokens[1][1], "endpoint")
            j = _int(tokens[2][0], number, tokens[2][1], "endpoint")
            if not 0 <= i < j < len(labels):
                raise FormatError(f"edge {i} {j} needs 0 <= i < j < |V|", number, tokens[1][1])
            if edges and (i, j) <= edges[-1]:
                raise FormatError(f"edge {i} {j} out of order", number, tokens[1][1])
            edges.append((i, j))
        else:
            raise FormatError(f"unexpected line '{row.strip()}'", number, tokens[0][1])
    if len(labels) != num_v or len(edges) != num_e:
        raise FormatError(f"header promises {num_v} vertices and {num_e} edges, "
                          f"found {len(labels)} and {len(edges)}", lines[0][0], 1)
    if [l.sort_key() for l in labels] != sorted(l.sort_key() for l in labels):
        raise FormatError("vertex labels are not in ascending order", lines[0][0], 1)
    g = graph_from_edges(f"{params.family}[{format_params(params)}]", labels,
                         [(labels[i], labels[j]) for i, j in edges])
    return GraphArtifact(params, g)


# --- Complexes ---
def format_complex(k: SimplicialComplex) -> str:
    maximal = k.maximal_faces
    rows = [f"complex {len(k.labels)} {len(maximal)}"]
    rows += [f"v {i} {label}" for i, label in enumerate(k.labels)]
    rows += [f"f {_face_text(face)}" for face in maximal]
    return "\n".join(rows) + "\n"


def parse_complex(text: str, name: str = "K") -> SimplicialComplex:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty complex file", 1, 1)
    number, header = lines[0]
    tokens = _tokens(header)
    if len(tokens) != 3 or tokens[0][0] != "complex":
        raise FormatError("expected 'complex <|V|> <#faces>'", number, 1)
    num_v = _int(tokens[1][0], number, tokens[1][1], "|V|")
    num_f = _int(tokens[2][0], number, tokens[2][1], "face count")
    labels = []
    maximal: List[Face] = []
    for number, row in lines[1:]:
        tokens = _tokens(row)
        if tokens[0][0] == "v" and len(tokens) == 3 and not maximal:
            index = _int(tokens[1][0], number, tokens[1][1], "vertex index")
            if index != len(labels):
                raise FormatError(f"vertex {index} out of order", number, tokens[1][1])
            try:
                labels.append(parse_label(tokens[2][0]))
            except ValueError as e:
                raise FormatError(str(e), number, tokens[2][1]) from None
        elif tokens[0][0] == "f" and len(tokens) == 2:
            maximal.append(_parse_face(tokens[1][0], number, tokens[1][1], num_v))
        else:
            raise FormatError(f"unexpected line '{row.strip()}'", number, tokens[0][1])
    if len(labels) != num_v or len(maximal) != num_f:
        raise FormatError(f"header promises {num_v} vertices and {num_f} faces, "
                          f"found {len(labels)} and {len(maximal)}", lines[0][0], 1)
    k = complex_from_maximal_faces(labels, maximal, name)
    if list(k.maximal_faces) != sorted(maximal, key=face_sort_key):
        raise FormatError("listed faces are not exactly the maximal faces", lines[0][0], 1)
    return k


# --- Scripts ---
def _step_text(g: Graph, line: ScriptLine) -> str:
    step = line.step
    label = g.labels
    if isinstance(step, Split):
        body = f"split {label[step.v]}"
    elif isinstance(step, Match):
        body = f"match {label[step.v]} via {label[step.p]}"
    elif isinstance(step, Free):
        body = f"free {label[step.p]}"
    else:
        body = "search"
    text = f"at {path_name(line.path)} {body}"
    return f"{text}  # {line.note}" if line.note else text


def format_script(params: FamilyParams, g: Graph, program: Sequence[ScriptLine]) -> str:
    rows = [f"script {params.family} {format_params(params)} {len(program)}"]
    rows += [_step_text(g, line) for line in program]
    return "\n".join(rows) + "\n"


def parse_script_header(text: str) -> Tuple[FamilyParams, int]:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty script file", 1, 1)
    number, header = lines[0]
    tokens = _tokens(header)
    if len(tokens) != 4 or tokens[0][0] != "script":
        raise FormatError("expected 'script <family> <params> <#steps>'", number, 1)
    params = parse_params(tokens[1][0], tokens[2][0], number, tokens[2][1])
    return params, _int(tokens[3][0], number, tokens[3][1], "step count")


def _vertex(g: Graph, token: str, line: int, column: int) -> int:
    try:
        return g.index_of(parse_label(token))
    except ValueError:
        raise FormatError(f"unknown vertex '{token}' in {g.name}", line, column) from None


def parse_script(text: str, g: Graph) -> List[ScriptLine]:
    _, count = parse_script_header(text)
    program: List[ScriptLine] = []
    for number, row in _lines(text)[1:]:
        body, _, note = row.partition("  # ")
        tokens = _tokens(body)
        if len(tokens) < 3 or tokens[0][0] != "at":
            raise FormatError("expected 'at <path> <step>'", number, 1)
        path_token, column = tokens[1]
        path = "" if path_token == "root" else path_token
        if path and set(path) - {"L", "R"}:
            raise FormatError(f"node path '{path_token}' is not an L/R string", number, column)
        verb = [t for t, _ in tokens[2:]]
        if verb[0] == "split" and len(verb) == 2:
            step = Split(_vertex(g, verb[1], number, tokens[3][1]))
        elif verb[0] == "free" and len(verb) == 2:
            step = Free(_vertex(g, verb[1], number, tokens[3][1]))
        elif verb[0] == "match" and len(verb) == 4 and verb[2] == "via":
            step = Match(_vertex(g, verb[1], number, tokens[3][1]),
                         _vertex(g, verb[3], number, tokens[5][1]))
        elif verb == ["search"]:
            step = Search()
        else:
            raise FormatError(f"unknown step '{' '.join(verb)}'", number, tokens[2][1])
        program.append(ScriptLine(path, step, note))
    if len(program) != count:
        raise FormatError(f"header promises {count} steps, found {len(program)}", 1, 1)
    return program


# --- Matchings ---
def format_matching(params: FamilyParams, matching: PartialMatching) -> str:
    critical = matching.critical_faces()
    rows = [f"matching {params.family} {format_params(params)} {len(matching.pairs)} {len(critical)}"]
    rows += [f"pair {_face_text(lower)} {_face_text(upper)}" for lower, upper in matching.pairs]
    rows.append("critical")
    rows += [f"c {_face_text(face)}" for face in critical]
    return "\n".join(rows) + "\n"


def parse_matching_header(text: str) -> Tuple[FamilyParams, int, int]:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty matching file", 1, 1)
    number, header = lines[0]
    tokens = _tokens(header)
    if len(tokens) != 5 or tokens[0][0] != "matching":
        raise FormatError("expected 'matching <family> <params> <#pairs> <#critical>'", number, 1)
    params = parse_params(tokens[1][0], tokens[2][0], number, tokens[2][1])
    return (params, _int(tokens[3][0], number, tokens[3][1], "pair count"),
            _int(tokens[4][0], number, tokens[4][1], "critical count"))


def parse_matching(text: str, k: SimplicialComplex) -> PartialMatching:
    """Reads pairs against K; the critical block must be exactly the unmatched faces."""
    _, num_pairs, num_critical = parse_matching_header(text)
    universe = len(k.labels)
    pairs: List[Tuple[Face, Face]] = []
    critical: List[Face] = []
    in_critical = False
    for number, row in _lines(text)[1:]:
        tokens = _tokens(row)
        if tokens[0][0] == "critical" and len(tokens) == 1 and not in_critical:
            in_critical = True
        elif tokens[0][0] == "pair" and len(tokens) == 3 and not in_critical:
            lower = _parse_face(tokens[1][0], number, tokens[1][1], universe)
            upper = _parse_face(tokens[2][0], number, tokens[2][1], universe)
            for face, column in ((lower, tokens[1][1]), (upper, tokens[2][1])):
                if not k.contains(face):
                    raise FormatError(f"face {_face_text(face)} is not in {k.name}", number, column)
            pairs.append((lower, upper))
        elif tokens[0][0] == "c" and len(tokens) == 2 and in_critical:
            critical.append(_parse_face(tokens[1][0], number, tokens[1][1], universe))
        else:
            raise FormatError(f"unexpected line '{row.strip()}'", number, tokens[0][1])
    if len(pairs) != num_pairs or len(critical) != num_critical:
        raise FormatError(f"header promises {num_pairs} pairs and {num_critical} critical faces, "
                          f"found {len(pairs)} and {len(critical)}", 1, 1)
    matching = PartialMatching(k, pairs)
    if matching.critical_faces() != critical:
        raise FormatError("critical block does not list exactly the unmatched faces", 1, 1)
    return matching


# --- Homology and reports ---
def format_homology(result: HomologyResult) -> str:
    return "\n".join(result.report_rows()) + "\n"


def to_structured(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _counts_text(counts: Optional[Dict[Any, int]]) -> str:
    if counts is None:
        return "-"
    return ",".join(f"{d}:{c}" for d, c in sorted(counts.items(), key=lambda kv: int(kv[0]))) or "none"


def report_block(report: Dict[str, Any]) -> List[str]:
    """key=value lines for one VerificationReport.to_dict()."""
    rows = [f"instance={report['complex_id']}",
            f"family={report['family']}",
            f"param={report['param']}",
            f"vertices={report['vertices']}",
            f"faces={report['faces']}",
            f"f_vector={report['f_vector'] or '-'}",
            f"prediction={report['prediction'] or '-'}"]
    expected = report["expected_morse"]
    morse = report["morse"]
    rows.append(f"morse.expected={_counts_text(expected['critical']) if expected else '-'}")
    rows.append(f"morse.critical={_counts_text(morse['critical']) if morse else '-'}")
    rows.append(f"morse.source={report['morse_source'] or '-'}")
    result = report["homology"]
    if result:
        nonzero = {d: b for d, b in result["betti"].items() if b}
        rows.append(f"homology.betti={_counts_text(nonzero)}")
        if result["torsion"] is None:
            rows.append("homology.torsion=skipped")
        else:
            torsion = {d: t for d, t in result["torsion"].items() if t}
            rows.append("homology.torsion=" + (";".join(
                f"{d}:{'x'.join(str(x) for x in t)}" for d, t in sorted(torsion.items())) or "none"))
    for name, channel in sorted(report["channels"].items()):
        rows.append(f"channel.{name}={channel['status']}")
        rows += [f"reason.{name}={reason}" for reason in channel["reasons"]]
    rows += [f"finding={finding}" for finding in report["findings"]]
    rows.append(f"budget_exhausted={str(report['budget_exhausted']).lower()}")
    rows.append(f"verdict={report['verdict']}")
    return rows


def summary_table(reports: Sequence[Dict[str, Any]]) -> List[str]:
    header = ("instance", "prediction", "morse", "homology", "verdict")
    body = []
    for report in reports:
        morse = report["morse"]
        result = report["homology"]
        betti = {d: b for d, b in result["betti"].items() if b} if result else None
        body.append((report["complex_id"], report["prediction"] or "-",
                     _counts_text(morse["critical"]) if morse else "-",
                     _counts_text(betti), report["verdict"]))
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header] + body]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return lines


def format_reports(reports: Sequence[Dict[str, Any]]) -> str:
    rows: List[str] = []
    for report in reports:
        rows += report_block(report)
        rows.append("")
    rows += summary_table(reports)
    return "\n".join(rows) + "\n"


def parse_kind(kind: str) -> str:
    if kind not in ("graph", "complex", "script", "matching"):
        raise ParameterError(f"unknown artifact kind '{kind}'")
    return kind
