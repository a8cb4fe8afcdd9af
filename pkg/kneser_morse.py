"""
kneser_morse.py

Subtitle: Discrete Morse audits for stable Kneser graphs

Purpose:
A command-line driven toolkit that generates the stable Kneser graph
families and their relatives, builds independence complexes, runs and
audits discrete Morse matchings (scripted matching trees, searched trees
and the graded SG_{2,k} construction), computes integral homology, and
reconciles everything with the closed-form predictions in verification
sweeps. Every artifact is written in a deterministic text format.
"""

import argparse
import configparser
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import List, Optional

import artifacts
from complexes import f_vector, independence_complex, independence_count, neighborhood_complex
from db import setup_database
from errors import FormatError, KneserMorseError, ParameterError, SearchError, SizeError
from graphs import (DEFAULT_CHROMATIC_BOUND, FAMILY_TAGS, FamilyParams, Graph, build_family,
                    chromatic_number_exact, classify_sg_n2, expected_class_counts)
from homology import homology
from morse import (PartialMatching, ScriptLine, induced_matching, morse_summary, run_script, search_tree,
                   summary_from_tree, verify_acyclic)
from morse_scripts import cycle_script, e_graph_script, path_script
from morse_sg2k import sg2k_report
from theorems import (DEFAULT_MATCHING_FACE_LIMIT, FAMILY_PARAM, VERIFY_FAMILIES, VerifySettings,
                      sweep_exit_code, verify_family)

# --- Constants ---
CONFIG_FILE = "config.ini"
OUTPUT_DIR = "out"
CACHE_DIR = "cache"
LOG_DIR = "logs"

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


# --- Logging Setup ---
def setup_logging(log_dir: str = LOG_DIR, debug: bool = False):
    if not os.path.exists(log_dir):
        os.makedirs(log_dir)

    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(os.path.join(log_dir, "kneser_morse.log")),
            logging.StreamHandler()
        ]
    )
    if debug:
        logging.getLogger().setLevel(logging.DEBUG)


# --- Configuration ---
def load_config(path: str = CONFIG_FILE) -> configparser.ConfigParser:
    """Loads budgets, output paths and the optional database from config.ini."""
    config = configparser.ConfigParser()
    for section in ("Budgets", "Output", "Database"):
        config.add_section(section)
    if not config.read(path):
        logging.warning("Config file '%s' not found. Using built-in defaults.", path)
    return config


@dataclass
class RunConfig:
    """The validated merge of config.ini and the command line."""
    command: str
    params: Optional[FamilyParams] = None
    family: str = ""
    values: List[int] = field(default_factory=list)
    channels: List[str] = field(default_factory=lambda: ["morse", "homology"])
    settings: VerifySettings = field(default_factory=VerifySettings)
    chromatic_bound: int = DEFAULT_CHROMATIC_BOUND
    out_dir: str = OUTPUT_DIR
    cache_dir: str = CACHE_DIR
    fmt: str = "text"
    complex_kind: str = "ind"
    emit_script: bool = False
    force: bool = False
    quiet: bool = False
    input_path: str = ""
    artifact_kind: str = ""

    def validate(self):
        for name in ("face_budget", "node_budget", "snf_threshold", "search_fanout",
                     "matching_face_limit", "isomorphism_bound"):
            if getattr(self.settings, name) <= 0:
                raise ParameterError(f"budget {name} must be positive")
        if self.chromatic_bound <= 0:
            raise ParameterError("chromatic bound must be positive")
        if self.fmt not in ("text", "structured"):
            raise ParameterError(f"unknown output format '{self.fmt}'")
        if self.command == "verify":
            if self.family not in VERIFY_FAMILIES:
                raise ParameterError(f"unknown verify family '{self.family}'")
            if not self.values:
                raise ParameterError(f"verify --family {self.family} needs "
                                     f"--{FAMILY_PARAM[self.family]} VALUE or a..b")
        elif self.params is not None:
            # builds nothing yet, only checks the parameters
            _check_family_params(self.params)


def _check_family_params(params: FamilyParams):
    for key in ("n", "k", "r", "m"):
        value = getattr(params, key)
        if value is not None and value < 0:
            raise ParameterError(f"parameter {key} must be non-negative, got {value}")
    if params.family in ("kg", "sg") and (params.n is None or params.k is None):
        raise ParameterError(f"family '{params.family}' needs -n and -k")


def parse_range(text: str) -> List[int]:
    """'5', '3..12' or '3,5,7'."""
    try:
        if ".." in text:
            low, high = text.split("..")
            low, high = int(low), int(high)
            if low > high:
                raise ParameterError(f"empty range '{text}'")
            return list(range(low, high + 1))
        return sorted({int(part) for part in text.split(",")})
    except ValueError:
        raise ParameterError(f"malformed range '{text}', expected a..b") from None


def parse_sizes(text: Optional[str]) -> tuple:
    if not text:
        return ()
    try:
        return tuple(int(s) for s in text.replace("x", ",").split(","))
    except ValueError:
        raise ParameterError(f"malformed sizes '{text}'") from None


def build_run_config(args: argparse.Namespace, config: configparser.ConfigParser) -> RunConfig:
    budgets = config['Budgets']
    output = config['Output']
    settings = VerifySettings(
        face_budget=args.budget_faces or budgets.getint('FaceBudget', VerifySettings.face_budget),
        node_budget=args.budget_nodes or budgets.getint('NodeBudget', VerifySettings.node_budget),
        snf_threshold=args.snf_threshold or budgets.getint('SnfThreshold', VerifySettings.snf_threshold),
        search_fanout=budgets.getint('SearchFanout', VerifySettings.search_fanout),
        matching_face_limit=budgets.getint('MatchingFaceLimit', DEFAULT_MATCHING_FACE_LIMIT),
        isomorphism_bound=budgets.getint('IsomorphismBound', VerifySettings.isomorphism_bound),
    )
    run = RunConfig(
        command=args.command,
        settings=settings,
        chromatic_bound=budgets.getint('ChromaticBound', DEFAULT_CHROMATIC_BOUND),
        out_dir=args.out or output.get('OutputDir', OUTPUT_DIR),
        cache_dir=output.get('CacheDir', CACHE_DIR),
        fmt=args.format,
        force=args.force,
        quiet=args.quiet,
    )
    if args.command == "verify":
        run.family = args.family
        run.channels = [c for c in args.channels.split(",") if c]
        key = FAMILY_PARAM.get(args.family)
        raw = getattr(args, key, None) if key else None
        run.values = parse_range(raw) if raw else []
    elif args.command == "export":
        run.input_path = args.input
        run.artifact_kind = artifacts.parse_kind(args.kind)
    elif args.command == "classify":
        run.values = [args.n] if args.n is not None else []
        if not run.values:
            raise ParameterError("classify needs -n")
    else:
        run.params = FamilyParams(args.family, n=args.n, k=args.k, r=args.r, m=args.m,
                                  sizes=parse_sizes(args.sizes))
        run.complex_kind = getattr(args, "complex_kind", "ind")
        run.emit_script = getattr(args, "emit_script", False)
    run.validate()
    return run


# --- Output ---
def write_artifact(run: RunConfig, filename: str, text: str) -> str:
    """Writes through a temporary file so a reader never sees half an artifact."""
    os.makedirs(run.out_dir, exist_ok=True)
    path = os.path.join(run.out_dir, filename)
    tmp = path + ".tmp"
    with open(tmp, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    os.replace(tmp, path)
    logging.info("Wrote %s", path)
    return path


def emit(run: RunConfig, text_lines: List[str], payload: dict):
    if run.fmt == "structured":
        sys.stdout.write(artifacts.to_structured(payload))
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def stem(params: FamilyParams) -> str:
    return f"{params.family}-" + params.describe().replace("=", "").replace(",", "-")


# --- Subcommands ---
def cmd_gen(run: RunConfig) -> int:
    g = build_family(run.params)
    path = write_artifact(run, stem(run.params) + ".graph", artifacts.format_graph(run.params, g))
    emit(run, [f"{g.name}: |V|={g.num_vertices} |E|={g.num_edges}", f"written to {path}"],
         {"graph": g.name, "vertices": g.num_vertices, "edges": g.num_edges, "file": path})
    return EXIT_OK


def cmd_complex(run: RunConfig) -> int:
    g = build_family(run.params)
    if run.complex_kind == "nbhd":
        k = neighborhood_complex(g, run.settings.face_budget)
    else:
        k = independence_complex(g, run.settings.face_budget)
    path = write_artifact(run, f"{run.complex_kind}-{stem(run.params)}.complex", artifacts.format_complex(k))
    fv = f_vector(k)
    emit(run, [f"{k.name}: dim={k.dimension} faces={k.num_faces} f={fv}",
               f"maximal faces: {len(k.maximal_faces)}", f"written to {path}"],
         {"complex": k.name, "dimension": k.dimension, "faces": k.num_faces,
          "f_vector": list(fv.counts), "maximal_faces": len(k.maximal_faces), "file": path})
    return EXIT_OK


def _designated_program(params: FamilyParams, g: Graph):
    """Node-addressed program for families that have one, else None."""
    if params.family == "e" and params.n >= 3:
        return e_graph_script(params.n, g).program
    if params.family == "c":
        return cycle_script(params.m)
    if params.family == "p":
        return path_script(params.m)
    return None


def cmd_morse(run: RunConfig) -> int:
    params, settings = run.params, run.settings
    g = build_family(params)
    lines: List[str] = []
    payload = {"graph": g.name}
    matching: Optional[PartialMatching] = None

    if params.family == "sg" and params.n == 2 and params.k is not None and params.k >= 3:
        report = sg2k_report(params.k)
        for problem in report.problems:
            lines.append(f"problem: {problem}")
        payload["audit"] = report.to_dict()
        if not report.ok:
            emit(run, lines + ["verdict=mismatch"], payload)
            return EXIT_MISMATCH
        matching = report.matching
        summary = morse_summary(matching)
        source = "sg2k"
    else:
        program = _designated_program(params, g)
        if program is not None:
            tree = run_script(g, program, settings.node_budget, settings.search_fanout)
            source = "script"
        else:
            tree = search_tree(g, node_budget=settings.node_budget, fanout=settings.search_fanout)
            source = "search"
        if run.emit_script:
            steps = [ScriptLine(p, s) for p, s in tree.steps()] if program is None else program
            path = write_artifact(run, stem(params) + ".script", artifacts.format_script(params, g, steps))
            lines.append(f"script written to {path}")
            payload["script_file"] = path
        summary = summary_from_tree(tree)
        if independence_count(g) <= settings.matching_face_limit:
            k = independence_complex(g, settings.face_budget)
            matching = induced_matching(g, tree, k)
            check = verify_acyclic(k, matching)
            if not check.ok:
                emit(run, lines + ["acyclic=false", "verdict=mismatch"], payload)
                return EXIT_MISMATCH
            summary = morse_summary(matching)
        else:
            lines.append("acyclic=skipped (complex above the matching face limit)")

    if matching is not None:
        path = write_artifact(run, stem(params) + ".matching", artifacts.format_matching(params, matching))
        lines.append(f"matching written to {path}")
        payload["matching_file"] = path
    payload.update({"source": source, "summary": summary.to_dict()})
    head = [f"{g.name}: source={source} critical={summary.total_critical()} "
            f"empty_matched={str(summary.empty_matched).lower()}"]
    head += [f"critical dim={dim} size={dim + 1} count={count}"
             for dim, count in sorted(summary.critical_counts.items())]
    emit(run, head + lines, payload)
    return EXIT_OK


def cmd_homology(run: RunConfig) -> int:
    g = build_family(run.params)
    if run.complex_kind == "nbhd":
        k = neighborhood_complex(g, run.settings.face_budget)
    else:
        k = independence_complex(g, run.settings.face_budget)
    cid = f"{run.complex_kind}-{stem(run.params)}"
    result = homology(k, run.settings.snf_threshold, cid, run.settings.face_budget)
    path = write_artifact(run, cid + ".homology", artifacts.format_homology(result))
    emit(run, result.report_rows() + [f"written to {path}"], {"homology": result.to_dict(), "file": path})
    return EXIT_OK


def cmd_verify(run: RunConfig) -> int:
    reports = verify_family(run.family, run.values, run.channels, run.settings,
                            cache_dir=run.cache_dir, force=run.force, progress=not run.quiet)
    dicts = [r.to_dict() for r in reports]
    code = sweep_exit_code(reports)
    if run.fmt == "structured":
        text = artifacts.to_structured({"family": run.family, "reports": dicts, "exit": code})
        path = write_artifact(run, f"verify-{run.family}.json", text)
    else:
        text = artifacts.format_reports(dicts)
        path = write_artifact(run, f"verify-{run.family}.txt", text)
    sys.stdout.write(text)
    logging.info("Verification of %s finished with exit code %d (%s).", run.family, code, path)
    return code


def cmd_export(run: RunConfig) -> int:
    with open(run.input_path, 'r', encoding='utf-8') as f:
        original = f.read()
    kind = run.artifact_kind
    if kind == "graph":
        artifact = artifacts.parse_graph(original)
        text = artifacts.format_graph(artifact.params, artifact.graph)
    elif kind == "complex":
        text = artifacts.format_complex(artifacts.parse_complex(original))
    elif kind == "script":
        params, _ = artifacts.parse_script_header(original)
        g = build_family(params)
        program = artifacts.parse_script(original, g)
        text = artifacts.format_script(params, g, program)
    else:
        params, _, _ = artifacts.parse_matching_header(original)
        g = build_family(params)
        k = independence_complex(g, run.settings.face_budget)
        matching = artifacts.parse_matching(original, k)
        if not verify_acyclic(k, matching).ok:
            logging.error("Matching in %s is not acyclic.", run.input_path)
            return EXIT_MISMATCH
        text = artifacts.format_matching(params, matching)
    path = write_artifact(run, os.path.basename(run.input_path), text)
    identical = text == original
    emit(run, [f"{kind} {run.input_path} -> {path}", f"identical={str(identical).lower()}"],
         {"kind": kind, "input": run.input_path, "file": path, "identical": identical})
    return EXIT_OK if identical else EXIT_MISMATCH


def cmd_classify(run: RunConfig) -> int:
    n = run.values[0]
    counts = classify_sg_n2(n).counts
    expected = expected_class_counts(n)
    emit(run, [f"SG_{n},2 classes A={counts[0]} B={counts[1]} M={counts[2]}",
               f"expected A={expected[0]} B={expected[1]} M={expected[2]}"],
         {"n": n, "counts": list(counts), "expected": list(expected)})
    return EXIT_OK if counts == expected else EXIT_MISMATCH


def cmd_chromatic(run: RunConfig) -> int:
    g = build_family(run.params)
    chi = chromatic_number_exact(g, run.chromatic_bound)
    emit(run, [f"chi({g.name})={chi}"], {"graph": g.name, "chromatic_number": chi})
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "complex": cmd_complex,
    "morse": cmd_morse,
    "homology": cmd_homology,
    "verify": cmd_verify,
    "export": cmd_export,
    "classify": cmd_classify,
    "chromatic": cmd_chromatic,
}


# --- Argument parsing ---
def _family_arguments(sub: argparse.ArgumentParser):
    group = sub.add_argument_group('PARAMETERS')
    group.add_argument('--family', required=True, choices=FAMILY_TAGS, help="Graph family tag.")
    group.add_argument('-n', type=int, help="Subset size n (kg, sg), or n of DC/C_odd/E.")
    group.add_argument('-k', type=int, help="Excess k of KG/SG_{n,k}.")
    group.add_argument('-r', type=int, help="Ladder length r of EL_r.")
    group.add_argument('-m', type=int, help="Size of C_m, P_m or K_m.")
    group.add_argument('--sizes', help="Two sizes 'a,b' for kb (K_a,b) or prod (C_a x P_b).")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Discrete Morse audits for stable Kneser graphs.",
        formatter_class=argparse.RawTextHelpFormatter
    )
    parser.description = (
        "Discrete Morse audits for stable Kneser graphs.\n\n"
        "--- HOW TO USE ---\n"
        "1. Generate a graph:\n"
        "   Write SG_{2,1} (the 5-cycle) in the text graph format.\n"
        "   > python kneser_morse.py gen --family sg -n 2 -k 1\n\n"
        "2. Build a complex:\n"
        "   Write Ind(E_16) by its maximal faces.\n"
        "   > python kneser_morse.py complex --family e -n 3\n\n"
        "3. Run a Morse matching:\n"
        "   Run the scripted tree on E_12 and keep the script.\n"
        "   > python kneser_morse.py morse --family e -n 5 --emit-script\n\n"
        "4. Compute homology:\n"
        "   > python kneser_morse.py homology --family sg -n 2 -k 4\n\n"
        "5. Verify a whole family against the predictions:\n"
        "   > python kneser_morse.py verify --family sg2 --k 2..8\n"
        "   > python kneser_morse.py verify --family e --n 8..10 --channels morse\n\n"
        "6. Round-trip an artifact:\n"
        "   > python kneser_morse.py export --in out/sg-n2-k1.graph --kind graph\n\n"
        "Exit codes: 0 all match, 1 mismatch, 2 usage or parse error, 3 budget exhausted.\n"
    )

    common = argparse.ArgumentParser(add_help=False)
    budget_group = common.add_argument_group('BUDGETS')
    budget_group.add_argument('--budget-faces', type=int, help="Maximum number of faces of a complex.")
    budget_group.add_argument('--budget-nodes', type=int, help="Node budget of the matching-tree search.")
    budget_group.add_argument('--snf-threshold', type=int,
                              help="Above this many faces homology skips torsion.")
    modifier_group = common.add_argument_group('MODIFIERS')
    modifier_group.add_argument('--out', help="Output directory (default from config.ini).")
    modifier_group.add_argument('--format', choices=("text", "structured"), default="text",
                                help="Standard output format.")
    modifier_group.add_argument('--config', default=CONFIG_FILE, help="Path to config.ini.")
    modifier_group.add_argument('--force', action='store_true',
                                help="Recompute homology even if a cache entry exists.")
    modifier_group.add_argument('--quiet', action='store_true', help="Hide progress bars.")
    modifier_group.add_argument('--debug', action='store_true', help="Enable full trace logging.")

    subparsers = parser.add_subparsers(dest='command', title='OPERATION MODES')
    for name, helptext in (("gen", "Write a graph."), ("complex", "Write a complex."),
                           ("morse", "Run the designated Morse matching."),
                           ("homology", "Compute reduced integral homology."),
                           ("chromatic", "Exact chromatic number of a small graph.")):
        sub = subparsers.add_parser(name, parents=[common], help=helptext,
                                    formatter_class=argparse.RawTextHelpFormatter)
        _family_arguments(sub)
        if name in ("complex", "homology"):
            sub.add_argument('--complex', dest='complex_kind', choices=("ind", "nbhd"), default="ind",
                             help="Independence or neighborhood complex.")
        if name == "morse":
            sub.add_argument('--emit-script', action='store_true',
                             help="Also write the matching-tree script.")

    verify = subparsers.add_parser('verify', parents=[common], help="Verify a family sweep.",
                                   formatter_class=argparse.RawTextHelpFormatter)
    verify.add_argument('--family', required=True, choices=VERIFY_FAMILIES)
    verify.add_argument('-n', '--n', dest='n', help="Value or range a..b of n.")
    verify.add_argument('-k', '--k', dest='k', help="Value or range a..b of k.")
    verify.add_argument('-r', '--r', dest='r', help="Value or range a..b of r.")
    verify.add_argument('--channels', default="morse,homology",
                        help="Comma-separated channels: morse, homology.")

    export = subparsers.add_parser('export', parents=[common], help="Re-read and re-write an artifact.",
                                   formatter_class=argparse.RawTextHelpFormatter)
    export.add_argument('--in', dest='input', required=True, help="Artifact file to read.")
    export.add_argument('--kind', required=True, choices=("graph", "complex", "script", "matching"))

    classify = subparsers.add_parser('classify', parents=[common], help="A/B/M class counts of SG_{n,2}.",
                                     formatter_class=argparse.RawTextHelpFormatter)
    classify.add_argument('-n', type=int, required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main function to run the CLI application."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    config = load_config(args.config)
    setup_logging(config['Output'].get('LogDir', LOG_DIR), args.debug)
    setup_database(config['Database'].get('ConnectionString'))

    try:
        run = build_run_config(args, config)
        return COMMANDS[run.command](run)
    except (ParameterError, FormatError) as e:
        logging.error("%s", e)
        return EXIT_USAGE
    except (SizeError, SearchError) as e:
        logging.error("Budget exhausted: %s", e)
        return EXIT_BUDGET
    except OSError as e:
        logging.error("Could not read or write a file: %s", e)
        return EXIT_USAGE
    except KneserMorseError as e:
        logging.error("%s: %s", type(e).__name__, e)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
