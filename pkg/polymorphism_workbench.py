#!/usr/bin/env python3
"""
Polymorphism Circuit Workbench - command-line driver

Every command reads the workbench text formats from files (or `-` for
stdin) and writes results to stdout. Artifacts (programs, covers, TSVND and
ND circuits, witnesses) are printed in their text format so they can be fed
back in; `--json` switches to a versioned JSON document instead.

Exit codes: 0 success or valid, 1 invalid (a counterexample is printed),
2 usage or parse error.
"""

import argparse
import json
import logging
import sys

from circuits import find_disagreement, optimal_circuit, parse_basis
from config import (
    DEFAULT_MAX_SIZE,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_USAGE,
    GATE_BASIS,
    REPORT_SCHEMA_VERSION,
    SWEEP_CHECKS,
    configure_logging,
    patched_size_bound,
    synthesis_size_bound,
)
from covers import CoverFlavor, check_ppol_conditions, circuit_from_cover, cover_from_circuit, verify_cover
from polymorphisms import (
    classify_trivial,
    detect_nontrivial_polymorphisms,
    membership_of_fixtures,
    polymorphism_witnesses,
)
from report_display import (
    print_circuit_check,
    print_classification,
    print_cover_check,
    print_decided_function,
    print_polymorphism_witnesses,
    print_sweep_report,
    print_tsvnd_report,
)
from synthesis import (
    MultiTable,
    patch_points,
    preferred_operation,
    synthesize_from_polymorphism,
    synthesize_multi_output,
    synthesize_patched,
)
from text_formats import (
    format_cover,
    format_nd,
    format_program,
    format_tsvnd,
    format_witness,
    parse_cover,
    parse_nd,
    parse_program,
    parse_table,
    parse_tsvnd,
)
from theorem_sweep import run_theorem_sweep
from truth_table import MAJORITY_WITNESSES, NamedOperation, TruthTable
from tsvnd import (
    compile_constraints,
    merge_nd_cond,
    pol_cover_from_tsvnd,
    split_tsvnd,
    tsvnd_from_pol_cover,
    validate_tsvnd,
)
from workbench_errors import (
    CircuitMismatchError,
    CoverStructureError,
    FormatError,
    InvalidCoverError,
    InvalidTsvndError,
    NondeterministicMismatchError,
    PolymorphismRequiredError,
    PpolConditionError,
    WorkbenchError,
)

logger = logging.getLogger("polymorphism_workbench")


class UsageError(Exception):
    """Bad or missing command-line arguments."""


class InvalidResult(Exception):
    """The command ran and found the input invalid; `artifact` reproduces it."""

    def __init__(self, message, artifact="", payload=None):
        super().__init__(message)
        self.artifact = artifact
        self.payload = payload or {}


# ============================================================================
# INPUT AND OUTPUT
# ============================================================================

def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_text(path, text):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _load_table(args, required=True, allow_multi=False):
    """The truth table from --table <file> or --bits <string> [--n k]."""
    if getattr(args, "table", None):
        table = parse_table(_read_text(args.table))
    elif getattr(args, "bits", None):
        table = TruthTable.from_bits(args.bits, args.n)
    elif required:
        raise UsageError("give a truth table with --table <file> or --bits <string> [--n k]")
    else:
        return None
    if isinstance(table, MultiTable) and not allow_multi:
        raise UsageError("this command takes a single-output truth table")
    return table


def _require(args, name):
    value = getattr(args, name.replace("-", "_"), None)
    if not value:
        raise UsageError(f"--{name} <file> is required")
    return value


def _emit(args, payload, show):
    """Print either the JSON payload or the human-readable form."""
    if args.json:
        document = {"schema_version": REPORT_SCHEMA_VERSION, "command": args.command, **payload}
        print(json.dumps(document, indent=2, sort_keys=True))
    else:
        show()


def _emit_artifact(args, text, **payload):
    _emit(args, {"artifact": text, **payload}, lambda: print(text, end=""))


# ============================================================================
# COMMANDS: FUNCTIONS AND PROGRAMS
# ============================================================================

def cmd_classify(args):
    table = _load_table(args)
    trivial = classify_trivial(table)
    detected = detect_nontrivial_polymorphisms(table)
    _emit(
        args,
        {"function": table.bits, "trivial": str(trivial), "detected": [op.value for op in detected]},
        lambda: print_classification(table, trivial, detected),
    )
    return EXIT_OK


def cmd_synth(args):
    table = _load_table(args, allow_multi=True)
    base = None
    if args.base or args.base_bits:
        base = parse_table(_read_text(args.base)) if args.base else TruthTable.from_bits(args.base_bits, table.arity)
        if isinstance(table, MultiTable) or isinstance(base, MultiTable):
            raise UsageError("patching works on single-output tables only")

    closed = base if base is not None else table
    if args.op:
        op = NamedOperation.parse(args.op)
    elif isinstance(closed, MultiTable):
        found = detect_nontrivial_polymorphisms(closed)
        op = found[0] if found else None
    else:
        op = preferred_operation(closed)
    if op is None:
        raise InvalidResult(f"{closed} is closed under none of maj, aff, and, or")

    try:
        if base is not None:
            program = synthesize_patched(table, base, op)
            bound = patched_size_bound(table.arity, len(patch_points(table, base)))
        elif isinstance(table, MultiTable):
            program = synthesize_multi_output(table, op)
            bound = synthesis_size_bound(table.arity, table.output_count)
        else:
            program = synthesize_from_polymorphism(table, op)
            bound = synthesis_size_bound(table.arity)
    except PolymorphismRequiredError as exc:
        selections = polymorphism_witnesses(op, closed)
        first = selections[0]
        raise InvalidResult(
            str(exc),
            f"rows {' '.join(map(str, first.rows))} -> {''.join(map(str, first.image))}\n",
        ) from exc
    logger.info("%s via %s: %d gates (bound %d)", table, op.value, program.size, bound)
    _emit_artifact(args, format_program(program), op=op.value, size=program.size, bound=bound)
    return EXIT_OK


def cmd_optimal(args):
    table = _load_table(args)
    program = optimal_circuit(table, args.max_size, parse_basis(args.basis))
    if program is None:
        raise InvalidResult(f"no circuit of size <= {args.max_size} computes {table}")
    _emit_artifact(args, format_program(program), size=program.size)
    return EXIT_OK


def cmd_verify_circuit(args):
    table = _load_table(args)
    program = parse_program(_read_text(_require(args, "circuit")))
    wrong_at = find_disagreement(program, table)
    payload = {
        "function": table.bits,
        "size": program.size,
        "computes": wrong_at is None,
        "counterexample": None if wrong_at is None else "".join(map(str, wrong_at)),
    }
    _emit(args, payload, lambda: print_circuit_check(program, table, wrong_at))
    return EXIT_OK if wrong_at is None else EXIT_INVALID


def cmd_witnesses(args):
    table = _load_table(args)
    ops = [NamedOperation.parse(args.op)] if args.op else list(NamedOperation)
    found = {op: polymorphism_witnesses(op, table) for op in ops}
    fixtures = None
    if table.row_count == MAJORITY_WITNESSES[0].arity:
        fixtures = membership_of_fixtures(table, MAJORITY_WITNESSES)

    def show():
        for position, op in enumerate(ops):
            last = position == len(ops) - 1
            print_polymorphism_witnesses(table, op, found[op], fixtures if last else None)

    payload = {
        "function": table.bits,
        "witnesses": {
            op.value: [{"rows": list(s.rows), "image": "".join(map(str, s.image))} for s in selections]
            for op, selections in found.items()
        },
        "fixtures": fixtures,
    }
    _emit(args, payload, show)
    return EXIT_OK


# ============================================================================
# COMMANDS: COVERS
# ============================================================================

def _load_cover(args):
    return parse_cover(_read_text(_require(args, "cover")), _load_table(args, required=False))


def cmd_cover_check(args):
    cover = _load_cover(args)
    violations = check_ppol_conditions(cover) if cover.flavor is CoverFlavor.PPOL else []
    if violations:
        valid, witness = False, None
    else:
        valid, witness = verify_cover(cover)
    payload = {
        "function": cover.table.bits,
        "flavor": cover.flavor.value,
        "size": cover.size,
        "valid": valid,
        "ppol_violations": [{"condition": c, "gates": list(g)} for c, g in violations],
        "counterexample": None if witness is None else format_witness(witness),
    }

    def show():
        print_cover_check(cover, valid, witness, violations)
        if witness is not None:
            print(format_witness(witness), end="")

    _emit(args, payload, show)
    return EXIT_OK if valid else EXIT_INVALID


def cmd_cover_from_circuit(args):
    table = _load_table(args)
    program = parse_program(_read_text(_require(args, "circuit")))
    try:
        cover = cover_from_circuit(program, table, deduplicate=args.dedupe)
    except CircuitMismatchError as exc:
        raise InvalidResult(str(exc), "".join(map(str, exc.x)) + "\n") from exc
    except PpolConditionError as exc:
        raise InvalidResult(f"{exc}; rerun with --dedupe") from exc
    _emit_artifact(args, format_cover(cover), size=cover.size)
    return EXIT_OK


def cmd_circuit_from_cover(args):
    cover = _load_cover(args)
    try:
        program = circuit_from_cover(cover)
    except PpolConditionError as exc:
        raise InvalidResult(str(exc), payload={"gates": list(exc.gates)}) from exc
    except CoverStructureError as exc:
        artifact = format_witness(exc.witness) if exc.witness is not None else ""
        raise InvalidResult(
            f"{exc} (redundant gates: {list(exc.redundant_gates)})",
            artifact,
            {"gates": list(exc.gates), "redundant_gates": list(exc.redundant_gates)},
        ) from exc
    _emit_artifact(args, format_program(program), size=program.size)
    return EXIT_OK


# ============================================================================
# COMMANDS: TSVND AND ND CIRCUITS
# ============================================================================

def cmd_tsvnd_build(args):
    cover = _load_cover(args)
    try:
        circuit = tsvnd_from_pol_cover(cover)
    except (InvalidCoverError, CoverStructureError) as exc:
        raise InvalidResult(str(exc), format_witness(exc.witness) if exc.witness else "") from exc
    if args.compile:
        circuit = compile_constraints(circuit)
    _emit_artifact(args, format_tsvnd(circuit), size=circuit.size, m=circuit.guess_count)
    return EXIT_OK


def cmd_tsvnd_check(args):
    circuit = parse_tsvnd(_read_text(_require(args, "circuit")))
    table = _load_table(args, required=False)
    valid, report = validate_tsvnd(circuit, table)

    def show():
        print_tsvnd_report(circuit, report)
        print_decided_function(circuit.arity, report.decided)

    _emit(args, {"size": circuit.size, "valid": valid, "report": report.to_dict()}, show)
    return EXIT_OK if valid else EXIT_INVALID


def _invalid_tsvnd(exc):
    report = exc.report.to_dict() if exc.report is not None else {}
    return InvalidResult(str(exc), json.dumps(report, sort_keys=True) + "\n", {"report": report})


def cmd_tsvnd_to_cover(args):
    circuit = parse_tsvnd(_read_text(_require(args, "circuit")))
    table = _load_table(args)
    try:
        cover = pol_cover_from_tsvnd(circuit, table)
    except InvalidTsvndError as exc:
        raise _invalid_tsvnd(exc) from exc
    _emit_artifact(args, format_cover(cover), size=cover.size)
    return EXIT_OK


def cmd_nd_split(args):
    circuit = parse_tsvnd(_read_text(_require(args, "circuit")))
    table = _load_table(args, required=False)
    try:
        nd, cond = split_tsvnd(circuit, table)
    except InvalidTsvndError as exc:
        raise _invalid_tsvnd(exc) from exc
    nd_text, cond_text = format_nd(nd), format_nd(cond)
    if args.out_nd:
        _write_text(args.out_nd, nd_text)
    if args.out_cond:
        _write_text(args.out_cond, cond_text)
    if args.out_nd and args.out_cond and not args.json:
        logger.info("wrote %s (%d gates) and %s (%d gates)", args.out_nd, nd.size, args.out_cond, cond.size)
        return EXIT_OK
    _emit(args, {"nd": nd_text, "cond": cond_text}, lambda: print(nd_text + "\n" + cond_text, end=""))
    return EXIT_OK


def cmd_nd_merge(args):
    nd = parse_nd(_read_text(_require(args, "nd")))
    cond = parse_nd(_read_text(_require(args, "cond")))
    table = _load_table(args, required=False)
    try:
        circuit = merge_nd_cond(nd, cond, table)
    except NondeterministicMismatchError as exc:
        raise InvalidResult(str(exc), "".join(map(str, exc.x)) + "\n" if exc.x else "") from exc
    _emit_artifact(args, format_tsvnd(circuit), size=circuit.size, m=circuit.guess_count)
    return EXIT_OK


# ============================================================================
# COMMANDS: SWEEP
# ============================================================================

def cmd_sweep(args):
    if args.n is None:
        raise UsageError("sweep needs --n <k>")
    checks = tuple(part.strip() for part in args.checks.split(",") if part.strip())
    report = run_theorem_sweep(args.n, checks, args.max_size)
    if args.json:
        print(report.to_json())
    else:
        print_sweep_report(report)
    return EXIT_OK if report.all_passed else EXIT_INVALID


# ============================================================================
# ARGUMENT PARSING
# ============================================================================

def _table_options():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--table", help="truth table file (n=<k> header, output bits)")
    parent.add_argument("--bits", help="inline output bits, e.g. 0001")
    parent.add_argument("--n", type=int, default=None, help="arity for --bits (inferred from its length)")
    return parent


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON document instead of text")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    table = _table_options()

    parser = argparse.ArgumentParser(
        prog="polymorphism_workbench",
        description="Polymorphisms, gate covers and TSVND circuits of small Boolean functions",
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    def command(name, handler, help_text, parents=(common, table)):
        sub = commands.add_parser(name, parents=list(parents), help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    command("classify", cmd_classify, "trivial shape and closure under maj, aff, and, or")

    sub = command("synth", cmd_synth, "linear-size circuit from a polymorphism")
    sub.add_argument("--op", choices=[op.value for op in NamedOperation])
    sub.add_argument("--base", help="table file of a closed neighbour g; patches f from g")
    sub.add_argument("--base-bits", help="inline output bits of g")

    sub = command("optimal", cmd_optimal, "minimum circuit by exhaustive search")
    sub.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE)
    sub.add_argument("--basis", default=",".join(GATE_BASIS))

    sub = command("verify-circuit", cmd_verify_circuit, "check that a program computes f")
    sub.add_argument("--circuit")

    sub = command("witnesses", cmd_witnesses, "row selections breaking closure, and w1..w4 membership")
    sub.add_argument("--op", choices=[op.value for op in NamedOperation])

    sub = command("cover-check", cmd_cover_check, "verify a Pol or pPol cover")
    sub.add_argument("--cover")

    sub = command("cover-from-circuit", cmd_cover_from_circuit, "gate matrices of a program as a pPol cover")
    sub.add_argument("--circuit")
    sub.add_argument("--dedupe", action="store_true", help="drop repeated columns and dead gates first")

    sub = command("circuit-from-cover", cmd_circuit_from_cover, "arrange a pPol cover into a program")
    sub.add_argument("--cover")

    sub = command("tsvnd-build", cmd_tsvnd_build, "constraint-form TSVND circuit from a Pol cover")
    sub.add_argument("--cover")
    sub.add_argument("--compile", action="store_true", help="emit the program form instead")

    sub = command("tsvnd-check", cmd_tsvnd_check, "totality and single-valuedness by enumeration")
    sub.add_argument("--circuit")

    sub = command("tsvnd-to-cover", cmd_tsvnd_to_cover, "Pol cover read off a TSVND circuit")
    sub.add_argument("--circuit")

    sub = command("nd-split", cmd_nd_split, "ND and coND circuits from a TSVND circuit")
    sub.add_argument("--circuit")
    sub.add_argument("--out-nd")
    sub.add_argument("--out-cond")

    sub = command("nd-merge", cmd_nd_merge, "TSVND circuit from an ND and a coND circuit")
    sub.add_argument("--nd")
    sub.add_argument("--cond")

    sub = command("sweep", cmd_sweep, "theorem checks over every function of arity n", parents=(common,))
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--checks", default=",".join(SWEEP_CHECKS))
    sub.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    try:
        return args.handler(args)
    except InvalidResult as result:
        if args.json:
            document = {
                "schema_version": REPORT_SCHEMA_VERSION,
                "command": args.command,
                "valid": False,
                "error": str(result),
                "counterexample": result.artifact or None,
                **result.payload,
            }
            print(json.dumps(document, indent=2, sort_keys=True))
        else:
            print(f"❌ {result}")
            if result.artifact:
                print(result.artifact, end="")
        return EXIT_INVALID
    except (UsageError, FormatError, OSError) as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WorkbenchError as exc:
        print(f"[ERROR] {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
