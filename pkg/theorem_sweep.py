"""
Exhaustive theorem sweep over every function of a given arity

  s3  detect polymorphisms -> synthesize -> check the program and its size bound
  s4  optimal circuit -> pPol cover -> verify -> circuit again, same size
  s5  Pol cover -> constraint TSVND -> validate -> compile -> Pol cover again

Functions are visited in order of their output string and every failure
keeps a text artifact that reproduces it.
"""

import json
import logging
from dataclasses import dataclass, field

from circuits import computes, optimal_circuit
from config import (
    DEFAULT_MAX_SIZE,
    REPORT_SCHEMA_VERSION,
    SWEEP_CHECKS,
    SWEEP_MAX_ARITY,
    synthesis_size_bound,
    tsvnd_size_bound,
)
from covers import as_pol_cover, circuit_from_cover, cover_from_circuit, verify_cover
from polymorphisms import classify_trivial, detect_nontrivial_polymorphisms
from synthesis import BoundaryBits, boundary_bits_of_program, synthesize_from_polymorphism
from text_formats import format_cover, format_program, format_tsvnd, format_witness
from truth_table import all_tables
from tsvnd import compile_constraints, pol_cover_from_tsvnd, tsvnd_from_pol_cover, validate_tsvnd
from workbench_errors import InfeasibleSweepError, WorkbenchError

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not_applicable"


class _CheckFailed(Exception):
    def __init__(self, message, artifact=""):
        super().__init__(message)
        self.artifact = artifact


@dataclass
class FunctionRecord:
    """Everything the sweep learned about one function."""

    function: str
    trivial: str = ""
    detected: list = field(default_factory=list)
    optimal_size: int = None
    synthesized_sizes: dict = field(default_factory=dict)
    ppol_cover_size: int = None
    pol_cover_size: int = None
    tsvnd_size: int = None
    compiled_size: int = None
    checks: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "function": self.function,
            "trivial": self.trivial,
            "detected": list(self.detected),
            "optimal_size": self.optimal_size,
            "synthesized_sizes": dict(self.synthesized_sizes),
            "ppol_cover_size": self.ppol_cover_size,
            "pol_cover_size": self.pol_cover_size,
            "tsvnd_size": self.tsvnd_size,
            "compiled_size": self.compiled_size,
            "checks": dict(self.checks),
            "counterexamples": dict(self.counterexamples),
        }


@dataclass
class SweepReport:
    arity: int
    checks: tuple
    max_size: int
    records: list = field(default_factory=list)

    def summary(self):
        """Per check: how many functions passed, failed or were not applicable."""
        counts = {}
        for check in self.checks:
            outcomes = [record.checks.get(check) for record in self.records]
            counts[check] = {
                PASS: outcomes.count(PASS),
                FAIL: outcomes.count(FAIL),
                NOT_APPLICABLE: outcomes.count(NOT_APPLICABLE),
            }
        return counts

    @property
    def all_passed(self):
        return all(outcome != FAIL for record in self.records for outcome in record.checks.values())

    def failures(self):
        return [record for record in self.records if FAIL in record.checks.values()]

    def to_dict(self):
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "arity": self.arity,
            "checks": list(self.checks),
            "max_size": self.max_size,
            "summary": self.summary(),
            "all_passed": self.all_passed,
            "records": [record.to_dict() for record in self.records],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# ============================================================================
# CHECKS
# ============================================================================

def _check_synthesis(table, record, _optimal):
    ops = detect_nontrivial_polymorphisms(table)
    if not ops:
        return NOT_APPLICABLE
    expected = BoundaryBits.from_table(table)
    bound = synthesis_size_bound(table.arity)
    for op in ops:
        program = synthesize_from_polymorphism(table, op)
        record.synthesized_sizes[op.value] = program.size
        if not computes(program, table):
            raise _CheckFailed(f"{op.value} construction does not compute f", format_program(program))
        if program.size > bound:
            raise _CheckFailed(f"{op.value} construction uses {program.size} > {bound} gates", format_program(program))
        if boundary_bits_of_program(program) != expected:
            raise _CheckFailed(f"{op.value} construction changes the boundary bits", format_program(program))
    return PASS


def _optimal_finder(max_size):
    """Memoized oracle so s4 and s5 share one search per function."""
    found = {}

    def optimal(table, record):
        if table.bits not in found:
            found[table.bits] = optimal_circuit(table, max_size)
        program = found[table.bits]
        if program is None:
            raise _CheckFailed(f"no circuit of size <= {max_size} found")
        record.optimal_size = program.size
        return program

    return optimal


def _check_cover_equality(table, record, optimal):
    program = optimal(table, record)
    cover = cover_from_circuit(program, table)
    record.ppol_cover_size = cover.size
    valid, witness = verify_cover(cover)
    if not valid:
        raise _CheckFailed("optimal circuit's gates do not cover pPol̄(f•)", format_witness(witness))
    rebuilt = circuit_from_cover(cover)
    if not computes(rebuilt, table):
        raise _CheckFailed("circuit rebuilt from the cover does not compute f", format_program(rebuilt))
    if rebuilt.size != program.size:
        raise _CheckFailed(
            f"rebuilt circuit has {rebuilt.size} gates, optimal has {program.size}", format_program(rebuilt)
        )
    return PASS


def _check_tsvnd(table, record, optimal):
    program = optimal(table, record)
    cover = as_pol_cover(cover_from_circuit(program, table))
    record.pol_cover_size = cover.size
    valid, witness = verify_cover(cover)
    if not valid:
        raise _CheckFailed("optimal circuit's gates do not cover Pol̄(f•)", format_witness(witness))

    circuit = tsvnd_from_pol_cover(cover)
    record.tsvnd_size = circuit.size
    valid, report = validate_tsvnd(circuit, table)
    if not valid:
        raise _CheckFailed(f"constraint circuit fails validation: {report.to_dict()}", format_tsvnd(circuit))

    compiled = compile_constraints(circuit)
    record.compiled_size = compiled.size
    valid, report = validate_tsvnd(compiled, table)
    if not valid:
        raise _CheckFailed(f"compiled circuit fails validation: {report.to_dict()}", format_tsvnd(compiled))
    bound = tsvnd_size_bound(cover.size)
    if compiled.size > bound:
        raise _CheckFailed(f"compiled circuit has {compiled.size} > {bound} gates", format_tsvnd(compiled))

    for source in (circuit, compiled):
        back = pol_cover_from_tsvnd(source, table)
        valid, witness = verify_cover(back)
        if not valid:
            raise _CheckFailed("cover read off the TSVND circuit is not a Pol cover", format_witness(witness))
        if back.size != source.size:
            raise _CheckFailed(
                f"cover read off the TSVND circuit has {back.size} gates, circuit has {source.size}",
                format_cover(back),
            )
    return PASS


_CHECKS = {
    "s3": _check_synthesis,
    "s4": _check_cover_equality,
    "s5": _check_tsvnd,
}


# ============================================================================
# SWEEP
# ============================================================================

def _validate_request(n, checks):
    unknown = [c for c in checks if c not in SWEEP_CHECKS]
    if unknown:
        raise InfeasibleSweepError(f"unknown checks {unknown} (expected a subset of {list(SWEEP_CHECKS)})")
    if not checks:
        raise InfeasibleSweepError("no checks requested")
    for check in checks:
        if not 1 <= n <= SWEEP_MAX_ARITY[check]:
            raise InfeasibleSweepError(f"check {check} supports 1 <= n <= {SWEEP_MAX_ARITY[check]}, got n={n}")


def run_theorem_sweep(n, checks=SWEEP_CHECKS, max_size=DEFAULT_MAX_SIZE):
    """
    Run the requested checks on every function in B_n.

    Args:
        n: Arity to sweep
        checks: Subset of ("s3", "s4", "s5")
        max_size: Gate budget handed to the optimal-circuit oracle

    Returns:
        SweepReport: one record per function, in output-string order
    """
    checks = tuple(dict.fromkeys(checks))
    _validate_request(n, checks)
    checks = tuple(c for c in SWEEP_CHECKS if c in checks)
    optimal = _optimal_finder(max_size)
    report = SweepReport(n, checks, max_size)
    for table in all_tables(n):
        record = FunctionRecord(
            function=table.bits,
            trivial=str(classify_trivial(table)),
            detected=[op.value for op in detect_nontrivial_polymorphisms(table)],
        )
        for check in checks:
            try:
                record.checks[check] = _CHECKS[check](table, record, optimal)
            except _CheckFailed as failure:
                record.checks[check] = FAIL
                record.counterexamples[check] = f"{failure}\n{failure.artifact}".rstrip()
            except WorkbenchError as error:
                record.checks[check] = FAIL
                record.counterexamples[check] = f"{type(error).__name__}: {error}"
            if record.checks[check] == FAIL:
                logger.warning("%s failed %s: %s", table.bits, check, record.counterexamples[check].splitlines()[0])
        report.records.append(record)
    logger.info("sweep n=%d %s: %s", n, ",".join(checks), report.summary())
    return report
