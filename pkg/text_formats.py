"""
Text formats read and written by the workbench

Every artifact is line oriented: a `key=value` header line followed by a
body. Blank lines and lines starting with '#' are ignored, and parse errors
carry the 1-based line number of the offending line.

  truth table   n=2 / 0001            (extra output lines make a multi-output table)
  program       n=2 / g3 = AND g1 g2 / output g3
  cover         n=2 flavor=ppol table=0001 / AND 0011 0101 0001
  witness       witness mode=partial / 0011 -> 1 / 0001 -> undef
  TSVND         n=2 m=1 / AND x1 x2 = x3        (or program lines with outputs)
  ND circuit    n=2 m=1 mode=nd / program lines
"""

import re
from contextlib import contextmanager

from circuits import Gate, GateKind, Program
from covers import Cover, CoverFlavor, CoverGate
from synthesis import MultiTable
from truth_table import UNDEF, Column, TruthTable, Witness, WitnessMode
from tsvnd import Constraint, NondeterministicCircuit, NondeterministicMode, TsvndCircuit
from workbench_errors import FormatError, WorkbenchError

_GATE_LINE = re.compile(r"^g(\d+)\s*=\s*(\w+)\s+g(\d+)(?:\s+g(\d+))?$", re.IGNORECASE)
_OUTPUT_LINE = re.compile(r"^outputs?((?:\s+g\d+)+)$", re.IGNORECASE)
_CONSTRAINT_LINE = re.compile(r"^(\w+)\s+([xy]\d+)(?:\s+([xy]\d+))?\s*=\s*([xy]\d+)$", re.IGNORECASE)
_OUTPUT_VAR_LINE = re.compile(r"^output\s+([xy]\d+)$", re.IGNORECASE)
_WITNESS_LINE = re.compile(r"^([01]+)\s*->\s*(\S+)$")


def _content_lines(text):
    """(line number, stripped line) for every meaningful line."""
    return [
        (number, line.strip())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]


def _parse_header(number, line, required, optional=()):
    fields = {}
    for token in line.split():
        if "=" not in token:
            raise FormatError(f"expected key=value in header, got {token!r}", number)
        key, value = token.split("=", 1)
        fields[key.strip().lower()] = value.strip()
    missing = [key for key in required if key not in fields]
    if missing:
        raise FormatError(f"header is missing {', '.join(missing)}", number)
    unknown = [key for key in fields if key not in required and key not in optional]
    if unknown:
        raise FormatError(f"unexpected header fields {', '.join(unknown)}", number)
    return fields


def _int_field(fields, key, number):
    try:
        value = int(fields[key])
    except ValueError:
        raise FormatError(f"{key} must be an integer, got {fields[key]!r}", number) from None
    if value < 0:
        raise FormatError(f"{key} must not be negative", number)
    return value


@contextmanager
def _at_line(number):
    """Report domain errors raised while building an artifact as FormatErrors at `number`."""
    try:
        yield
    except FormatError as exc:
        if exc.line is not None or number is None:
            raise
        raise FormatError(str(exc), number) from exc
    except WorkbenchError as exc:
        raise FormatError(str(exc), number) from exc


# ============================================================================
# TRUTH TABLES
# ============================================================================

def parse_table(text):
    """A TruthTable, or a MultiTable when the body has several output lines."""
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty truth table")
    number, header = lines[0]
    n = _int_field(_parse_header(number, header, ("n",)), "n", number)
    body = lines[1:]
    if not body:
        raise FormatError("truth table has no output line", number)
    columns = []
    for number, line in body:
        with _at_line(number):
            if len(line) != 2 ** n:
                raise FormatError(f"n={n} needs {2 ** n} output bits, got {len(line)}", number)
            columns.append(TruthTable.from_bits(line, n))
    if len(columns) == 1:
        return columns[0]
    return MultiTable.from_tables(columns)


def format_table(table):
    if isinstance(table, MultiTable):
        body = ["".join(map(str, column)) for column in table.outputs]
    else:
        body = [table.bits]
    return "\n".join([f"n={table.arity}", *body]) + "\n"


# ============================================================================
# PROGRAMS
# ============================================================================

def _parse_gate_lines(lines, arity):
    gates = []
    outputs = None
    for number, line in lines:
        match = _GATE_LINE.match(line)
        if match:
            if outputs is not None:
                raise FormatError("gate after the output line", number)
            index, kind, a, b = match.groups()
            expected = arity + len(gates) + 1
            if int(index) != expected:
                raise FormatError(f"expected gate g{expected}, got g{index}", number)
            refs = tuple(int(r) for r in (a, b) if r is not None)
            with _at_line(number):
                gates.append(Gate(GateKind.parse(kind), refs))
            for ref in refs:
                if not 1 <= ref < expected:
                    raise FormatError(f"g{index} reads g{ref}, which does not precede it", number)
            continue
        match = _OUTPUT_LINE.match(line)
        if match:
            if outputs is not None:
                raise FormatError("more than one output line", number)
            outputs = tuple(int(token[1:]) for token in match.group(1).split())
            continue
        raise FormatError(f"cannot parse {line!r}", number)
    last = lines[-1][0] if lines else None
    with _at_line(last):
        return Program(arity, tuple(gates), outputs)


def _format_gate_lines(program):
    lines = []
    for position, gate in enumerate(program.gates):
        refs = " ".join(f"g{ref}" for ref in gate.inputs)
        lines.append(f"g{program.arity + position + 1} = {gate.kind.name} {refs}")
    keyword = "output" if len(program.outputs) == 1 else "outputs"
    lines.append(f"{keyword} " + " ".join(f"g{ref}" for ref in program.outputs))
    return lines


def parse_program(text):
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty program")
    number, header = lines[0]
    n = _int_field(_parse_header(number, header, ("n",)), "n", number)
    if n < 1:
        raise FormatError("a program needs n >= 1", number)
    return _parse_gate_lines(lines[1:], n)


def format_program(program):
    return "\n".join([f"n={program.arity}", *_format_gate_lines(program)]) + "\n"


# ============================================================================
# COVERS
# ============================================================================

def parse_cover(text, table=None):
    """
    A cover; the header's table= field wins over the `table` argument.

    Gate lines are `AND <in> <in> <out>`, `OR ...` or `NOT <in> <out>`, each
    column a 2^n-character bit string.
    """
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty cover")
    number, header = lines[0]
    fields = _parse_header(number, header, ("n",), ("flavor", "table"))
    n = _int_field(fields, "n", number)
    with _at_line(number):
        flavor = CoverFlavor.parse(fields.get("flavor", "ppol"))
        if "table" in fields:
            table = TruthTable.from_bits(fields["table"], n)
    if table is None:
        raise FormatError("cover header has no table= field and no table was given", number)
    if table.arity != n:
        raise FormatError(f"cover is for n={n}, table has n={table.arity}", number)

    gates = []
    for number, line in lines[1:]:
        tokens = line.split()
        with _at_line(number):
            kind = GateKind.parse(tokens[0])
            if len(tokens) != kind.arity + 2:
                raise FormatError(f"{kind.name} needs {kind.arity + 1} columns, got {len(tokens) - 1}", number)
            columns = [Column(token) for token in tokens[1:]]
            if any(c.width != 2 ** n for c in columns):
                raise FormatError(f"columns must have {2 ** n} bits", number)
            gates.append(CoverGate(kind, tuple(columns[:-1]), columns[-1]))
    return Cover(table, tuple(gates), flavor)


def format_cover(cover):
    header = f"n={cover.table.arity} flavor={cover.flavor.value} table={cover.table.bits}"
    return "\n".join([header, *(str(gate) for gate in cover.gates)]) + "\n"


# ============================================================================
# WITNESSES
# ============================================================================

def parse_witness(text):
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty witness")
    number, header = lines[0]
    tokens = header.split()
    if not tokens or tokens[0].lower() != "witness":
        raise FormatError("witness must start with 'witness mode=<total|partial>'", number)
    fields = _parse_header(number, " ".join(tokens[1:]), (), ("mode",))
    try:
        mode = WitnessMode(fields.get("mode", "total").lower())
    except ValueError:
        raise FormatError(f"unknown witness mode {fields['mode']!r}", number) from None
    assignment = {}
    for number, line in lines[1:]:
        match = _WITNESS_LINE.match(line)
        if not match:
            raise FormatError(f"expected '<bits> -> <0|1|undef>', got {line!r}", number)
        column, value = match.groups()
        if Column(column) in assignment:
            raise FormatError(f"column {column} assigned twice", number)
        assignment[Column(column)] = value
    with _at_line(number):
        return Witness(assignment, mode)


def format_witness(witness):
    lines = [f"witness mode={witness.mode.value}"]
    for column, value in witness.assignment.items():
        lines.append(f"{column} -> {'undef' if value is UNDEF else value}")
    return "\n".join(lines) + "\n"


# ============================================================================
# TSVND AND ND CIRCUITS
# ============================================================================

def parse_tsvnd(text):
    """A TSVND circuit; constraint lines or program lines after an `n= m=` header."""
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty TSVND circuit")
    number, header = lines[0]
    fields = _parse_header(number, header, ("n", "m"))
    n, m = _int_field(fields, "n", number), _int_field(fields, "m", number)
    body = lines[1:]
    if body and (_GATE_LINE.match(body[0][1]) or _OUTPUT_LINE.match(body[0][1])):
        program = _parse_gate_lines(body, n + m)
        with _at_line(number):
            return TsvndCircuit(n, m, program=program)

    constraints = []
    output_var = None
    for number, line in body:
        match = _OUTPUT_VAR_LINE.match(line)
        if match:
            output_var = match.group(1).lower()
            continue
        match = _CONSTRAINT_LINE.match(line)
        if not match:
            raise FormatError(f"cannot parse constraint {line!r}", number)
        kind, a, b, out = match.groups()
        inputs = tuple(v.lower() for v in (a, b) if v is not None)
        with _at_line(number):
            constraints.append(Constraint(GateKind.parse(kind), inputs, out.lower()))
    with _at_line(number):
        return TsvndCircuit(n, m, constraints=tuple(constraints), output_var=output_var)


def format_tsvnd(circuit):
    header = f"n={circuit.arity} m={circuit.guess_count}"
    if not circuit.is_constraint_form:
        return "\n".join([header, *_format_gate_lines(circuit.program)]) + "\n"
    lines = [header, *(str(c) for c in circuit.constraints)]
    if circuit.output_var != f"x{circuit.arity + 1}":
        lines.append(f"output {circuit.output_var}")
    return "\n".join(lines) + "\n"


def parse_nd(text):
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty ND circuit")
    number, header = lines[0]
    fields = _parse_header(number, header, ("n", "m", "mode"))
    n, m = _int_field(fields, "n", number), _int_field(fields, "m", number)
    with _at_line(number):
        mode = NondeterministicMode.parse(fields["mode"])
    program = _parse_gate_lines(lines[1:], n + m)
    with _at_line(number):
        return NondeterministicCircuit(program, n, m, mode)


def format_nd(circuit):
    header = f"n={circuit.arity} m={circuit.guess_count} mode={circuit.mode.value}"
    return "\n".join([header, *_format_gate_lines(circuit.program)]) + "\n"
