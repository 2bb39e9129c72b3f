"""
Total single-valued non-deterministic (TSVND) circuits

A TSVND circuit reads deterministic inputs x and guessed inputs y and answers
0, 1 or quit. It is total when every x has an accepted guess and
single-valued when no x accepts both answers. Circuits come in two bodies:

  program form     a Program over x then y with output wires (valid, value);
                   a single output wire means the circuit never quits
  constraint form  named gate constraints over variables x1..x(n+1), y1..;
                   any violated constraint quits, otherwise the output
                   variable is the answer

The conversions here move between Pol covers, TSVND circuits and ND / coND
circuit pairs.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from circuits import (
    Gate,
    GateKind,
    Program,
    ProgramBuilder,
    Signal,
    column_arrays,
    evaluate_outputs,
)
from config import MAX_TSVND_ENUMERATION_BITS
from covers import Cover, CoverFlavor, CoverGate, as_pol_cover, relevant_columns, verify_cover
from polymorphisms import projection_flip_witness
from truth_table import Column, TruthTable, Witness, WitnessMode, bits_to_index, index_to_bits
from workbench_errors import (
    ArityError,
    FormatError,
    InvalidCoverError,
    InvalidTsvndError,
    MissingResultColumnError,
    NondeterministicMismatchError,
    ProgramStructureError,
    WidthMismatchError,
)

logger = logging.getLogger(__name__)

QUIT = "quit"

# decision_table code for quit
QUIT_CODE = 2


class NondeterministicMode(Enum):
    ND = "nd"        # accepts x iff some guess outputs 1
    COND = "cond"    # rejects x iff some guess outputs 0

    @classmethod
    def parse(cls, name):
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise FormatError(f"unknown mode {name!r} (expected nd or cond)") from None


@dataclass(frozen=True)
class Constraint:
    """A stored gate constraint such as `AND x1 y2 = x3`."""

    kind: GateKind
    inputs: tuple
    output: str

    def __post_init__(self):
        kind = GateKind(self.kind)
        inputs = tuple(self.inputs)
        if len(inputs) != kind.arity:
            raise ProgramStructureError(f"{kind.name} constraint needs {kind.arity} inputs, got {len(inputs)}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "inputs", inputs)

    @property
    def variables(self):
        return self.inputs + (self.output,)

    def holds(self, assignment):
        return self.kind.apply(*(assignment[v] for v in self.inputs)) == assignment[self.output]

    def __str__(self):
        return f"{self.kind.name} {' '.join(self.inputs)} = {self.output}"


def _default_guess_vars(n, m, output_var):
    if output_var == f"x{n + 1}":
        return (output_var,) + tuple(f"y{j}" for j in range(1, m))
    return tuple(f"y{j}" for j in range(1, m + 1))


@dataclass(frozen=True)
class TsvndCircuit:
    """
    A TSVND circuit in program form or constraint form.

    Args:
        arity: n deterministic inputs x1..xn
        guess_count: m non-deterministic bits, x(n+1) included when it is guessed
        program: Program over n + m inputs, outputs (valid, value) or (value,)
        constraints: Constraints over x1..xn and guess_vars
        output_var: Variable answered in constraint form (default x(n+1))
        guess_vars: Names of the guessed variables in y order
        column_names: (name, Column) pairs when built from a cover
    """

    arity: int
    guess_count: int
    program: Program = None
    constraints: tuple = None
    output_var: str = None
    guess_vars: tuple = None
    column_names: tuple = field(default=())

    def __post_init__(self):
        n, m = self.arity, self.guess_count
        if n < 1 or m < 0:
            raise ArityError(f"invalid TSVND arities n={n}, m={m}")
        if (self.program is None) == (self.constraints is None):
            raise ProgramStructureError("a TSVND circuit has exactly one body: a program or constraints")

        if self.program is not None:
            if self.program.arity != n + m:
                raise ProgramStructureError(
                    f"program has {self.program.arity} inputs, expected n + m = {n + m}"
                )
            if len(self.program.outputs) not in (1, 2):
                raise ProgramStructureError("program-form TSVND needs outputs (valid, value) or (value)")
            if self.guess_vars is None:
                object.__setattr__(self, "guess_vars", tuple(f"y{j}" for j in range(1, m + 1)))
            return

        output_var = self.output_var or f"x{n + 1}"
        guess_vars = tuple(self.guess_vars) if self.guess_vars is not None else _default_guess_vars(n, m, output_var)
        if len(guess_vars) != m:
            raise ProgramStructureError(f"{len(guess_vars)} guessed variables named, m = {m}")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "output_var", output_var)
        object.__setattr__(self, "guess_vars", guess_vars)
        object.__setattr__(self, "column_names", tuple(self.column_names))
        known = set(self.variables)
        if output_var not in known:
            raise ProgramStructureError(f"output variable {output_var} is neither an input nor guessed")
        for constraint in self.constraints:
            unknown = [v for v in constraint.variables if v not in known]
            if unknown:
                raise ProgramStructureError(f"constraint '{constraint}' uses unknown variables {unknown}")

    @property
    def is_constraint_form(self):
        return self.constraints is not None

    @property
    def variables(self):
        return tuple(f"x{i}" for i in range(1, self.arity + 1)) + tuple(self.guess_vars)

    @property
    def size(self):
        if self.is_constraint_form:
            return len(self.constraints)
        return self.program.size

    @property
    def always_valid(self):
        return not self.is_constraint_form and len(self.program.outputs) == 1

    @property
    def valid_wire(self):
        if self.is_constraint_form or self.always_valid:
            return None
        return self.program.outputs[0]

    @property
    def value_wire(self):
        if self.is_constraint_form:
            return None
        return self.program.outputs[-1]

    def column_of(self, name):
        for candidate, column in self.column_names:
            if candidate == name:
                return column
        raise KeyError(name)


@dataclass(frozen=True)
class NondeterministicCircuit:
    """A plain ND (or coND) circuit: one output wire over x then y."""

    program: Program
    arity: int
    guess_count: int
    mode: NondeterministicMode = NondeterministicMode.ND

    def __post_init__(self):
        object.__setattr__(self, "mode", NondeterministicMode(self.mode))
        if self.program.arity != self.arity + self.guess_count:
            raise ProgramStructureError(
                f"program has {self.program.arity} inputs, expected n + m = {self.arity + self.guess_count}"
            )

    @property
    def size(self):
        return self.program.size

    def outputs_by_guess(self):
        """(2^n, 2^m) matrix of the output bit for every (x, y)."""
        _check_enumerable(self.arity, self.guess_count)
        values = column_arrays(self.program)[self.program.output - 1]
        return values.reshape(2 ** self.arity, 2 ** self.guess_count)

    def decided_function(self):
        outputs = self.outputs_by_guess()
        if self.mode is NondeterministicMode.ND:
            decided = np.any(outputs == 1, axis=1)
        else:
            decided = ~np.any(outputs == 0, axis=1)
        return TruthTable(self.arity, tuple(int(b) for b in decided))


def _check_enumerable(n, m):
    if n + m > MAX_TSVND_ENUMERATION_BITS:
        raise ArityError(f"n + m = {n + m} exceeds the enumeration limit of {MAX_TSVND_ENUMERATION_BITS}")


def wrap_deterministic(program):
    """A deterministic single-output program as a TSVND circuit with m = 0."""
    return TsvndCircuit(program.arity, 0, program=program.with_outputs((program.output,)))


# ============================================================================
# SEMANTICS
# ============================================================================

def tsvnd_evaluate(circuit, x, y):
    """
    C(x, y) for one deterministic input and one guess.

    Returns:
        0, 1 or QUIT
    """
    x = tuple(int(b) for b in x)
    y = tuple(int(b) for b in y)
    if len(x) != circuit.arity or len(y) != circuit.guess_count:
        raise WidthMismatchError(
            f"expected {circuit.arity} + {circuit.guess_count} bits, got {len(x)} + {len(y)}"
        )
    if circuit.is_constraint_form:
        assignment = dict(zip(circuit.variables, x + y))
        if all(constraint.holds(assignment) for constraint in circuit.constraints):
            return assignment[circuit.output_var]
        return QUIT
    outputs = evaluate_outputs(circuit.program, x + y)
    if len(outputs) == 1:
        return outputs[0]
    valid, value = outputs
    return value if valid else QUIT


def decision_table(circuit):
    """
    Answers for every (x, y) as an int8 matrix of shape (2^n, 2^m).

    Entries are 0, 1 or QUIT_CODE; x indexes rows and y columns, both read
    most significant bit first.
    """
    n, m = circuit.arity, circuit.guess_count
    _check_enumerable(n, m)
    if circuit.is_constraint_form:
        width = n + m
        codes = np.arange(2 ** width, dtype=np.int64)
        bits = {
            name: ((codes >> (width - 1 - j)) & 1).astype(np.uint8)
            for j, name in enumerate(circuit.variables)
        }
        ok = np.ones(2 ** width, dtype=bool)
        for constraint in circuit.constraints:
            ok &= constraint.kind.apply(*(bits[v] for v in constraint.inputs)) == bits[constraint.output]
        answers = np.where(ok, bits[circuit.output_var], QUIT_CODE)
    else:
        wires = column_arrays(circuit.program)
        value = wires[circuit.value_wire - 1]
        if circuit.always_valid:
            answers = value
        else:
            answers = np.where(wires[circuit.valid_wire - 1] == 1, value, QUIT_CODE)
    return answers.astype(np.int8).reshape(2 ** n, 2 ** m)


@dataclass(frozen=True)
class TsvndReport:
    """Outcome of validate_tsvnd, with every offending input listed."""

    total: bool
    single_valued: bool
    computes_f: bool
    unaccepted: tuple = ()
    conflicting: tuple = ()
    mismatched: tuple = ()
    decided: tuple = ()

    def to_dict(self):
        def bits(points):
            return ["".join(map(str, x)) for x in points]

        return {
            "total": self.total,
            "single_valued": self.single_valued,
            "computes_f": self.computes_f,
            "unaccepted": bits(self.unaccepted),
            "conflicting": bits(self.conflicting),
            "mismatched": bits(self.mismatched),
            "decided": ["undecided" if d is None else d for d in self.decided],
        }


def validate_tsvnd(circuit, table=None):
    """
    Enumerate all 2^(n+m) assignments and check totality and single-valuedness.

    Args:
        circuit: TsvndCircuit
        table: TruthTable of f, or None to check only that some function is decided

    Returns:
        tuple: (computes_f, TsvndReport)
    """
    if table is not None and table.arity != circuit.arity:
        raise WidthMismatchError(f"circuit has {circuit.arity} inputs, table has {table.arity}")
    answers = decision_table(circuit)
    n = circuit.arity
    accepts_one = np.any(answers == 1, axis=1)
    accepts_zero = np.any(answers == 0, axis=1)

    unaccepted = tuple(index_to_bits(int(r), n) for r in np.flatnonzero(~accepts_one & ~accepts_zero))
    conflicting = tuple(index_to_bits(int(r), n) for r in np.flatnonzero(accepts_one & accepts_zero))
    decided = tuple(
        1 if one and not zero else 0 if zero and not one else None
        for one, zero in zip(accepts_one, accepts_zero)
    )
    mismatched = ()
    if table is not None:
        mismatched = tuple(
            index_to_bits(r, n) for r, d in enumerate(decided)
            if d is not None and d != table.outputs[r]
        )
    total = not unaccepted
    single_valued = not conflicting
    report = TsvndReport(
        total=total,
        single_valued=single_valued,
        computes_f=total and single_valued and not mismatched,
        unaccepted=unaccepted,
        conflicting=conflicting,
        mismatched=mismatched,
        decided=decided,
    )
    if not report.computes_f:
        logger.info(
            "TSVND check failed: %d unaccepted, %d conflicting, %d mismatched",
            len(unaccepted), len(conflicting), len(mismatched),
        )
    return report.computes_f, report


def _require_valid(circuit, table=None):
    valid, report = validate_tsvnd(circuit, table)
    if not valid:
        raise InvalidTsvndError("circuit is not a valid TSVND circuit for the given function", report)
    return report


# ============================================================================
# ND / coND CONVERSIONS
# ============================================================================

def _shifted(gates, mapping, offset, first_gate_ref):
    """Copy gates, remapping input and guess refs and shifting gate refs."""
    def ref(r):
        return mapping[r] if r < first_gate_ref else r + offset

    return [Gate(gate.kind, tuple(ref(r) for r in gate.inputs)) for gate in gates], ref


def merge_nd_cond(c1, c2, table=None):
    """
    One TSVND circuit from an ND circuit and a coND circuit deciding the same f.

    The guesses are concatenated (y of c1 then y of c2); valid = o1 or not o2
    and value = o1, adding two gates.
    """
    if c1.mode is not NondeterministicMode.ND or c2.mode is not NondeterministicMode.COND:
        raise NondeterministicMismatchError("merge needs an ND circuit and a coND circuit, in that order")
    if c1.arity != c2.arity:
        raise NondeterministicMismatchError(f"ND circuit has {c1.arity} inputs, coND has {c2.arity}")
    f1, f2 = c1.decided_function(), c2.decided_function()
    if f1 != f2:
        x = next(index_to_bits(r, c1.arity) for r in range(f1.row_count) if f1.outputs[r] != f2.outputs[r])
        raise NondeterministicMismatchError(f"ND decides {f1}, coND decides {f2}", x)
    if table is not None and f1 != table:
        x = next(index_to_bits(r, c1.arity) for r in range(f1.row_count) if f1.outputs[r] != table.outputs[r])
        raise NondeterministicMismatchError(f"circuits decide {f1}, not {table}", x)

    n, m1, m2 = c1.arity, c1.guess_count, c2.guess_count
    inputs = n + m1 + m2
    first = {r: r for r in range(1, n + m1 + 1)}
    gates, ref1 = _shifted(c1.program.gates, first, m2, n + m1 + 1)
    second = {r: r for r in range(1, n + 1)}
    second.update({n + j: n + m1 + j for j in range(1, m2 + 1)})
    more, ref2 = _shifted(c2.program.gates, second, m1 + len(gates), n + m2 + 1)
    gates.extend(more)

    o1, o2 = ref1(c1.program.output), ref2(c2.program.output)
    gates.append(Gate(GateKind.NOT, (o2,)))
    gates.append(Gate(GateKind.OR, (o1, inputs + len(gates))))
    program = Program(inputs, tuple(gates), (inputs + len(gates), o1))
    logger.debug("merged ND (%d gates) and coND (%d gates) into %d gates", c1.size, c2.size, program.size)
    return TsvndCircuit(n, m1 + m2, program=program)


def split_tsvnd(circuit, table=None):
    """
    ND and coND circuits deciding the same function as a valid TSVND circuit.

    quit becomes 0 in the ND half (valid and value, one extra gate) and 1 in
    the coND half (not valid or value, two extra gates). A circuit that never
    quits yields its value program for both halves.

    Returns:
        tuple: (ND NondeterministicCircuit, coND NondeterministicCircuit)
    """
    _require_valid(circuit, table)
    if circuit.is_constraint_form:
        circuit = compile_constraints(circuit)
    n, m, program = circuit.arity, circuit.guess_count, circuit.program
    if circuit.always_valid:
        return (
            NondeterministicCircuit(program, n, m, NondeterministicMode.ND),
            NondeterministicCircuit(program, n, m, NondeterministicMode.COND),
        )

    t = program.wire_count
    valid, value = circuit.valid_wire, circuit.value_wire
    nd = Program(program.arity, program.gates + (Gate(GateKind.AND, (valid, value)),))
    cond = Program(
        program.arity,
        program.gates + (Gate(GateKind.NOT, (valid,)), Gate(GateKind.OR, (t + 1, value))),
    )
    return (
        NondeterministicCircuit(nd, n, m, NondeterministicMode.ND),
        NondeterministicCircuit(cond, n, m, NondeterministicMode.COND),
    )


# ============================================================================
# CONSTRAINT FORM
# ============================================================================

def compile_constraints(circuit):
    """
    Program form of a constraint-form circuit.

    Each constraint becomes its gate over the variable inputs plus an XOR
    against the constrained variable (five gates); the violations are ORed
    and valid is the negation. At most 6 * |constraints| + 3 gates. With no
    effective constraints the result never quits.
    """
    if not circuit.is_constraint_form:
        return circuit
    n, m = circuit.arity, circuit.guess_count
    refs = {name: i for i, name in enumerate(circuit.variables, start=1)}
    builder = ProgramBuilder(n + m)

    violations = []
    for constraint in circuit.constraints:
        gate = Signal(builder.gate(constraint.kind, *(refs[v] for v in constraint.inputs)))
        violations.append(builder.xor(gate, Signal(refs[constraint.output])))

    while len(violations) > 1:
        paired = [builder.or_(a, b) for a, b in zip(violations[::2], violations[1::2])]
        if len(violations) % 2:
            paired.append(violations[-1])
        violations = paired
    any_violation = violations[0] if violations else Signal(0)

    value = Signal(refs[circuit.output_var])
    if any_violation.is_constant and not any_violation.inverted:
        program = builder.build([value])
    else:
        program = builder.build([~any_violation, value])
    logger.debug("compiled %d constraints into %d gates", circuit.size, program.size)
    return TsvndCircuit(
        n, m,
        program=program,
        guess_vars=circuit.guess_vars,
        column_names=circuit.column_names,
    )


@dataclass(frozen=True)
class WitnessTable:
    """For each x in row order, the lexicographically smallest accepted guess."""

    arity: int
    guess_count: int
    rows: tuple

    def guesses(self):
        return tuple(y for _, y in self.rows)

    def extended_rows(self):
        """Rows (x, y_x) as full n + m bit tuples."""
        return tuple(x + y for x, y in self.rows)


def witness_table(circuit):
    answers = decision_table(circuit)
    n, m = circuit.arity, circuit.guess_count
    rows = []
    for r in range(2 ** n):
        accepted = np.flatnonzero(answers[r] != QUIT_CODE)
        if len(accepted) == 0:
            x = index_to_bits(r, n)
            raise InvalidTsvndError(f"no guess is accepted at x={x}")
        rows.append((index_to_bits(r, n), index_to_bits(int(accepted[0]), m)))
    return WitnessTable(n, m, tuple(rows))


def _restricted_rows(fy):
    return np.array([bits_to_index(row) for row in fy.extended_rows()], dtype=np.int64)


def pol_cover_from_tsvnd(circuit, table):
    """
    Pol cover read off a TSVND circuit computing f.

    Every x is paired with its smallest accepted guess; restricted to those
    2^n rows, each gate (or stored constraint) becomes a gate matrix, and
    the x inputs restrict to the input columns of f•.

    A program-form circuit that can quit gets two more gates, NOT x1 and
    x1 OR NOT x1, when its bare read-off misses a witness that sends the
    all-ones valid column to 0.

    Returns:
        Cover: pol flavor, one gate per gate or constraint of the circuit (plus the pin)
    """
    _require_valid(circuit, table)
    fy = witness_table(circuit)
    rows = _restricted_rows(fy)
    n, m = circuit.arity, circuit.guess_count

    if circuit.is_constraint_form:
        width = n + m
        columns = {
            name: Column.from_array((rows >> (width - 1 - j)) & 1)
            for j, name in enumerate(circuit.variables)
        }
        gates = tuple(
            CoverGate(c.kind, tuple(columns[v] for v in c.inputs), columns[c.output])
            for c in circuit.constraints
        )
    else:
        wires = column_arrays(circuit.program)[:, rows]
        program = circuit.program
        gates = tuple(
            CoverGate(
                gate.kind,
                tuple(Column.from_array(wires[ref - 1]) for ref in gate.inputs),
                Column.from_array(wires[program.arity + position]),
            )
            for position, gate in enumerate(program.gates)
        )
        cover = Cover(table, gates, CoverFlavor.POL)
        if not circuit.always_valid and not verify_cover(cover)[0]:
            gates += _all_ones_pin(table)
            logger.debug("pinned the valid column of %s with two gates", table.bits)
    return Cover(table, gates, CoverFlavor.POL)


def _all_ones_pin(table):
    """x1, NOT x1 and their OR: a consistent witness must send the all-ones column to 1."""
    x1 = table.input_columns()[0]
    ones = Column((1,) * table.row_count)
    return (
        CoverGate(GateKind.NOT, (x1,), x1.complement()),
        CoverGate(GateKind.OR, (x1, x1.complement()), ones),
    )


def tsvnd_from_pol_cover(cover, verify=True):
    """
    Constraint-form TSVND circuit storing each cover gate as a named constraint.

    f•'s columns are named x1..x(n+1) and every other distinct column y1, y2,
    ... in first-appearance order; identical columns share a name. x(n+1) is
    guessed along with the y variables unless the result column is itself an
    input column x_i, which then serves as the output variable.

    Args:
        cover: Cover (a pPol cover is read as a Pol cover)
        verify: Check the cover first and raise InvalidCoverError if it fails

    Returns:
        TsvndCircuit: constraint form, size = cover size
    """
    pol = as_pol_cover(cover)
    if verify:
        valid, witness = verify_cover(pol)
        if not valid:
            raise InvalidCoverError(f"cover does not cover Pol̄ of {cover.table}: misses {witness}", witness)

    table = cover.table
    n = table.arity
    result = table.result_column
    names = {column: f"x{i}" for i, column in enumerate(table.input_columns(), start=1)}
    gate_cols = {c for gate in cover.gates for c in gate.columns}
    if result in names:
        output_var = names[result]
        guess_vars = []
    elif result in gate_cols:
        output_var = f"x{n + 1}"
        names[result] = output_var
        guess_vars = [output_var]
    else:
        witness = projection_flip_witness(table, row=0, columns=relevant_columns(cover))
        raise MissingResultColumnError(f"no cover gate touches the result column {result}", witness=witness)

    y_count = 0
    for column in relevant_columns(cover):
        if column not in names:
            y_count += 1
            names[column] = f"y{y_count}"
            guess_vars.append(names[column])

    constraints = tuple(
        Constraint(gate.kind, tuple(names[c] for c in gate.inputs), names[gate.output])
        for gate in cover.gates
    )
    column_names = tuple((name, column) for column, name in names.items())
    circuit = TsvndCircuit(
        n,
        len(guess_vars),
        constraints=constraints,
        output_var=output_var,
        guess_vars=tuple(guess_vars),
        column_names=column_names,
    )
    logger.debug("cover of size %d stored as %d constraints, m=%d", cover.size, circuit.size, circuit.guess_count)
    return circuit


def witness_from_assignment(circuit, x, y):
    """
    The total witness an assignment denotes on the named columns.

    For a circuit built by tsvnd_from_pol_cover, an accepted assignment whose
    answer differs from f(x) maps to an anti-polymorphism no cover gate catches.
    """
    if not circuit.column_names:
        raise ProgramStructureError("circuit has no column names; build it with tsvnd_from_pol_cover")
    x = tuple(int(b) for b in x)
    y = tuple(int(b) for b in y)
    if len(x) != circuit.arity or len(y) != circuit.guess_count:
        raise WidthMismatchError(
            f"expected {circuit.arity} + {circuit.guess_count} bits, got {len(x)} + {len(y)}"
        )
    assignment = dict(zip(circuit.variables, x + y))
    return Witness({column: assignment[name] for name, column in circuit.column_names}, WitnessMode.TOTAL)
