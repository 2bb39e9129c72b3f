"""
Pol and pPol covers for the Polymorphism Circuit Workbench

A cover is an unordered set of gate matrices. It is valid when every
anti-polymorphism of f• is covered by some gate: inconsistent with the
gate, or (pPol) undefined on the gate's output while defined on its inputs.
Only the columns of f• and of the cover's gates can influence either test,
so verification searches assignments to those columns alone.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import networkx as nx
import numpy as np

from circuits import (
    Gate,
    GateKind,
    Program,
    deduplicate_program,
    find_disagreement,
    gate_columns,
)
from config import MAX_DENSE_ARITY
from polymorphisms import dense_anti_polymorphism_mask, projection_flip_witness
from truth_table import (
    UNDEF,
    Column,
    DenseOperation,
    Witness,
    WitnessMode,
    dense_witness_matrix,
)
from workbench_errors import (
    ArityError,
    CircuitMismatchError,
    CycleDetectedError,
    DanglingInputError,
    FormatError,
    GateMatrixError,
    MissingResultColumnError,
    PpolConditionError,
)

logger = logging.getLogger(__name__)


class CoverFlavor(Enum):
    POL = "pol"
    PPOL = "ppol"

    @classmethod
    def parse(cls, name):
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise FormatError(f"unknown cover flavor {name!r} (expected pol or ppol)") from None

    @property
    def witness_domain(self):
        return (0, 1) if self is CoverFlavor.POL else (0, 1, UNDEF)

    @property
    def witness_mode(self):
        return WitnessMode.TOTAL if self is CoverFlavor.POL else WitnessMode.PARTIAL


# ============================================================================
# GATES AND COVERS
# ============================================================================

@dataclass(frozen=True)
class CoverGate:
    """A gate matrix: input columns and an output column equal to the gate applied row by row."""

    kind: GateKind
    inputs: tuple
    output: Column

    def __post_init__(self):
        kind = GateKind(self.kind)
        inputs = tuple(c if isinstance(c, Column) else Column(c) for c in self.inputs)
        output = self.output if isinstance(self.output, Column) else Column(self.output)
        if len(inputs) != kind.arity:
            raise GateMatrixError(f"{kind.name} gate needs {kind.arity} input columns, got {len(inputs)}")
        if any(c.width != output.width for c in inputs):
            raise GateMatrixError("gate columns of different lengths")
        expected = kind.apply(*(c.to_array() for c in inputs))
        if not np.array_equal(expected, output.to_array()):
            raise GateMatrixError(
                f"{kind.name} of {' '.join(map(str, inputs))} is {Column.from_array(expected)}, not {output}"
            )
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "output", output)

    @property
    def columns(self):
        return self.inputs + (self.output,)

    def __str__(self):
        return " ".join([self.kind.name, *map(str, self.columns)])


@dataclass(frozen=True)
class Cover:
    """
    Gates claimed to cover Pol̄(f•) (pol) or pPol̄(f•) (ppol).

    The pPol structural conditions are not enforced here; verify_cover and
    the circuit conversions check them and report every violation.
    """

    table: object
    gates: tuple
    flavor: CoverFlavor = CoverFlavor.PPOL

    def __post_init__(self):
        gates = tuple(self.gates)
        for gate in gates:
            if gate.output.width != self.table.row_count:
                raise GateMatrixError(
                    f"gate {gate} has {gate.output.width} rows; f has {self.table.row_count}"
                )
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "flavor", CoverFlavor(self.flavor))

    @property
    def size(self):
        return len(self.gates)

    def without(self, index):
        return Cover(self.table, self.gates[:index] + self.gates[index + 1:], self.flavor)


def relevant_columns(cover):
    """The distinct columns of f• (first, in order) and of every gate."""
    columns = list(cover.table.columns())
    for gate in cover.gates:
        columns.extend(gate.columns)
    return tuple(dict.fromkeys(columns))


def gate_covers(gate, w, flavor=CoverFlavor.PPOL):
    """
    Does `gate` catch the witness?

    Args:
        gate: CoverGate
        w: Witness assigning the gate's columns (undef allowed for ppol)
        flavor: CoverFlavor deciding the total or partial coverage rule

    Returns:
        bool: pol: w(in) o w(in) != w(out); ppol: inputs defined and (w(out) undef or inconsistent)
    """
    flavor = CoverFlavor(flavor)
    inputs = [w[c] for c in gate.inputs]
    output = w[gate.output]
    if UNDEF in inputs:
        return False
    if output is UNDEF:
        return flavor is CoverFlavor.PPOL
    return gate.kind.apply(*inputs) != output


def check_ppol_conditions(cover):
    """
    Every broken pPol condition as (condition, gate indices), conditions in order.

    (1) two gates output the same column; (2) the result column feeds a
    gate; (3) a gate outputs an input column of f•.
    """
    violations = []
    producers = {}
    for index, gate in enumerate(cover.gates):
        producers.setdefault(gate.output, []).append(index)
    for indices in producers.values():
        if len(indices) > 1:
            violations.append((1, tuple(indices)))

    result = cover.table.result_column
    feeding = tuple(i for i, gate in enumerate(cover.gates) if result in gate.inputs)
    if feeding:
        violations.append((2, feeding))

    inputs = set(cover.table.input_columns())
    shadowing = tuple(i for i, gate in enumerate(cover.gates) if gate.output in inputs)
    if shadowing:
        violations.append((3, shadowing))
    return violations


def _raise_on_ppol_violation(cover):
    violations = check_ppol_conditions(cover)
    if violations:
        condition, gates = violations[0]
        raise PpolConditionError(condition, gates)


# ============================================================================
# VERIFICATION
# ============================================================================

def verify_cover(cover):
    """
    Exact cover verification by depth-first search over relevant columns.

    f• columns range over {0, 1}; every other relevant column over {0, 1}
    (pol) or {0, 1, undef} (ppol). A branch is cut as soon as the anti-
    polymorphism test fails or a fully assigned gate covers it.

    Args:
        cover: Cover to check (ppol covers must satisfy conditions (1)-(3))

    Returns:
        tuple: (is_valid, counterexample Witness or None)
    """
    if cover.flavor is CoverFlavor.PPOL:
        _raise_on_ppol_violation(cover)

    table = cover.table
    columns = relevant_columns(cover)
    position = {column: i for i, column in enumerate(columns)}
    table_columns = table.columns()
    anti_depth = max(position[c] for c in table_columns)

    checks_at = [[] for _ in columns]
    for gate in cover.gates:
        checks_at[max(position[c] for c in gate.columns)].append(gate)

    values = [None] * len(columns)

    def is_anti():
        z = [values[position[c]] for c in table_columns]
        return table.value(z[:-1]) != z[-1]

    def caught(gate):
        inputs = [values[position[c]] for c in gate.inputs]
        output = values[position[gate.output]]
        if UNDEF in inputs:
            return False
        if output is UNDEF:
            return True
        return gate.kind.apply(*inputs) != output

    def search(depth):
        if depth == len(columns):
            return True
        domain = (0, 1) if depth <= anti_depth else cover.flavor.witness_domain
        for value in domain:
            values[depth] = value
            if depth == anti_depth and not is_anti():
                continue
            if any(caught(gate) for gate in checks_at[depth]):
                continue
            if search(depth + 1):
                return True
        return False

    if search(0):
        witness = Witness(dict(zip(columns, values)), cover.flavor.witness_mode)
        logger.info("cover of size %d for %s misses %s", cover.size, table.bits, witness)
        return False, witness
    return True, None


def verify_cover_dense(cover):
    """
    Cross-check against every dense total witness of arity 2^n (n <= 2).

    Coverage uses the total rule whatever the flavor, so this matches
    verify_cover on pol covers.

    Returns:
        tuple: (is_valid, counterexample Witness over the relevant columns or None)
    """
    table = cover.table
    if table.arity > MAX_DENSE_ARITY:
        raise ArityError(f"dense verification is limited to n <= {MAX_DENSE_ARITY}")
    witnesses = dense_witness_matrix(table.arity)
    uncovered = dense_anti_polymorphism_mask(table)
    for gate in cover.gates:
        inputs = [witnesses[:, c.as_index()] for c in gate.inputs]
        uncovered &= gate.kind.apply(*inputs) == witnesses[:, gate.output.as_index()]
    misses = np.flatnonzero(uncovered)
    if len(misses) == 0:
        return True, None
    operation = DenseOperation(2 ** table.arity, tuple(int(b) for b in witnesses[misses[0]]))
    return False, Witness.from_dense(operation, relevant_columns(cover))


def as_pol_cover(cover):
    """The same gates read as a Pol cover; valid whenever the pPol cover is."""
    return Cover(cover.table, cover.gates, CoverFlavor.POL)


# ============================================================================
# CONVERSIONS BETWEEN COVERS AND CIRCUITS
# ============================================================================

def cover_from_circuit(program, table, deduplicate=False):
    """
    The gate matrices of a program computing f, as a pPol cover.

    Args:
        program: Program computing f
        table: TruthTable of f
        deduplicate: Rewire repeated columns and drop dead gates first

    Returns:
        Cover: one CoverGate per program gate
    """
    x = find_disagreement(program, table)
    if x is not None:
        raise CircuitMismatchError(f"program does not compute {table.bits}: wrong at x={x}", x)
    if deduplicate:
        program = deduplicate_program(program)
    columns = gate_columns(program)
    gates = tuple(
        CoverGate(gate.kind, tuple(columns[ref - 1] for ref in gate.inputs), columns[program.arity + position])
        for position, gate in enumerate(program.gates)
    )
    cover = Cover(table, gates, CoverFlavor.PPOL)
    _raise_on_ppol_violation(cover)
    return cover


def _redundant_gates(cover):
    """Gates whose removal leaves a cover that still verifies."""
    redundant = []
    for index in range(cover.size):
        valid, _ = verify_cover(cover.without(index))
        if valid:
            redundant.append(index)
    return tuple(redundant)


def circuit_from_cover(cover):
    """
    Arrange the cover's gates into a program computing f.

    Every gate matrix is internally consistent, so once each input column is
    an f• input or another gate's output and the dependencies are acyclic,
    the program's wires reproduce the gate columns and the gate producing
    the result column computes f.

    Returns:
        Program: size equals the cover size

    Raises:
        PpolConditionError: the gates break condition (1), (2) or (3)
        MissingResultColumnError: no gate outputs the result column
        DanglingInputError: a gate input comes from nowhere
        CycleDetectedError: the gates depend on each other cyclically
    """
    _raise_on_ppol_violation(cover)
    table = cover.table
    n = table.arity
    input_refs = {column: i for i, column in enumerate(table.input_columns(), start=1)}
    producer = {gate.output: index for index, gate in enumerate(cover.gates)}
    result = table.result_column

    if result not in input_refs and result not in producer:
        witness = projection_flip_witness(table, row=0, columns=relevant_columns(cover))
        raise MissingResultColumnError(
            f"no gate outputs the result column {result}",
            witness=witness,
            redundant_gates=_redundant_gates(cover),
        )

    graph = nx.DiGraph()
    graph.add_nodes_from(range(cover.size))
    for index, gate in enumerate(cover.gates):
        for column in gate.inputs:
            if column in input_refs:
                continue
            if column not in producer:
                raise DanglingInputError(
                    f"gate {index} ({gate}) reads {column}, which no gate or input provides",
                    gates=(index,),
                    column=column,
                    redundant_gates=_redundant_gates(cover),
                )
            graph.add_edge(producer[column], index)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        raise CycleDetectedError(
            f"gates {[edge[0] for edge in cycle]} form a cycle",
            gates=tuple(edge[0] for edge in cycle),
            redundant_gates=_redundant_gates(cover),
        )

    refs = dict(input_refs)
    gates = []
    for index in nx.lexicographical_topological_sort(graph):
        gate = cover.gates[index]
        gates.append(Gate(gate.kind, tuple(refs[c] for c in gate.inputs)))
        refs[gate.output] = n + len(gates)
    program = Program(n, tuple(gates), (refs[result],))
    logger.debug("cover of size %d for %s ordered into a program", cover.size, table.bits)
    return program


# ============================================================================
# MINIMAL COVER SEARCH
# ============================================================================

def _extended(w, gate, flavor):
    fill = 0 if flavor is CoverFlavor.POL else UNDEF
    missing = {c: fill for c in gate.columns if c not in w}
    return w.with_values(missing) if missing else w


def minimal_cover_search(table, pool, size_bound, flavor=CoverFlavor.PPOL):
    """
    Smallest subset of `pool` that verifies, by iterative deepening on size.

    Each failed candidate yields a counterexample; extended to the pool's
    new columns (0 for pol, undef for ppol) it must be caught by one of the
    gates still to be added, so only those gates are branched on.

    Args:
        table: TruthTable of f
        pool: CoverGates to choose from
        size_bound: Largest cover size to try
        flavor: CoverFlavor of the covers searched

    Returns:
        Cover or None: None when no subset of at most size_bound gates verifies
    """
    flavor = CoverFlavor(flavor)
    pool = tuple(dict.fromkeys(pool))
    if flavor is CoverFlavor.PPOL:
        inputs = set(table.input_columns())
        pool = tuple(
            gate for gate in pool
            if table.result_column not in gate.inputs and gate.output not in inputs
        )

    for bound in range(size_bound + 1):
        visited = set()

        def search(selected):
            key = frozenset(selected)
            if key in visited:
                return None
            visited.add(key)
            cover = Cover(table, selected, flavor)
            valid, witness = verify_cover(cover)
            if valid:
                return cover
            if len(selected) == bound:
                return None
            outputs = {gate.output for gate in selected}
            for gate in pool:
                if gate in selected:
                    continue
                if flavor is CoverFlavor.PPOL and gate.output in outputs:
                    continue
                if gate_covers(gate, _extended(witness, gate, flavor), flavor):
                    found = search(selected + (gate,))
                    if found is not None:
                        return found
            return None

        found = search(())
        if found is not None:
            logger.info("minimal cover for %s from a pool of %d: size %d", table.bits, len(pool), found.size)
            return found
    logger.info("no cover of size <= %d for %s in the pool", size_bound, table.bits)
    return None
