"""
Test TSVND circuits, their validation and the cover / ND conversions
"""

import numpy as np
import pytest

from circuits import FALSE, Gate, GateKind, Program, ProgramBuilder, computes, optimal_circuit, random_program
from config import tsvnd_size_bound
from covers import Cover, CoverGate, as_pol_cover, cover_from_circuit, verify_cover
from polymorphisms import is_total_anti_polymorphism
from truth_table import AND2, Column, TruthTable, all_tables, index_to_bits
from tsvnd import (
    QUIT,
    QUIT_CODE,
    Constraint,
    NondeterministicCircuit,
    NondeterministicMode,
    TsvndCircuit,
    compile_constraints,
    decision_table,
    merge_nd_cond,
    pol_cover_from_tsvnd,
    split_tsvnd,
    tsvnd_evaluate,
    tsvnd_from_pol_cover,
    validate_tsvnd,
    witness_from_assignment,
    witness_table,
    wrap_deterministic,
)
from workbench_errors import (
    ArityError,
    InvalidCoverError,
    InvalidTsvndError,
    MissingResultColumnError,
    NondeterministicMismatchError,
    ProgramStructureError,
)

AND, OR, NOT = GateKind.AND, GateKind.OR, GateKind.NOT
XOR2 = TruthTable.from_bits("0110")
ND, COND = NondeterministicMode.ND, NondeterministicMode.COND


def _program(arity, *gates):
    return Program(arity, tuple(Gate(kind, refs) for kind, refs in gates))


# y1 ? (x1 and not x2) : (not x1 and x2)
XOR_ND = NondeterministicCircuit(_program(
    3,
    (NOT, (2,)), (AND, (1, 4)), (NOT, (1,)), (AND, (6, 2)),
    (AND, (3, 5)), (NOT, (3,)), (AND, (9, 7)), (OR, (8, 10)),
), 2, 1, ND)

# y1 ? not (x1 and x2) : (x1 or x2)
XOR_COND = NondeterministicCircuit(_program(
    3,
    (AND, (1, 2)), (NOT, (4,)), (OR, (1, 2)),
    (AND, (3, 5)), (NOT, (3,)), (AND, (8, 6)), (OR, (7, 9)),
), 2, 1, COND)


def _optimal_pol_cover(table):
    return as_pol_cover(cover_from_circuit(optimal_circuit(table), table))


def _dnf_program(table, arity):
    """A program over `arity` inputs computing `table` on the first table.arity of them."""
    builder = ProgramBuilder(arity)
    result = FALSE
    for r, value in enumerate(table.outputs):
        if not value:
            continue
        literals = [builder.input(i) if bit else ~builder.input(i)
                    for i, bit in enumerate(index_to_bits(r, table.arity), start=1)]
        term = literals[0]
        for literal in literals[1:]:
            term = builder.and_(term, literal)
        result = builder.or_(result, term)
    return builder.build([result])


def test_constraints():
    constraint = Constraint(AND, ("x1", "x2"), "x3")
    assert str(constraint) == "AND x1 x2 = x3"
    assert constraint.holds({"x1": 1, "x2": 1, "x3": 1})
    assert not constraint.holds({"x1": 1, "x2": 0, "x3": 1})
    with pytest.raises(ProgramStructureError):
        Constraint(NOT, ("x1", "x2"), "y1")


def test_circuit_shapes_are_checked():
    with pytest.raises(ProgramStructureError):
        TsvndCircuit(2, 1)
    with pytest.raises(ProgramStructureError):
        TsvndCircuit(2, 1, program=_program(2, (AND, (1, 2))))
    with pytest.raises(ProgramStructureError):
        TsvndCircuit(2, 0, constraints=(Constraint(AND, ("x1", "y1"), "x3"),))
    with pytest.raises(ArityError):
        TsvndCircuit(0, 1, constraints=())


def test_and_cover_becomes_one_constraint():
    circuit = tsvnd_from_pol_cover(_optimal_pol_cover(AND2))
    assert circuit.constraints == (Constraint(AND, ("x1", "x2"), "x3"),)
    assert circuit.guess_vars == ("x3",)
    assert circuit.size == 1
    assert circuit.column_of("x3") == Column("0001")
    assert tsvnd_evaluate(circuit, (1, 1), (1,)) == 1
    assert tsvnd_evaluate(circuit, (1, 1), (0,)) == QUIT
    answers = decision_table(circuit)
    assert answers.shape == (4, 2)
    assert list(answers[3]) == [QUIT_CODE, 1]


def test_projection_is_answered_by_its_input():
    table = TruthTable.from_bits("0101")
    circuit = tsvnd_from_pol_cover(Cover(table, ()))
    assert circuit.output_var == "x2"
    assert circuit.guess_count == 0
    assert validate_tsvnd(circuit, table)[0]
    compiled = compile_constraints(circuit)
    assert compiled.always_valid
    assert validate_tsvnd(compiled, table)[0]


def test_round_trip_for_every_two_input_function():
    for table in all_tables(2):
        cover = _optimal_pol_cover(table)
        circuit = tsvnd_from_pol_cover(cover)
        assert circuit.size == cover.size
        valid, report = validate_tsvnd(circuit, table)
        assert valid, (table, report.to_dict())

        compiled = compile_constraints(circuit)
        assert compiled.size <= tsvnd_size_bound(cover.size)
        assert validate_tsvnd(compiled, table)[0]

        for source in (circuit, compiled):
            back = pol_cover_from_tsvnd(source, table)
            assert back.size == source.size
            assert verify_cover(back)[0], table


def test_deterministic_programs_give_back_their_own_cover():
    for table in all_tables(2):
        program = optimal_circuit(table)
        circuit = wrap_deterministic(program)
        assert circuit.always_valid and circuit.guess_count == 0
        back = pol_cover_from_tsvnd(circuit, table)
        assert back.gates == cover_from_circuit(program, table).gates


def test_missing_and_gate_breaks_single_valuedness():
    cover = _optimal_pol_cover(XOR2)
    and_gate = next(i for i, g in enumerate(cover.gates) if g.output == Column("0001"))
    broken = cover.without(and_gate)
    with pytest.raises(InvalidCoverError):
        tsvnd_from_pol_cover(broken)
    circuit = tsvnd_from_pol_cover(broken, verify=False)
    valid, report = validate_tsvnd(circuit, XOR2)
    assert not valid
    assert report.total
    assert not report.single_valued
    assert (1, 1) in report.conflicting


def test_conflicting_assignment_maps_to_an_uncovered_witness():
    cover = _optimal_pol_cover(XOR2)
    and_gate = next(i for i, g in enumerate(cover.gates) if g.output == Column("0001"))
    broken = cover.without(and_gate)
    circuit = tsvnd_from_pol_cover(broken, verify=False)
    answers = decision_table(circuit)
    for r in range(4):
        x = index_to_bits(r, 2)
        for code in np.flatnonzero(answers[r] == 1 - XOR2.outputs[r]):
            witness = witness_from_assignment(circuit, x, index_to_bits(int(code), circuit.guess_count))
            assert is_total_anti_polymorphism(witness, XOR2)


def test_missing_result_column():
    cover = Cover(XOR2, (CoverGate(OR, ("0011", "0101"), "0111"),))
    with pytest.raises(MissingResultColumnError) as excinfo:
        tsvnd_from_pol_cover(cover, verify=False)
    assert is_total_anti_polymorphism(excinfo.value.witness, XOR2)


def test_witness_table_picks_smallest_guess():
    circuit = tsvnd_from_pol_cover(_optimal_pol_cover(AND2))
    fy = witness_table(circuit)
    assert fy.guesses() == ((0,), (0,), (0,), (1,))
    assert fy.extended_rows()[3] == (1, 1, 1)


def test_nd_and_cond_circuits_decide_xor():
    assert XOR_ND.decided_function() == XOR2
    assert XOR_COND.decided_function() == XOR2
    assert XOR_ND.outputs_by_guess().shape == (4, 2)


def test_merge_then_split():
    merged = merge_nd_cond(XOR_ND, XOR_COND, XOR2)
    assert merged.guess_count == 2
    assert merged.size == XOR_ND.size + XOR_COND.size + 2
    assert validate_tsvnd(merged, XOR2)[0]
    nd, cond = split_tsvnd(merged, XOR2)
    assert nd.mode is ND and cond.mode is COND
    assert nd.decided_function() == XOR2
    assert cond.decided_function() == XOR2
    assert nd.size == merged.size + 1
    assert cond.size == merged.size + 2


def test_merged_xor_gives_a_pol_cover():
    merged = merge_nd_cond(XOR_ND, XOR_COND, XOR2)
    cover = pol_cover_from_tsvnd(merged, XOR2)
    assert cover.size == merged.size
    assert verify_cover(cover) == (True, None)


def test_quitting_program_gets_its_valid_column_pinned():
    always_one = TruthTable.from_bits("11")
    # valid = value = y1
    circuit = TsvndCircuit(1, 1, program=Program(2, (), (2, 2)))
    assert validate_tsvnd(circuit, always_one)[0]
    assert not verify_cover(as_pol_cover(Cover(always_one, ())))[0]
    cover = pol_cover_from_tsvnd(circuit, always_one)
    assert cover.size == 2
    assert verify_cover(cover) == (True, None)


def test_merge_rejects_mismatched_pairs():
    with pytest.raises(NondeterministicMismatchError):
        merge_nd_cond(XOR_COND, XOR_ND)
    other = NondeterministicCircuit(_program(3, (AND, (1, 2))), 2, 1, COND)
    with pytest.raises(NondeterministicMismatchError) as excinfo:
        merge_nd_cond(XOR_ND, other)
    assert excinfo.value.x == (0, 1)


def test_split_needs_a_valid_circuit():
    broken = TsvndCircuit(2, 1, constraints=(Constraint(OR, ("x1", "x2"), "y1"),), output_var="y1")
    assert validate_tsvnd(broken)[0]
    with pytest.raises(InvalidTsvndError) as excinfo:
        split_tsvnd(broken, AND2)
    assert excinfo.value.report.mismatched


def test_always_valid_circuits_split_into_their_value_program():
    program = optimal_circuit(AND2)
    nd, cond = split_tsvnd(wrap_deterministic(program), AND2)
    assert nd.program == cond.program
    assert nd.decided_function() == AND2 == cond.decided_function()


def test_split_then_merge_on_compiled_circuits():
    for table in all_tables(2):
        circuit = compile_constraints(tsvnd_from_pol_cover(_optimal_pol_cover(table)))
        nd, cond = split_tsvnd(circuit, table)
        assert nd.decided_function() == table
        assert cond.decided_function() == table
        merged = merge_nd_cond(nd, cond, table)
        assert validate_tsvnd(merged, table)[0]


def test_merge_then_split_on_random_nondeterministic_circuits():
    rng = np.random.default_rng(5)
    for _ in range(40):
        n = int(rng.integers(1, 4))
        m = int(rng.integers(1, 3))
        nd = NondeterministicCircuit(random_program(n + m, int(rng.integers(1, 7)), rng), n, m, ND)
        table = nd.decided_function()
        cond = NondeterministicCircuit(_dnf_program(table, n + m), n, m, COND)
        merged = merge_nd_cond(nd, cond, table)
        assert merged.guess_count <= 4
        valid, report = validate_tsvnd(merged, table)
        assert valid, report.to_dict()
        assert verify_cover(pol_cover_from_tsvnd(merged, table))[0]
        nd_again, cond_again = split_tsvnd(merged)
        assert nd_again.decided_function() == table
        assert cond_again.decided_function() == table


def test_dnf_helper_ignores_guess_inputs():
    table = TruthTable.from_bits("0110")
    program = _dnf_program(table, 3)
    assert computes(program, TruthTable.from_bits("00111100"))


if __name__ == "__main__":
    print("=" * 70)
    print("TEST: TSVND Circuits")
    print("=" * 70)
    for name, test in list(globals().items()):
        if name.startswith("test_") and callable(test):
            test()
            print(f"✅ PASS {name}")
