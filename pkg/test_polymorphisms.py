"""
Test polymorphism and anti-polymorphism checks on AND, XNOR and majority
"""

import pytest

from polymorphisms import (
    RowSelection,
    apply_componentwise,
    classify_trivial,
    dense_anti_polymorphism_mask,
    detect_nontrivial_polymorphisms,
    is_closed_under,
    is_partial_anti_polymorphism,
    is_partial_polymorphism,
    is_polymorphism,
    is_total_anti_polymorphism,
    membership_of_fixtures,
    polymorphism_witnesses,
    projection_flip_witness,
)
from synthesis import MultiTable
from truth_table import (
    AND2,
    MAJORITY_WITNESSES,
    XNOR2,
    Column,
    DenseOperation,
    NamedOperation,
    TruthTable,
    Witness,
    WitnessMode,
    all_tables,
)
from workbench_errors import ArityError, WidthMismatchError, WitnessModeError

MAJ, AFF, AND, OR = NamedOperation.MAJ, NamedOperation.AFF, NamedOperation.AND, NamedOperation.OR


def test_apply_componentwise():
    assert apply_componentwise(MAJ, [(0, 1, 0), (1, 0, 0), (1, 1, 1)]) == (1, 1, 0)
    assert apply_componentwise(DenseOperation(2, "0*11"), [(0, 1), (1, 1)]) == (None, 1)
    with pytest.raises(ArityError):
        apply_componentwise(AND, [(0, 1)])
    with pytest.raises(WidthMismatchError):
        apply_componentwise(AND, [(0, 1), (1,)])


def test_majority_breaks_and_on_exactly_one_triple():
    assert polymorphism_witnesses(MAJ, AND2) == [RowSelection((1, 2, 3), (1, 1, 0))]


def test_majority_breaks_xnor_on_every_triple():
    selections = polymorphism_witnesses(MAJ, XNOR2)
    assert [s.rows for s in selections] == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


def test_fixture_membership():
    assert membership_of_fixtures(XNOR2, MAJORITY_WITNESSES) == {"w1": True, "w2": True, "w3": True, "w4": True}
    assert membership_of_fixtures(AND2, MAJORITY_WITNESSES) == {"w1": False, "w2": False, "w3": False, "w4": True}


def test_detect_nontrivial_polymorphisms():
    assert detect_nontrivial_polymorphisms(AND2) == (AND,)
    assert detect_nontrivial_polymorphisms(XNOR2) == (AFF,)
    assert detect_nontrivial_polymorphisms(TruthTable.from_bits("0000")) == (AND, OR, AFF, MAJ)
    assert detect_nontrivial_polymorphisms(TruthTable.from_bits("1110")) == ()
    assert detect_nontrivial_polymorphisms(TruthTable.from_bits("00010111")) == ()
    assert detect_nontrivial_polymorphisms(TruthTable.from_bits("11110000")) == (AFF, MAJ)


def test_majority_closure_only_on_trivial_shapes():
    for table in all_tables(3):
        if MAJ in detect_nontrivial_polymorphisms(table):
            assert classify_trivial(table).kind != "general", table


def test_distinct_row_check_agrees_with_brute_force():
    for n in (1, 2, 3):
        for table in all_tables(n):
            for op in NamedOperation:
                assert is_closed_under(table, op) == is_polymorphism(op, table), (table, op)


def test_generic_polymorphism_checks():
    assert is_polymorphism(DenseOperation.projection(3, 2), XNOR2)
    assert is_polymorphism(DenseOperation.constant(1, 1), XNOR2)
    assert not is_polymorphism(DenseOperation.constant(1, 0), XNOR2)
    with pytest.raises(WitnessModeError):
        is_polymorphism(DenseOperation(2, "0*11"), AND2)
    with pytest.raises(ArityError):
        is_polymorphism(DenseOperation.projection(4, 1), AND2)


def test_partial_polymorphisms_contain_total_ones():
    assert is_partial_polymorphism(AND.dense(), AND2)
    # or restricted to agreeing arguments is the identity, so always a partial polymorphism
    partial_or = DenseOperation(2, "0**1")
    assert is_partial_polymorphism(partial_or, XNOR2)
    assert not is_polymorphism(OR, XNOR2)


def test_multi_output_relations():
    both = MultiTable.from_tables([AND2, TruthTable.from_bits("0011")])
    assert both.relation().shape == (4, 4)
    assert is_closed_under(both, AND)
    assert not is_closed_under(both, OR)


def test_total_anti_polymorphisms():
    w4 = MAJORITY_WITNESSES[3]
    assert is_total_anti_polymorphism(w4, AND2)
    assert not is_total_anti_polymorphism(MAJORITY_WITNESSES[0], AND2)
    with pytest.raises(ArityError):
        is_total_anti_polymorphism(DenseOperation.projection(2, 1), AND2)
    sparse = Witness({"0011": 1, "0101": 1, "0001": 0})
    assert is_total_anti_polymorphism(sparse, AND2)
    with pytest.raises(WitnessModeError):
        is_total_anti_polymorphism(Witness({"0011": 1, "0101": 1, "0001": None}, WitnessMode.PARTIAL), AND2)


def test_partial_anti_polymorphisms_need_every_column_of_f():
    undefined_result = Witness({"0011": 1, "0101": 1, "0001": None}, WitnessMode.PARTIAL)
    assert not is_partial_anti_polymorphism(undefined_result, AND2)
    assert is_partial_anti_polymorphism(Witness({"0011": 1, "0101": 1, "0001": 0}), AND2)


def test_classify_trivial():
    assert str(classify_trivial(TruthTable.from_bits("1111"))) == "constant"
    assert str(classify_trivial(TruthTable.from_bits("0011"))) == "projection(1)"
    assert str(classify_trivial(TruthTable.from_bits("1010"))) == "negated_projection(2)"
    assert str(classify_trivial(AND2)) == "general"


def test_projection_flip_witness_is_anti():
    for table in all_tables(2):
        if str(classify_trivial(table)).startswith("projection"):
            continue
        for row in range(4):
            witness = projection_flip_witness(table, row, columns=[Column("0111")])
            assert is_total_anti_polymorphism(witness, table)
            if Column("0111") != table.result_column:
                assert witness[Column("0111")] == Column("0111")[row]


def test_dense_anti_polymorphism_count():
    mask = dense_anti_polymorphism_mask(AND2)
    assert int(mask.sum()) == 32768
    # projections are polymorphisms, so they never leave f•
    projection_code = int("".join(str(b) for b in DenseOperation.projection(4, 1).table), 2)
    assert not mask[projection_code]


def test_dense_mask_matches_sparse_checks():
    mask = dense_anti_polymorphism_mask(XNOR2)
    for w in MAJORITY_WITNESSES:
        code = int("".join(str(b) for b in w.table), 2)
        assert bool(mask[code]) == is_total_anti_polymorphism(w, XNOR2)


if __name__ == "__main__":
    print("=" * 70)
    print("TEST: Polymorphisms and Anti-Polymorphisms")
    print("=" * 70)
    for name, test in list(globals().items()):
        if name.startswith("test_") and callable(test):
            test()
            print(f"✅ PASS {name}")
