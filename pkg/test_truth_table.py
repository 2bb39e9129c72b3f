"""
Test truth tables, columns, dense operations and witnesses
"""

import numpy as np
import pytest

from truth_table import (
    AND2,
    MAJORITY_WITNESSES,
    UNDEF,
    XNOR2,
    Column,
    DenseOperation,
    NamedOperation,
    TruthTable,
    Witness,
    WitnessMode,
    all_tables,
    bits_to_index,
    dense_witness_matrix,
    index_to_bits,
    input_column,
)
from workbench_errors import (
    ArityError,
    FormatError,
    MissingColumnError,
    TableFormatError,
    WidthMismatchError,
    WitnessModeError,
)


def test_rows_are_lexicographic_with_x1_most_significant():
    assert index_to_bits(2, 2) == (1, 0)
    assert bits_to_index((1, 0, 1)) == 5
    assert AND2.rows() == ((0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 1))
    assert AND2.relation().shape == (4, 3)


def test_input_columns():
    assert str(input_column(1, 2)) == "0011"
    assert str(input_column(2, 2)) == "0101"
    assert str(input_column(3, 3)) == "01010101"
    with pytest.raises(ArityError):
        input_column(3, 2)


def test_column_index_reads_row_zero_first():
    assert Column("0011").as_index() == 3
    assert Column("0101").as_index() == 5
    assert Column("0011").complement() == Column("1100")
    assert Column((0, 0, 1, 1)) == Column("0011")


def test_table_from_bits_infers_arity():
    table = TruthTable.from_bits("01101001")
    assert table.arity == 3
    assert table.value((1, 1, 1)) == 1
    assert table.result_column == Column("01101001")
    assert len(table.columns()) == 4
    with pytest.raises(TableFormatError):
        TruthTable.from_bits("011")
    with pytest.raises(TableFormatError):
        TruthTable.from_bits("0120")
    with pytest.raises(WidthMismatchError):
        AND2.value((1,))


def test_from_function_and_flipping():
    assert TruthTable.from_function(2, lambda a, b: a ^ b ^ 1) == XNOR2
    assert AND2.with_flipped([(0, 0), (1, 1)]).bits == "1000"


def test_all_tables_enumerates_in_output_order():
    tables = list(all_tables(2))
    assert len(tables) == 16
    assert tables[0].bits == "0000"
    assert tables[1].bits == "0001"
    assert tables[-1].bits == "1111"
    assert len(list(all_tables(1))) == 4


def test_named_operations():
    assert NamedOperation.parse("MAJ") is NamedOperation.MAJ
    assert NamedOperation.MAJ.apply(1, 1, 0) == 1
    assert NamedOperation.AFF.apply(1, 1, 1) == 1
    assert NamedOperation.AND.arity == 2
    assert NamedOperation.OR.dense().table == (0, 1, 1, 1)
    with pytest.raises(FormatError):
        NamedOperation.parse("xor")
    with pytest.raises(ArityError):
        NamedOperation.AND.apply(1, 0, 1)


def test_dense_operations():
    proj = DenseOperation.projection(3, 2)
    assert proj(0, 1, 0) == 1
    assert DenseOperation.negated_projection(2, 1)(0, 1) == 1
    assert DenseOperation.constant(2, 1).table == (1, 1, 1, 1)
    partial = DenseOperation(2, "01*1")
    assert not partial.is_total
    assert partial(1, 0) is UNDEF
    assert list(partial.table_array()) == [0, 1, -1, 1]
    with pytest.raises(ArityError):
        DenseOperation(2, "010")


def test_majority_fixtures_drop_one_argument_each():
    w1, w2, w3, w4 = MAJORITY_WITNESSES
    assert w1(1, 1, 0, 0) == 1   # majority of the first three
    assert w4(1, 1, 0, 0) == 0   # majority of the last three
    assert all(w.arity == 4 for w in MAJORITY_WITNESSES)


def test_witness_modes():
    total = Witness({"0011": 1, "0101": "0"})
    assert total[Column("0011")] == 1
    assert total.mode is WitnessMode.TOTAL
    with pytest.raises(WitnessModeError):
        Witness({"0011": UNDEF}, WitnessMode.TOTAL)
    with pytest.raises(MissingColumnError) as excinfo:
        total[Column("1111")]
    assert str(excinfo.value) == "witness has no value for column 1111"
    assert isinstance(excinfo.value, KeyError)
    partial = total.with_values({Column("0001"): "undef"})
    assert partial.mode is WitnessMode.PARTIAL
    assert not partial.is_defined(Column("0001"))
    assert partial.restricted([Column("0011")]) == Witness({"0011": 1}, WitnessMode.PARTIAL)


def test_witness_updates_accept_text_values():
    total = Witness({"0011": 1, "0101": 0})
    starred = total.with_values({"0101": "*"})
    assert starred.mode is WitnessMode.PARTIAL
    assert starred.get(Column("0101")) is UNDEF
    assert total.with_values({Column("0101"): "1"}) == Witness({"0011": 1, "0101": 1})
    assert total.with_values({}).mode is WitnessMode.TOTAL


def test_row_selector_and_dense_restriction():
    columns = AND2.columns()
    selector = Witness.row_selector(3, columns)
    assert [selector[c] for c in columns] == [1, 1, 1]
    restricted = Witness.from_dense(DenseOperation.projection(4, 2), columns)
    assert [restricted[c] for c in columns] == [0, 1, 0]


def test_dense_witness_matrix():
    matrix = dense_witness_matrix(2)
    assert matrix.shape == (65536, 16)
    assert list(matrix[1]) == [0] * 15 + [1]
    assert dense_witness_matrix(1).shape == (16, 4)
    assert np.all(matrix[-1] == 1)
    with pytest.raises(ArityError):
        dense_witness_matrix(3)


if __name__ == "__main__":
    print("=" * 70)
    print("TEST: Truth Tables and Witnesses")
    print("=" * 70)
    for name, test in list(globals().items()):
        if name.startswith("test_") and callable(test):
            test()
            print(f"✅ PASS {name}")
