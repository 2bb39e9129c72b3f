"""
Truth tables, columns, operations and witnesses for the Polymorphism Circuit Workbench

Row r of a truth table f• holds the n-bit binary expansion of r (x1 most
significant) followed by f(x). A column is a length-2^n vector running down
f• or down a gate matrix; witnesses assign bits to columns.
"""

from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType

import numpy as np

from config import MAX_DENSE_ARITY, NAMED_OPERATION_ARITIES
from workbench_errors import (
    ArityError,
    FormatError,
    MissingColumnError,
    TableFormatError,
    WidthMismatchError,
    WitnessModeError,
)

# Value of a partial witness or partial operation where it is undefined
UNDEF = None

_UNDEF_CHARS = ("*", "u", "-")


def bits_to_index(bits):
    """Integer value of a bit sequence read most significant first."""
    index = 0
    for bit in bits:
        index = (index << 1) | int(bit)
    return index


def index_to_bits(index, width):
    """Bit expansion of index over `width` positions, most significant first."""
    return tuple((index >> (width - 1 - i)) & 1 for i in range(width))


def _coerce_bits(bits, allow_undef=False):
    """Normalize a bit string, array or sequence to a tuple of 0/1 (and UNDEF)."""
    if isinstance(bits, str):
        values = []
        for char in bits.strip():
            if char in "01":
                values.append(int(char))
            elif allow_undef and char in _UNDEF_CHARS:
                values.append(UNDEF)
            else:
                raise TableFormatError(f"unexpected bit character {char!r}")
        return tuple(values)

    values = []
    for bit in np.asarray(bits, dtype=object).ravel():
        if bit is UNDEF:
            if not allow_undef:
                raise TableFormatError("undefined entry where a bit is required")
            values.append(UNDEF)
        elif int(bit) in (0, 1):
            values.append(int(bit))
        else:
            raise TableFormatError(f"bit value {bit!r} is not 0 or 1")
    return tuple(values)


# ============================================================================
# COLUMNS
# ============================================================================

@dataclass(frozen=True)
class Column:
    """
    A length-2^n bit vector; row 0 comes first.

    Two columns are the same column exactly when their bits agree, so a
    witness keyed by Column automatically gives duplicates one value.
    """

    bits: tuple

    def __post_init__(self):
        object.__setattr__(self, "bits", _coerce_bits(self.bits))
        if not self.bits:
            raise TableFormatError("a column needs at least one row")

    @classmethod
    def from_array(cls, array):
        return cls(tuple(int(b) for b in np.asarray(array).ravel()))

    @property
    def width(self):
        return len(self.bits)

    def __len__(self):
        return len(self.bits)

    def __getitem__(self, row):
        return self.bits[row]

    def __str__(self):
        return "".join(str(b) for b in self.bits)

    def __repr__(self):
        return f"Column('{self}')"

    def to_array(self):
        return np.array(self.bits, dtype=np.uint8)

    def as_index(self):
        """Argument index of this column when it is fed to a dense operation."""
        return bits_to_index(self.bits)

    def complement(self):
        return Column(tuple(1 - b for b in self.bits))


def input_column(i, n):
    """
    Column of input x_i in the truth table of an n-ary function.

    Args:
        i: Input position, 1-based (x1 is the most significant bit of the row index)
        n: Arity of the function

    Returns:
        Column: Bit r is the i-th most significant bit of r's n-bit expansion
    """
    if n < 1 or not 1 <= i <= n:
        raise ArityError(f"input index {i} out of range for arity {n}")
    return Column(tuple((r >> (n - i)) & 1 for r in range(2 ** n)))


# ============================================================================
# TRUTH TABLES
# ============================================================================

@dataclass(frozen=True)
class TruthTable:
    """The relation f• of a Boolean function: 2^n rows, n input columns plus the result."""

    arity: int
    outputs: tuple

    def __post_init__(self):
        object.__setattr__(self, "outputs", _coerce_bits(self.outputs))
        if self.arity < 1:
            raise TableFormatError(f"arity must be at least 1, got {self.arity}")
        if len(self.outputs) != 2 ** self.arity:
            raise TableFormatError(
                f"arity {self.arity} needs {2 ** self.arity} outputs, got {len(self.outputs)}"
            )

    @classmethod
    def from_bits(cls, bits, n=None):
        """Build a table from its output string, inferring n from the length when omitted."""
        outputs = _coerce_bits(bits)
        if n is None:
            n = len(outputs).bit_length() - 1
            if n < 1 or 2 ** n != len(outputs):
                raise TableFormatError(f"{len(outputs)} outputs is not 2^n for any n >= 1")
        return cls(n, outputs)

    @classmethod
    def from_function(cls, n, function):
        return cls(n, tuple(int(function(*index_to_bits(r, n))) & 1 for r in range(2 ** n)))

    @property
    def bits(self):
        return "".join(str(b) for b in self.outputs)

    @property
    def row_count(self):
        return 2 ** self.arity

    def __str__(self):
        return self.bits

    def value(self, x):
        """f(x) for an n-bit input."""
        if len(x) != self.arity:
            raise WidthMismatchError(f"expected {self.arity} input bits, got {len(x)}")
        return self.outputs[bits_to_index(x)]

    def input_columns(self):
        return tuple(input_column(i, self.arity) for i in range(1, self.arity + 1))

    @property
    def result_column(self):
        return Column(self.outputs)

    def columns(self):
        """The n + 1 columns of f•, inputs first."""
        return self.input_columns() + (self.result_column,)

    def relation(self):
        """f• as a (2^n, n+1) uint8 matrix."""
        return np.array(
            [index_to_bits(r, self.arity) + (self.outputs[r],) for r in range(self.row_count)],
            dtype=np.uint8,
        )

    def rows(self):
        return tuple(tuple(int(b) for b in row) for row in self.relation())

    def with_flipped(self, points):
        """Copy of this table with the outputs at the given inputs negated."""
        outputs = list(self.outputs)
        for x in points:
            index = bits_to_index(x)
            outputs[index] = 1 - outputs[index]
        return TruthTable(self.arity, tuple(outputs))


def all_tables(n):
    """Every function in B_n, in order of its output string read as a binary number."""
    width = 2 ** n
    for code in range(2 ** width):
        yield TruthTable(n, index_to_bits(code, width))


# Reference functions: AND is closed under and only, XNOR under aff only
AND2 = TruthTable.from_bits("0001")
XNOR2 = TruthTable.from_bits("1001")


# ============================================================================
# OPERATIONS
# ============================================================================

class NamedOperation(Enum):
    """The four operations one of which every non-trivial polymorphism set contains."""

    MAJ = "maj"
    AFF = "aff"
    AND = "and"
    OR = "or"

    @classmethod
    def parse(cls, name):
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise FormatError(f"unknown operation {name!r} (expected maj, aff, and or or)") from None

    @property
    def arity(self):
        return NAMED_OPERATION_ARITIES[self.value]

    def apply(self, *args):
        """Evaluate on bits or on equally shaped numpy arrays of bits."""
        if len(args) != self.arity:
            raise ArityError(f"{self.value} takes {self.arity} arguments, got {len(args)}")
        if self is NamedOperation.MAJ:
            a, b, c = args
            return (a & b) | (a & c) | (b & c)
        if self is NamedOperation.AFF:
            a, b, c = args
            return a ^ b ^ c
        if self is NamedOperation.AND:
            return args[0] & args[1]
        return args[0] | args[1]

    def dense(self):
        return DenseOperation.from_function(self.arity, self.apply)


@dataclass(frozen=True)
class DenseOperation:
    """
    A k-ary operation stored as its full table of 2^k entries.

    Entry j is the value on the argument tuple whose bits spell j (first
    argument most significant). Entries may be UNDEF for partial operations.
    """

    arity: int
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", _coerce_bits(self.table, allow_undef=True))
        if self.arity < 0:
            raise ArityError(f"negative arity {self.arity}")
        if len(self.table) != 2 ** self.arity:
            raise ArityError(
                f"a {self.arity}-ary operation needs {2 ** self.arity} entries, got {len(self.table)}"
            )

    @classmethod
    def from_function(cls, k, function):
        return cls(k, tuple(function(*index_to_bits(j, k)) for j in range(2 ** k)))

    @classmethod
    def projection(cls, k, i):
        if not 1 <= i <= k:
            raise ArityError(f"projection index {i} out of range for arity {k}")
        return cls.from_function(k, lambda *args: args[i - 1])

    @classmethod
    def negated_projection(cls, k, i):
        if not 1 <= i <= k:
            raise ArityError(f"projection index {i} out of range for arity {k}")
        return cls.from_function(k, lambda *args: 1 - args[i - 1])

    @classmethod
    def constant(cls, k, value):
        return cls(k, (value,) * (2 ** k))

    @property
    def is_total(self):
        return UNDEF not in self.table

    def __call__(self, *args):
        if len(args) != self.arity:
            raise WidthMismatchError(f"expected {self.arity} arguments, got {len(args)}")
        return self.table[bits_to_index(args)]

    def on_column(self, column):
        """Value of this operation applied to the bits of a column as its arguments."""
        if column.width != self.arity:
            raise ArityError(f"column of width {column.width} fed to a {self.arity}-ary operation")
        return self.table[column.as_index()]

    def table_array(self):
        """Entries as an int8 array, -1 marking UNDEF."""
        return np.array([-1 if v is UNDEF else v for v in self.table], dtype=np.int8)


def _majority_of(positions):
    def witness(*args):
        a, b, c = (args[p] for p in positions)
        return (a & b) | (a & c) | (b & c)
    return witness


# w1..w4: majority of three of the four arguments, leaving out x4, x3, x2, x1 in turn
MAJORITY_WITNESSES = tuple(
    DenseOperation.from_function(4, _majority_of(positions))
    for positions in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
)


# ============================================================================
# WITNESSES
# ============================================================================

class WitnessMode(Enum):
    TOTAL = "total"
    PARTIAL = "partial"


def _coerce_value(value):
    if value is UNDEF:
        return UNDEF
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("undef", *_UNDEF_CHARS):
            return UNDEF
        value = text
    value = int(value)
    if value not in (0, 1):
        raise TableFormatError(f"witness value {value!r} is not 0, 1 or undef")
    return value


@dataclass(frozen=True, eq=False)
class Witness:
    """
    A sparse (partial) assignment of bits to columns.

    Columns missing from the assignment are never consulted: membership
    depends only on f•'s columns and coverage only on a gate's columns.
    """

    assignment: object
    mode: WitnessMode = WitnessMode.TOTAL

    def __post_init__(self):
        mode = WitnessMode(self.mode)
        assignment = {}
        for column, value in dict(self.assignment).items():
            if not isinstance(column, Column):
                column = Column(column)
            assignment[column] = _coerce_value(value)
        if mode is WitnessMode.TOTAL and UNDEF in assignment.values():
            raise WitnessModeError("a total witness cannot leave a column undefined")
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "assignment", MappingProxyType(assignment))

    @classmethod
    def from_dense(cls, operation, columns):
        """Restriction of a dense 2^n-ary operation to the given columns."""
        mode = WitnessMode.TOTAL if operation.is_total else WitnessMode.PARTIAL
        return cls({c: operation.on_column(c) for c in columns}, mode)

    @classmethod
    def row_selector(cls, row, columns):
        """w(v) = v[row]: the witness every row of a gate matrix is consistent with."""
        return cls({c: c[row] for c in columns})

    def __eq__(self, other):
        if not isinstance(other, Witness):
            return NotImplemented
        return self.mode is other.mode and dict(self.assignment) == dict(other.assignment)

    def __hash__(self):
        return hash((self.mode, frozenset(self.assignment.items())))

    def __getitem__(self, column):
        try:
            return self.assignment[column]
        except KeyError:
            raise MissingColumnError(column) from None

    def __contains__(self, column):
        return column in self.assignment

    def __len__(self):
        return len(self.assignment)

    def get(self, column, default=UNDEF):
        return self.assignment.get(column, default)

    def is_defined(self, column):
        return self.assignment.get(column, UNDEF) is not UNDEF

    def columns(self):
        return tuple(self.assignment)

    def restricted(self, columns):
        return Witness({c: self.assignment[c] for c in columns if c in self.assignment}, self.mode)

    def with_values(self, updates):
        """Copy with some values replaced; the copy is partial if anything is undefined."""
        merged = dict(self.assignment)
        for column, value in dict(updates).items():
            merged[column if isinstance(column, Column) else Column(column)] = _coerce_value(value)
        mode = WitnessMode.PARTIAL if UNDEF in merged.values() else self.mode
        return Witness(merged, mode)

    def __str__(self):
        return ", ".join(f"{c}->{'undef' if v is UNDEF else v}" for c, v in self.assignment.items())


def dense_witness_matrix(n):
    """
    Every total witness of arity 2^n as a bit matrix (n <= 2 only).

    Row `code` holds the table of DenseOperation(2^n, index_to_bits(code, 2^(2^n))),
    so column j of the matrix is each witness's value on argument index j.
    """
    if not 1 <= n <= MAX_DENSE_ARITY:
        raise ArityError(f"dense witnesses are only enumerated for 1 <= n <= {MAX_DENSE_ARITY}")
    entries = 2 ** (2 ** n)
    codes = np.arange(2 ** entries, dtype=np.int64)
    shifts = np.arange(entries - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(np.uint8)
