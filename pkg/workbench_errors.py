"""
Exceptions raised by the Polymorphism Circuit Workbench
"""


class WorkbenchError(Exception):
    """Base class for every error the workbench raises on purpose."""


class TableFormatError(WorkbenchError, ValueError):
    """A truth table has the wrong length, arity or bit values."""


class ArityError(WorkbenchError, ValueError):
    """An index or arity is outside the range an operation accepts."""


class WidthMismatchError(ArityError):
    """Tuples handed to a componentwise operation differ in width."""


class MissingColumnError(WorkbenchError, KeyError):
    """A witness was consulted on a column it does not assign."""

    def __init__(self, column):
        super().__init__(f"witness has no value for column {column}")
        self.column = column

    def __str__(self):
        return self.args[0]


class WitnessModeError(WorkbenchError, ValueError):
    """A total witness holds undef, or a partial witness was used as total."""


class ProgramStructureError(WorkbenchError, ValueError):
    """A program references a gate that does not precede it."""


class CircuitMismatchError(WorkbenchError, ValueError):
    """A program does not compute the function it was paired with."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class GateMatrixError(WorkbenchError, ValueError):
    """A gate matrix whose output column is not its operation on the inputs."""


class PolymorphismRequiredError(WorkbenchError, ValueError):
    """A construction was asked to use an operation the relation is not closed under."""


class PatchError(WorkbenchError, ValueError):
    """A patch set does not account for every input where f and g differ."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class PpolConditionError(WorkbenchError, ValueError):
    """
    A pPol cover breaks one of its structural conditions.

    condition 1: two gates output the same column
    condition 2: the result column feeds a gate
    condition 3: a gate outputs an input column of the truth table
    """

    def __init__(self, condition, gates, message=None):
        self.condition = condition
        self.gates = tuple(gates)
        super().__init__(message or f"pPol condition ({condition}) fails for gates {list(self.gates)}")


class CoverStructureError(WorkbenchError, ValueError):
    """A cover cannot be arranged into a circuit."""

    def __init__(self, message, gates=(), redundant_gates=(), witness=None):
        super().__init__(message)
        self.gates = tuple(gates)
        self.redundant_gates = tuple(redundant_gates)
        self.witness = witness


class MissingResultColumnError(CoverStructureError):
    """No gate of the cover outputs the result column."""


class DanglingInputError(CoverStructureError):
    """A gate input is neither a truth-table input nor another gate's output."""

    def __init__(self, message, gates=(), column=None, redundant_gates=()):
        super().__init__(message, gates=gates, redundant_gates=redundant_gates)
        self.column = column


class CycleDetectedError(CoverStructureError):
    """The cover's gates depend on each other in a cycle."""


class InvalidCoverError(WorkbenchError, ValueError):
    """A construction needs a valid cover and was handed an invalid one."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidTsvndError(WorkbenchError, ValueError):
    """A circuit is not total and single-valued, or does not compute f."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NondeterministicMismatchError(WorkbenchError, ValueError):
    """An ND / coND pair does not decide the same function."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class InfeasibleSweepError(WorkbenchError, ValueError):
    """A sweep was requested at an arity its checks cannot handle."""


class FormatError(WorkbenchError, ValueError):
    """A text artifact could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
