"""Exceptions raised by the scheduling components."""

from collections.abc import Hashable, Sequence


class FjslError(ValueError):
    """Base class of every error raised by the toolkit."""


class InstanceFormatError(FjslError):
    """Syntax error in an instance file.

    Attributes:
        line (int | None): 1-based line number where the error was detected.
    """

    def __init__(self, message: str, line: int | None = None) -> None:
        """Initialize the error.

        Args:
            message (str): Description of the problem.
            line (int | None, optional): 1-based line number. Defaults to None.
        """
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class CycleError(FjslError):
    """A graph that must be acyclic contains a cycle.

    Attributes:
        cycle (list[Hashable]): Vertices of one cycle, in order.
    """

    def __init__(
        self, cycle: Sequence[Hashable], what: str = "precedence graph"
    ) -> None:
        """Initialize the error.

        Args:
            cycle (Sequence[Hashable]): Vertices of one cycle, in order.
            what (str, optional): Name of the graph. Defaults to "precedence graph".
        """
        self.cycle = list(cycle)
        path = " -> ".join(str(v) for v in [*self.cycle, self.cycle[0]])
        super().__init__(f"cycle in {what}: {path}")


class EmptyEligibleSetError(FjslError):
    """An operation cannot be processed by any machine."""

    def __init__(self, operation: int) -> None:
        """Initialize the error.

        Args:
            operation (int): Id of the operation with no eligible machine.
        """
        self.operation = operation
        super().__init__(f"operation {operation} has an empty eligible machine set")


class EligibilityError(FjslError):
    """An operation is assigned to a machine that cannot process it."""


class InfeasibleSolutionError(FjslError):
    """A solution violates the constraints of its instance.

    Attributes:
        violations (list[tuple[str, str]]): (kind, detail) pairs.
        cycle (list[Hashable]): Cycle of the solution graph, if that is the cause.
    """

    def __init__(
        self,
        message: str,
        violations: Sequence[tuple[str, str]] = (),
        cycle: Sequence[Hashable] = (),
    ) -> None:
        """Initialize the error.

        Args:
            message (str): Description of the problem.
            violations (Sequence[tuple[str, str]], optional): Violations found.
                Defaults to ().
            cycle (Sequence[Hashable], optional): Cycle found. Defaults to ().
        """
        self.violations = list(violations)
        self.cycle = list(cycle)
        super().__init__(message)


class LearningDomainError(FjslError):
    """The learning function was called outside of its domain."""


class GeneratorParameterError(FjslError):
    """Invalid parameter passed to the random instance generator."""
