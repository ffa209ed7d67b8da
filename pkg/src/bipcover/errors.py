"""Exception types shared across the package."""


class BipcoverError(Exception):
    """Base class for all bipcover errors."""


class InvalidArgumentError(BipcoverError, ValueError):
    """An argument violates a documented precondition."""


class FormatError(BipcoverError):
    """A text file does not conform to the expected format."""


class NotConnectedError(BipcoverError):
    """A vertex set that must induce a connected subgraph does not."""


class ConstructionInfeasibleError(BipcoverError):
    """An adversarial colouring cannot be built on this graph."""


class TooLargeError(BipcoverError):
    """Instance exceeds an exhaustive-search size guard."""


class PropertyFailureError(BipcoverError):
    """The input visibly lacks the structure the cover algorithm needs.

    Carries the pipeline step that failed so harnesses can aggregate
    failure modes.
    """

    def __init__(self, step: str, message: str):
        self.step = step
        super().__init__(f"{step}: {message}")


class PartitionFailureError(BipcoverError):
    """A bound asserted by the partition algorithm failed, or a retry
    loop exhausted its budget.  Never raised after a partition has been
    produced: callers get either a valid partition or this error."""

    def __init__(self, step: str, message: str):
        self.step = step
        super().__init__(f"{step}: {message}")
