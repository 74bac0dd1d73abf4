"""Exception hierarchy shared by every module."""


class BornconvError(Exception):
    pass


class InvariantViolation(BornconvError, ValueError):
    """A structure failed one or more of its construction-time invariants.

    ``violations`` holds every failed check (not just the first), each as a
    short human-readable string starting with the invariant name.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class EmptySet(BornconvError, ValueError):
    pass


class NonPositiveEpsilon(BornconvError, ValueError):
    pass


class UnknownIndex(BornconvError, KeyError):
    pass


class TrivialIdeal(InvariantViolation):
    pass


class NotACover(InvariantViolation):
    pass


class DegenerateTrace(BornconvError):
    """The trace of an ideal on a subset contains the subset itself."""


class InstanceTooLarge(BornconvError):
    pass


class UnknownMode(BornconvError, ValueError):
    pass


class ParseError(BornconvError, ValueError):
    pass
