# -*- coding: utf-8 -*-


class OwsError(Exception):
    """Base class for every error raised by pyows."""


class UsageError(OwsError, ValueError):
    """A precondition of the called operation does not hold."""

    def __init__(self, message, **values):
        super(UsageError, self).__init__(message)
        self.message = message
        self.values = values

    def __str__(self):
        if not self.values:
            return self.message
        details = ", ".join("%s=%r" % item for item in sorted(self.values.items()))
        return "%s (%s)" % (self.message, details)


class DegenerateInputError(OwsError):
    """The robust-minimum rank window selects no element."""

    def __init__(self, n, low_rank, high_rank):
        super(DegenerateInputError, self).__init__()
        self.n = n
        self.low_rank = low_rank
        self.high_rank = high_rank

    def __str__(self):
        return "DegenerateInputError(n=%s): rank window %s..%s is empty" % (
            self.n, self.low_rank, self.high_rank)


class ProtocolError(OwsError):
    """An online learner or driver broke the round order of the game."""

    def __init__(self, round_index, detail):
        super(ProtocolError, self).__init__()
        self.round_index = round_index
        self.detail = detail

    def __str__(self):
        return "ProtocolError(round %s): %s" % (self.round_index, self.detail)


class BudgetExceeded(OwsError):
    """An exhaustive enumeration was asked to go past its guard."""

    def __init__(self, what, value, limit):
        super(BudgetExceeded, self).__init__()
        self.what = what
        self.value = value
        self.limit = limit

    def __str__(self):
        return "BudgetExceeded: %s=%s exceeds %s" % (self.what, self.value, self.limit)


class DecodeError(OwsError):
    """Serialized data does not match the expected wire format."""

    def __init__(self, error):
        super(DecodeError, self).__init__()
        self.error = error

    def __str__(self):
        return repr(self.error)
