"""Exception hierarchy shared by all modules."""


class LodeError(Exception):
    pass


class DivisionByZeroSeries(LodeError, ZeroDivisionError):
    pass


class BranchAmbiguity(LodeError):
    pass


class SingularJacobian(LodeError):
    pass


class NoRootAtOrigin(LodeError):
    pass


class EssentialSingularity(LodeError):
    pass


class OrderExhausted(LodeError):
    pass


class DegenerateRatio(LodeError):
    pass


class ExactnessRequired(LodeError):
    pass


class DegenerateInput(LodeError):
    pass


class ResonantObstruction(LodeError):
    pass


class ResidualTooLarge(LodeError):
    pass


class PoleOnPath(LodeError):
    pass


class ToleranceNotMet(LodeError):
    pass


class UndecidableWithoutStokes(LodeError):
    pass


class DivergentTerm(LodeError):
    pass
