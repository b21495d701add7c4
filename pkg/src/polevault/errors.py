"""Exception hierarchy shared by all polevault layers.

Every error raised by the library derives from PolevaultError so the CLI can
catch one type and attach pipeline-stage context.
"""


class PolevaultError(Exception):
    pass


# -- exact algebra ----------------------------------------------------------

class AlgebraError(PolevaultError):
    pass


class ZeroDenominator(AlgebraError):
    pass


class DenominatorVanishes(AlgebraError):
    """A substitution made a denominator identically zero."""


class NumericPole(AlgebraError):
    """Numeric evaluation hit a denominator below the pole epsilon."""


class DerivativeOrderExceeded(AlgebraError):
    """The derivation would need a symbol beyond the ring's max order."""


class WidenRequest(AlgebraError):
    """A binomial root does not exist in the current number field.

    Carries enough information for the cascade engine to retry over a
    wider cyclotomic field.
    """

    def __init__(self, order, constant, message=None):
        super().__init__(message or f"no root of x^{order} = {constant} in field")
        self.order = order
        self.constant = constant


class UnsupportedField(AlgebraError):
    pass


# -- chart geometry ---------------------------------------------------------

class ChartError(PolevaultError):
    pass


class CentreContainsChartVars(ChartError):
    pass


class OutsideOverlap(ChartError):
    pass


# -- cascade engine ---------------------------------------------------------

class CascadeError(PolevaultError):
    pass


class NotPolynomial(CascadeError):
    pass


class CentreNotIndeterminate(CascadeError):
    pass


# -- singularity analysis ---------------------------------------------------

class AnalysisError(PolevaultError):
    pass


class NotALeaf(AnalysisError):
    pass


class NonlinearInHighest(AnalysisError):
    """A condition generator cannot be solved for its top symbol."""


class LeadingBalanceFails(AnalysisError):
    pass


# -- numerics ---------------------------------------------------------------

class NumericError(PolevaultError):
    pass


class UnboundSymbol(NumericError):
    pass


class ConditionViolatedByBinding(NumericError):
    pass


class StepUnderflow(NumericError):
    pass


class MaxStepsExceeded(NumericError):
    pass


class NoLeafApplicable(NumericError):
    pass


class FitDiverged(NumericError):
    pass


# -- frontend ---------------------------------------------------------------

class FrontendError(PolevaultError):
    def __init__(self, message, line=None, column=None):
        loc = "" if line is None else f" (line {line}" + ("" if column is None else f", col {column}") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class ProblemSyntaxError(FrontendError):
    pass


class UnknownSymbol(FrontendError):
    pass


class DuplicateDeclaration(FrontendError):
    pass
