"""Exceptions raised across the toolkit.

Input problems (bad model text, malformed design files, wrong parameter
sets) derive from ValueError through InputError, numerical failures
(integration, stationary solves, covariance factorizations) derive from
ArithmeticError through NumericalError and carry the pipeline stage
in which they happened.

"""


class LnaFimError(Exception):
    """Root of every exception raised intentionally by lna_fim"""


class InputError(LnaFimError, ValueError):
    """Raised when a model, design, parameter or sweep input is invalid"""


class ParseError(InputError):

    def __init__(self, message, line=None, column=None):
        """Error raised by the reaction network parser, which records the
        position in the model source where parsing stopped

        Arguments:

        message: str
            a human readable description of what was expected or found
        line: int
            the one-based line number in the model source, or None when the
            error is not attached to a position
        column: int
            the one-based column number in the model source

        """

        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super(ParseError, self).__init__(message)


class DesignError(InputError):
    """Raised when an observation design or sweep specification is invalid"""


class ParameterError(InputError):
    """Raised when a parameter point does not match its network"""


class NumericalError(LnaFimError, ArithmeticError):

    def __init__(self, message, stage=None):
        """Error raised when a numerical stage of the pipeline fails

        Arguments:

        message: str
            a human readable description of the failure
        stage: str
            the name of the pipeline stage that failed, for example
            "integration" or "stationary_state"

        """

        self.stage = stage
        if stage is not None:
            message = f"[{stage}] {message}"
        super(NumericalError, self).__init__(message)


class EvaluationError(NumericalError):
    """Raised when a rate expression cannot be evaluated"""


class NegativeRateError(NumericalError):
    """Raised when a transition rate is negative beyond roundoff"""


class IntegrationError(NumericalError):
    """Raised when the ODE integrator fails or exhausts its step budget"""


class StationaryStateError(NumericalError):
    """Raised when no stable stationary LNA solution can be found"""


class CovarianceError(NumericalError):
    """Raised when an observation covariance is not positive definite"""


class NeutralSpaceError(NumericalError):
    """Raised when a neutral space cross-section is unbounded"""


class LnaFimWarning(UserWarning):
    """Root of the warnings that are collected into run manifests"""


class ClampedRateWarning(LnaFimWarning):
    """Issued when slightly negative transition rates are clamped to zero"""


class JitterWarning(LnaFimWarning):
    """Issued when diagonal jitter is added to an observation covariance"""


class SingularFimWarning(LnaFimWarning):
    """Issued when a Fisher information matrix is rank deficient"""


class RegimeComparisonWarning(LnaFimWarning):
    """Issued when deterministic and stochastic regimes are compared"""
