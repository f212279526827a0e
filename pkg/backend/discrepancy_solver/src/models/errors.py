"""Exception hierarchy shared by the models, services and CLI routes."""


class DiscrepancySolverError(Exception):
    """Base class; `status` is the short code written to sweep CSV rows."""

    status = 'error'


class RejectedInputError(DiscrepancySolverError, ValueError):
    status = 'rejected_input'


class InvalidConfigError(DiscrepancySolverError, ValueError):
    status = 'invalid_config'


class UnsupportedOperationError(DiscrepancySolverError):
    status = 'unsupported'


class NonConvergenceError(DiscrepancySolverError):
    """CG hit its iteration cap before the gap certificate held."""

    status = 'nonconvergence'

    def __init__(self, message, best_u, best_certificate, iterations):
        super().__init__(message)
        self.best_u = best_u
        self.best_certificate = best_certificate
        self.iterations = iterations


class AssumptionViolationError(DiscrepancySolverError):
    """Data is noise-dominated: ||f_delta|| <= C*delta."""

    status = 'assumption'


class NoRootError(DiscrepancySolverError):
    status = 'no_root'

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class RootToleranceError(DiscrepancySolverError):
    """Bisection cap reached; carries the best iterate seen."""

    status = 'root_tol'

    def __init__(self, message, best_epsilon, best_u, best_discrepancy, trace=()):
        super().__init__(message)
        self.best_epsilon = best_epsilon
        self.best_u = best_u
        self.best_discrepancy = best_discrepancy
        self.trace = list(trace)


class OutputPathError(DiscrepancySolverError):
    status = 'output'
