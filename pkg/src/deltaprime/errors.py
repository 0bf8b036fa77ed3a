"""Exception hierarchy shared by the computational modules and the CLI."""


class DeltaPrimeError(Exception):
    """Base class; ``code`` is the machine-readable tag used by the CLI."""

    code = "error"
    exit_status = 1


class DomainError(DeltaPrimeError, ValueError):
    code = "domain_error"
    exit_status = 3


class ConstraintViolation(DomainError):
    code = "constraint_violation"


class PreconditionError(DomainError):
    code = "precondition_error"


class PoleError(DomainError):
    """A residual or chi was evaluated on a pole of tan/cos."""

    code = "pole"


class SingularScattering(DeltaPrimeError, ArithmeticError):
    code = "singular_scattering"
    exit_status = 5


class SolverFailure(DeltaPrimeError, RuntimeError):
    code = "solver_failure"
    exit_status = 5


class NotFound(SolverFailure):
    code = "not_found"


class InfeasibleTarget(DeltaPrimeError):
    code = "infeasible_target"
    exit_status = 4


class VerificationFailed(DeltaPrimeError):
    code = "verification_failed"
    exit_status = 6
