"""Exception types shared across the package."""

from __future__ import annotations


class RMPIRError(Exception):
    """Base class for every error raised by rmpir."""


class NoSolution(RMPIRError):
    """A linear system over GF(2) is inconsistent."""


class RankDeficient(RMPIRError):
    """A matrix expected to have full row rank does not."""


class Singular(RMPIRError):
    """A square submatrix expected to be invertible is singular."""


class SingularMap(Singular):
    """The linear part of an affine map is not invertible."""


class MismatchedVariableCount(RMPIRError, ValueError):
    pass


class LengthMismatch(RMPIRError, ValueError):
    pass


class DimensionMismatch(RMPIRError, ValueError):
    pass


class InvalidOrder(RMPIRError, ValueError):
    pass


class NoDual(RMPIRError):
    """The dual of RM(m, m) is the zero code, which has no generator matrix."""


class DecodingFailure(RMPIRError):
    """No codeword lies within the error/erasure budget of the received word."""


class Infeasible(RMPIRError):
    """Scheme parameters violate one or more of the feasibility inequalities."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("infeasible parameters: " + "; ".join(self.violations))


class PlanNotFound(RMPIRError):
    def __init__(self, message: str, rank: int, target: int):
        self.rank = rank
        self.target = target
        super().__init__(f"{message} (rank {rank} of {target})")


class InconsistentLedger(RMPIRError):
    """A recovered equation contradicts what the ledger already knows."""


class KnowabilityError(RMPIRError):
    """A response term above the decodable degree has an unknown coefficient."""


class AdversaryBudgetExceeded(RMPIRError, ValueError):
    pass


class EnumerationTooLarge(RMPIRError):
    pass


class MalformedDatabase(RMPIRError, ValueError):
    pass
