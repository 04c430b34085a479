"""Exception types shared across the library."""


class LqDeceiveError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(LqDeceiveError):
    """Input matrices have inconsistent or invalid dimensions."""


class NonSymmetricInput(LqDeceiveError):
    """A matrix required to be symmetric is not, beyond tolerance."""


class NotHurwitz(LqDeceiveError):
    """A matrix required to be strictly Hurwitz has spectral abscissa >= 0 within margin."""


class NotHurwitzInput(LqDeceiveError):
    """The state matrix handed to the maximizing Riccati solver is not Hurwitz."""


class EigenFailure(LqDeceiveError):
    """The eigenvalue computation did not converge."""


class NoStabilizingSolution(LqDeceiveError):
    """The Riccati equation admits no stabilizing positive-definite solution."""


class NotStabilizable(LqDeceiveError):
    """The pair (A, B) fails the stabilizability test."""


class NotControllable(LqDeceiveError):
    """The pair (A, B) fails the controllability test."""


class SpoofedPlantUnstable(LqDeceiveError):
    """A + B_u @ Lambda is not Hurwitz, so the spoofed Riccati equation is ill-posed."""


class OutOfDomain(LqDeceiveError):
    """The deception gain lies outside the domain where the cost is defined."""


class NominalAttackMissing(LqDeceiveError):
    """The nominal attack gain does not exist; the existence certificate is inapplicable."""


class ShiftTooSmall(LqDeceiveError):
    """Deep-stabilizing initialization still leaves the spoofed Riccati equation unsolvable."""


class Blowup(LqDeceiveError):
    """Simulated state norm exceeded the blow-up threshold (unstable loop)."""


class PolicyDestabilized(LqDeceiveError):
    """A policy-iteration step requires a stabilizing policy but got a destabilizing one."""


class RankDeficientData(LqDeceiveError):
    """Trajectory data is not exciting enough for the least-squares learner."""
