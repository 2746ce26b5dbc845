"""Exception hierarchy shared across the library.

All numerical failure modes derive from :class:`NumericalFailure` so callers
(and the CLI) can distinguish "the computation could not be certified" from
programming errors or bad configuration.
"""


class NumericalFailure(Exception):
    """Base class for all certified-computation failures."""


# -- subspace geometry ------------------------------------------------------

class DegenerateSum(NumericalFailure):
    """A pair of subspaces fails the direct-sum condition."""


class DimensionMismatch(NumericalFailure):
    """Subspace dimensions are incompatible with the requested operation."""


class ConditioningFailure(NumericalFailure):
    """No well-conditioned basis was found within the refinement budget."""


# -- cocycles ----------------------------------------------------------------

class WindowTooShort(NumericalFailure):
    """The symbol window does not cover the requested number of steps."""


class BlockDegeneracy(NumericalFailure):
    """A spectral block boundary is not resolved at the working tolerance."""


class NonConvergence(NumericalFailure):
    """Splitting estimates at two window lengths disagree beyond tolerance."""


class RestrictedSingular(NumericalFailure):
    """A restricted one-step map is numerically singular."""


class NotComplementary(NumericalFailure):
    """A candidate family fails its direct-sum precondition."""


class EqualExponents(NumericalFailure):
    """The estimated top exponents are not separated at tolerance."""


# -- interval maps -----------------------------------------------------------

class NonAffineBranch(NumericalFailure):
    """An exact operation was requested for a non-affine branch."""


class QuadratureFailure(NumericalFailure):
    """Bin-transition measures could not be computed to tolerance."""


class ExpansionTooWeak(NumericalFailure):
    """The map's minimal derivative does not meet the required expansion."""


class PreconditionANotLessThan1(NumericalFailure):
    """The contraction coefficient a_n is not below 1."""


# -- subshifts ----------------------------------------------------------------

class IllegalWord(NumericalFailure):
    """A word or point violates the transition structure."""


class NotIrreducible(NumericalFailure):
    """The shift lacks the irreducibility/branching the construction needs."""


class NotAntisymmetric(NumericalFailure):
    """Profile check failed: not antisymmetric under symbol complement."""


class NotMonotone(NumericalFailure):
    """Profile check failed: not monotone for the coordinatewise order."""


class AmplitudeTooLarge(NumericalFailure):
    """Profile amplitude leaves the admissible range."""


# -- harness -------------------------------------------------------------------

class ConfigError(Exception):
    """Invalid run configuration (exit code 2; not a numerical failure)."""


class UnknownField(ConfigError):
    """A selector referenced a field absent from the records."""
