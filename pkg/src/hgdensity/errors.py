"""Exception hierarchy; every domain error is a ``ValueError``."""


class HGError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""


class ParameterError(HGError):
    pass


class InvalidClassError(HGError):
    """A residue that should be a unit is not coprime to the modulus."""


class NotPIntegralError(HGError):
    pass


class BadPrimeError(HGError):
    pass


class NotSplitError(HGError):
    pass


class NoWitnessError(HGError):
    pass
