"""Exception types shared across the package."""


class SbmfitError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(SbmfitError, ValueError):
    """Invalid model parameters (probabilities out of range, bad pi, ...)."""


class DegenerateBlockError(SbmfitError, ValueError):
    """A block average is undefined because a community is empty or a singleton.

    Carries the offending block pair so sweeps can report which community
    collapsed instead of silently propagating NaNs.
    """

    def __init__(self, a, b, message=None):
        self.block = (a, b)
        super().__init__(message or f"degenerate block ({a}, {b}): empty or singleton community")


class InfeasibleError(SbmfitError, ValueError):
    """No labeling satisfies the minimum community-size constraint."""


class SearchSpaceError(SbmfitError, ValueError):
    """Exhaustive search refused because the label space is too large."""
