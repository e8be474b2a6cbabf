"""Exception and warning types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a pole or logarithmic branch point."""


class ConvergenceError(RuntimeError):
    """An iterative or adaptive procedure failed to reach its tolerance."""


class DegenerateFitError(ValueError):
    """A log-log fit was requested on data that vanish identically."""


class NumericalWarning(UserWarning):
    """Result may be inaccurate (e.g. finite-difference step near round-off)."""


class RegimeWarning(UserWarning):
    """An asymptotic formula was evaluated outside its regime of validity."""
