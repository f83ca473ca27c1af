class ParameterError(ValueError):
    """An argument is outside its documented domain (even window, sigma <= 0, ...)."""


class InputError(ValueError):
    """Input images are unusable together, e.g. mismatched dimensions."""


class NumericalWarning(RuntimeWarning):
    """An iterative solver did not behave as expected; the best iterate was kept."""
