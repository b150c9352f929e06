"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An operation received arguments outside its documented domain."""


class ViolationError(RuntimeError):
    """An exact mathematical check failed on a concrete weight.

    This should never happen for correct inputs; if it does, it points at an
    implementation bug or a genuine counterexample, so the exception carries
    everything needed to reproduce: the serialized weight, the name of the
    failing check and the offending quantity.
    """

    def __init__(self, message: str, *, weight_text: str, check: str, detail: str = ""):
        super().__init__(message)
        self.weight_text = weight_text
        self.check = check
        self.detail = detail
