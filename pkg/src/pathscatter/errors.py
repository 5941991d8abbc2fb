"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the command-line
front end can emit structured failures.
"""


class ScatteringError(Exception):
    code = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        out = {"code": self.code, "message": str(self)}
        for key, val in self.details.items():
            try:
                out[key] = float(val)
            except (TypeError, ValueError):
                out[key] = val if isinstance(val, (str, int, list, dict)) else repr(val)
        return out


class DomainError(ScatteringError, ValueError):
    code = "domain"


class DivergenceError(ScatteringError, ValueError):
    code = "divergent"


class UnsupportedPotentialError(ScatteringError, TypeError):
    code = "unsupported_potential"


class QuadratureError(ScatteringError, ArithmeticError):
    """Raised when an integral fails to reach its tolerance.

    ``best`` holds the best available estimate and ``err_est`` its error.
    """

    code = "quadrature_nonconvergence"

    def __init__(self, message, best=None, err_est=None, **details):
        super().__init__(message, **details)
        self.best = best
        self.err_est = err_est


class BracketError(ScatteringError, ArithmeticError):
    code = "no_bracket"


class ConvergenceError(ScatteringError, ArithmeticError):
    code = "nonconvergence"


class CalibrationError(ScatteringError, ArithmeticError):
    code = "calibration_failed"


class DegenerateCalibrationError(CalibrationError):
    code = "degenerate_calibration"


class ConfigError(ScatteringError, ValueError):
    code = "usage"
