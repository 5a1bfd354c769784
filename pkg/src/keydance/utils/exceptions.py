class KeydanceException(Exception):
    """Base exception for keydance errors."""

    exit_code = 1

class UsageError(KeydanceException):
    """Raised when an API or command is used incorrectly."""

    exit_code = 2

class ConfigError(KeydanceException):
    """Raised when configuration cannot be loaded or is inconsistent."""

    exit_code = 2

class ValidationError(KeydanceException):
    """Raised when validation fails."""

    exit_code = 3

class DimensionError(ValidationError):
    """Raised when tensor or sequence shapes do not line up."""

class FormatError(ValidationError):
    """Raised when a file does not follow the expected binary or JSON format."""

class UndefinedMetricError(ValidationError):
    """Raised when a metric is undefined for its input (no keys, frozen motion, no beats)."""

    def __init__(self, metric: str, reason: str):
        super().__init__(f"{metric} undefined: {reason}")
        self.metric = metric
        self.reason = reason

class NumericError(KeydanceException):
    """Raised when a computation produces NaN or Inf."""

    exit_code = 4

class TrainingDivergedError(NumericError):
    """Raised when the training loss stops being finite."""

    def __init__(self, step: int, lr: float, detail: str):
        super().__init__(f"training diverged at step {step} (lr={lr:g}): {detail}")
        self.step = step
        self.lr = lr
