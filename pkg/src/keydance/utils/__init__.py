from .exceptions import (
    KeydanceException, UsageError, ConfigError, ValidationError, DimensionError,
    FormatError, UndefinedMetricError, NumericError, TrainingDivergedError
)
from .logging import configure_logging, get_logger
