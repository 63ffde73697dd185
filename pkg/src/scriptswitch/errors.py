"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class ScriptSwitchError(Exception):
    exit_code = 1


class ConfigError(ScriptSwitchError):
    exit_code = 1


class DataError(ScriptSwitchError, ValueError):
    exit_code = 2


class TrainingError(ScriptSwitchError):
    exit_code = 3


class ModelFormatError(DataError):
    """Raised when a serialized model or profile cannot be read back."""


class StageError(ScriptSwitchError):
    """Wraps a failure inside a named pipeline stage."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)
        super().__init__(f"stage '{stage}' failed: {cause}")
