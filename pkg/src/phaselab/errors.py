"""Exception types shared across phaselab."""


class PhaselabError(Exception):
    """Base class for library errors."""


class DomainError(PhaselabError, ValueError):
    """A numeric argument lies outside the domain of a formula."""


class DegenerateInputError(PhaselabError, ValueError):
    """The input makes the requested quantity meaningless (e.g. a constant constraint)."""


class ResourceLimitError(PhaselabError, RuntimeError):
    """An exact computation would exceed its enumeration budget."""


class ConfigError(PhaselabError, ValueError):
    """An experiment configuration failed validation.

    ``field`` names the offending configuration key.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
