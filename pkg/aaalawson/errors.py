class AaaLawsonError(RuntimeError):
    """
    Base class for every error raised by aaalawson
    """
    exit_code = 6


class InputError(AaaLawsonError):
    """
    Bad parameters, non-finite data or malformed files.
    `line` is the 1-based line number when the error came from a file.
    """
    exit_code = 4

    def __init__(self, message, line=None):
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)
        self.line = line


class DimensionError(InputError):
    pass


class InsufficientSamplesError(InputError):
    pass


class BuildError(InputError):
    def __init__(self, message, collisions=()):
        super().__init__(message)
        self.collisions = list(collisions)


class ConsistencyError(AaaLawsonError):
    pass


class UnknownProblemError(AaaLawsonError, KeyError):
    exit_code = 4

    def __init__(self, name, suggestion=None):
        message = f'Unknown problem `{name}`'
        if suggestion is not None:
            message += f'. Did you mean `{suggestion}`?'
        super().__init__(message)
        self.name = name
        self.suggestion = suggestion

    def __str__(self):
        return self.args[0]


class CatalogStubError(AaaLawsonError):
    exit_code = 5


class UndefinedWindingError(AaaLawsonError):
    pass


class UnresolvedWindingError(AaaLawsonError):
    pass


class NumericalFailure(AaaLawsonError):
    exit_code = 6
