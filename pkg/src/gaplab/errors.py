"""Exception types shared across gaplab."""


class GapLabError(Exception):
    pass


class InvalidArgument(GapLabError, ValueError):
    pass


class InvalidPartition(InvalidArgument):
    """Pieces do not tile the fundamental domain exactly once."""


class NotMaximal(InvalidArgument):
    """Two adjacent pieces describe one linear function."""


class PreconditionViolation(GapLabError):
    """The statement being verified does not claim anything for these inputs."""


class HypothesisViolation(PreconditionViolation):
    pass


class SearchFailure(GapLabError):
    pass


class Unsupported(GapLabError):
    pass
