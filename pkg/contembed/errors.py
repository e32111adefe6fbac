"""Exception hierarchy for contembed.

Every domain failure derives from ContEmbedError so the CLI can map it to exit code 2.
"""


class ContEmbedError(Exception):
    """Base class for all domain errors."""


class MapSyntaxError(ContEmbedError):
    """Bad token in a map, chain or permutation literal."""


class NotSurjective(ContEmbedError):
    pass


class NotAFunction(ContEmbedError):
    pass


class Plateau(ContEmbedError):
    """Two consecutive breakpoints carry the same value."""


class OutOfDomain(ContEmbedError):
    pass


class OutOfRange(ContEmbedError):
    pass


class BadChain(ContEmbedError):
    pass


class NotARefinement(ContEmbedError):
    pass


class MeshTooCoarse(ContEmbedError):
    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound


class SizeMismatch(ContEmbedError):
    pass


class BadIndex(ContEmbedError):
    pass


class BadPermutation(ContEmbedError):
    pass


class TooManyBranches(ContEmbedError):
    pass


class NotAdmissible(ContEmbedError):
    pass


class LayoutFailed(ContEmbedError):
    pass


class DoesNotFit(ContEmbedError):
    pass


class NoSurjectiveInterval(ContEmbedError):
    pass


class BadInterval(ContEmbedError):
    pass


class NotConstructible(ContEmbedError):
    pass


class TooFewSurjectiveIntervals(ContEmbedError):
    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class ZigzagObstruction(ContEmbedError):
    def __init__(self, stage, witness):
        super().__init__(f"stage {stage} is inside a zigzag (a={witness.a}, e={witness.e})")
        self.stage = stage
        self.witness = witness


class BadBlocks(ContEmbedError):
    pass


class MarkNotOnNerve(ContEmbedError):
    pass
