"""Exception types shared across the pipeline.

Each error's class name doubles as its machine-readable code; the CLI
renders failures as a single line ``ERROR <code>: <detail>``.
"""


class InfoClusterError(Exception):
    """Base class for all pipeline errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# dataset
class MissingSegmentation(InfoClusterError):
    pass


class UnreadableImage(InfoClusterError):
    pass


class EmptyCorpus(InfoClusterError):
    pass


class InvalidSpec(InfoClusterError):
    pass


# preprocess
class NoBuildingPixels(InfoClusterError):
    pass


class SizeMismatch(InfoClusterError):
    pass


# infogan
class ShapeMismatch(InfoClusterError):
    pass


class NonFiniteLoss(InfoClusterError):
    pass


class CorpusTooSmall(InfoClusterError):
    pass


class InvalidGridShape(InfoClusterError):
    pass


# baseline
class TooFewSamples(InfoClusterError):
    pass


class NonFiniteInput(InfoClusterError):
    pass


class MixedSizes(InfoClusterError):
    pass


# evaluate
class SingleCluster(InfoClusterError):
    pass


class LengthMismatch(InfoClusterError):
    pass


class DegenerateSplit(InfoClusterError):
    pass


# cli
class UnknownCommand(InfoClusterError):
    pass


class ConfigError(InfoClusterError):
    pass


class EmptyInput(InfoClusterError):
    pass
