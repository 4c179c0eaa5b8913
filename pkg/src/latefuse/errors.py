"""Exception hierarchy for latefuse.

Every failure the library raises on purpose derives from LateFuseError so
callers can catch one base type. Data-shaped problems (bad files, misaligned
views, unknown labels) and configuration problems (bad hyperparameters, bad
fold counts) are separate branches because the CLI maps them to different
exit codes.
"""


class LateFuseError(Exception):
    """Base class for all latefuse errors."""


class DataError(LateFuseError):
    """A dataset, file, or model artifact is unusable."""


class ConfigError(LateFuseError):
    """A run configuration or hyperparameter setting is invalid."""


# --- dataset validation ---------------------------------------------------

class MisalignedGroup(DataError):
    """A feature group's row count disagrees with the dataset."""


class NonFiniteFeature(DataError):
    """A feature value is NaN or infinite; message names group/row/col."""


class UnknownLabel(DataError):
    """A label does not belong to the label space."""


class EmptyClass(DataError):
    """A class in the label space has no samples."""


class InsufficientClassPopulation(DataError):
    """A class is too small for the requested split."""


class DimensionMismatch(DataError):
    """Input width does not match what a fitted object expects."""


# --- training -------------------------------------------------------------

class SingleClassData(DataError):
    """Training data contains fewer than two classes."""


class TooFewSamplesPerClass(DataError):
    """A class has fewer samples than the requested fold count."""


class BadK(ConfigError):
    """Fold count must be at least 2."""


# --- ensemble -------------------------------------------------------------

class EmptyEnsemble(DataError):
    """No classifier outputs were given to combine."""


class AllZeroPriorities(DataError):
    """Weighted combination requested but every group priority is zero."""


class GroupSchemaMismatch(DataError):
    """Prediction data does not match the group schema the model was trained on."""


class UnknownGroupName(ConfigError):
    """A subset plan names a group the dataset does not have."""


# --- evaluation -----------------------------------------------------------

class LengthMismatch(DataError):
    """Predictions and ground truth have different lengths."""


# --- persistence ----------------------------------------------------------

class IoFailure(DataError):
    """Reading or writing a model file failed."""


class VersionMismatch(DataError):
    """Model file format version is not supported."""


class CorruptModel(DataError):
    """Model file is truncated or fails its checksum."""


# --- synthetic data -------------------------------------------------------

class BadSpec(ConfigError):
    """A synthetic data specification is invalid."""
