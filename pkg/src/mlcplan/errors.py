"""Exception hierarchy shared across the package."""


class MlcPlanError(Exception):
    """Base class for all errors raised by mlcplan."""


# data ---------------------------------------------------------------------

class DataError(MlcPlanError):
    pass


class MissingFile(DataError, FileNotFoundError):
    pass


class NonNumericCell(DataError):
    def __init__(self, row, col, value=None):
        super().__init__(f"non-numeric cell at row {row}, column {col}: {value!r}")
        self.row, self.col = row, col


class NonBinaryLabel(DataError):
    def __init__(self, row, col, value=None):
        super().__init__(f"non-binary label at row {row}, column {col}: {value!r}")
        self.row, self.col = row, col


class LabelCountExceedsColumns(DataError):
    pass


class MissingRelationMarker(DataError):
    pass


class UnsupportedAttributeType(DataError):
    def __init__(self, name, kind=None):
        super().__init__(f"unsupported attribute type for {name!r}: {kind}")
        self.name = name


class DegenerateSplit(DataError):
    pass


class InvalidDataset(DataError):
    pass


# losses / bayes -------------------------------------------------------------

class LossError(MlcPlanError, ValueError):
    pass


class OutOfRangeScore(LossError):
    pass


class ShapeMismatch(LossError):
    pass


class NonBinaryEntry(LossError):
    pass


class KOutOfRange(LossError):
    pass


class LengthMismatch(LossError):
    pass


class TooManyLabels(MlcPlanError, ValueError):
    pass


class InvalidDistribution(MlcPlanError, ValueError):
    pass


# learners -------------------------------------------------------------------

class LearnerError(MlcPlanError):
    pass


class EmptyData(LearnerError):
    pass


class InvalidParam(LearnerError, ValueError):
    def __init__(self, name, message=""):
        super().__init__(f"invalid parameter {name!r}" + (f": {message}" if message else ""))
        self.name = name


class NumericalFailure(LearnerError):
    pass


class DimensionMismatch(LearnerError, ValueError):
    pass


class TooFewClasses(LearnerError, ValueError):
    pass


class EvaluationTimeout(MlcPlanError):
    """Raised cooperatively when the active evaluation deadline has passed."""


class LabelFitError(LearnerError):
    """A base-learner failure tagged with the label (or chain position) it occurred on."""

    def __init__(self, label, cause):
        super().__init__(f"label {label}: {cause}")
        self.label = label
        self.cause = cause


class AllCandidatesFailed(LearnerError):
    def __init__(self, label):
        super().__init__(f"every candidate failed on label {label}")
        self.label = label


# search space -----------------------------------------------------------------

class SearchSpaceError(MlcPlanError):
    pass


class UnsatisfiableInterface(SearchSpaceError):
    pass


class DuplicateComponent(SearchSpaceError):
    pass


class MalformedParam(SearchSpaceError):
    pass


class UnknownInterface(SearchSpaceError):
    pass


class LeafNode(SearchSpaceError):
    pass


class NotALeaf(SearchSpaceError):
    pass


class DeadEnd(SearchSpaceError):
    pass


class ExplosionGuard(SearchSpaceError):
    pass


# optimizers / evaluation ------------------------------------------------------

class OptimizerError(MlcPlanError):
    pass


class EmptySpace(OptimizerError):
    pass


class EmptyCandidates(OptimizerError, ValueError):
    pass


class NegativeSigma(OptimizerError, ValueError):
    pass


class InvalidConfig(OptimizerError, ValueError):
    pass


class AllRepeatsFailed(MlcPlanError):
    pass


class InvalidSize(MlcPlanError, ValueError):
    pass
