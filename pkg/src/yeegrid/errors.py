"""Exception hierarchy shared by every stage of the mesher."""


class MeshError(Exception):
    """Base class for all errors raised by yeegrid."""


class InvalidArgumentError(MeshError, ValueError):
    pass


class InvalidBandError(InvalidArgumentError):
    pass


class ParameterError(InvalidArgumentError):
    pass


class SceneError(MeshError):
    pass


class MalformedSceneError(SceneError):
    pass


class UnknownMaterialError(SceneError):
    pass


class MissingMeshFileError(SceneError, FileNotFoundError):
    pass


class CycleError(SceneError):
    pass


class DuplicateIdError(SceneError):
    pass


class StlError(MeshError):
    pass


class TruncatedStlError(StlError):
    pass


class EmptyMeshError(StlError):
    pass


class NonFiniteCoordinateError(StlError):
    pass


class EmptyGeometryError(MeshError):
    pass
