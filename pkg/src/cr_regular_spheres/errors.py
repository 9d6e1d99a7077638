from typing import Optional


class CRSphereError(Exception):
    pass


class DimensionError(CRSphereError, ValueError):
    pass


class EmbeddingError(CRSphereError, ValueError):
    pass


class ConfigError(CRSphereError, ValueError):
    pass


class SerializationError(CRSphereError, ValueError):
    pass


class NonRealFunctionError(CRSphereError, ValueError):
    pass


class OffSphereError(CRSphereError, ValueError):
    def __init__(self, distance: float, tol: float):
        self.distance = distance
        self.tol = tol
        super().__init__(f'point is off the unit sphere: |‖z‖ - 1| = {distance:.3e} > {tol:.1e}')


class RankToleranceError(CRSphereError, ArithmeticError):
    def __init__(self, message: str, gap: Optional[float] = None):
        self.gap = gap
        if gap is not None:
            message = f'{message} (singular-value gap {gap:.3e})'
        super().__init__(message)


class CriterionDisagreement(CRSphereError):
    def __init__(self, result):
        self.result = result
        super().__init__(f'CR criteria disagree at z={list(result.z)}: {result.describe()}')
