"""
계산 오류 정의 모듈

모든 예외는 HomTypeError를 상속하며, CLI가 그대로 종료 코드로 변환할 수 있도록
exit_code(1: 계산 오류, 2: 입력/사용법 오류)와 detail 메시지를 함께 가집니다.
"""

from typing import Optional


class HomTypeError(Exception):
    """패키지 공통 예외"""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code

    def __str__(self) -> str:
        return f"{type(self).__name__}: {self.detail}"


class InvalidInput(HomTypeError):
    exit_code = 2


class SpecMismatch(HomTypeError):
    exit_code = 2


# --- 공간 구성 ---

class AsymmetricDistance(InvalidInput):
    pass


class ZeroDistanceDistinctPoints(InvalidInput):
    pass


class NonpositiveMass(InvalidInput):
    pass


class QuasiTriangleViolation(InvalidInput):
    pass


class UnknownPoint(InvalidInput):
    pass


class SamePoint(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class EmptyDomain(InvalidInput):
    pass


class Overflow(HomTypeError):
    pass


# --- 측도 조건 ---

class WindowTooNarrow(InvalidInput):
    pass


class EmptySubset(InvalidInput):
    pass


# --- 노름 계산 ---

class NonconvergentBisection(HomTypeError):
    pass


class EmptyFamily(InvalidInput):
    pass


class NonpositiveWeight(InvalidInput):
    pass


class InvalidOperatorNorm(InvalidInput):
    pass


class UncoveredPoint(InvalidInput):
    pass


# --- MS 범함수 ---

class SOutOfRange(InvalidInput):
    pass


class DiagonalOnly(InvalidInput):
    pass


class SEqualsOne(InvalidInput):
    pass


class UnknownScenario(InvalidInput):
    pass


__all__ = [
    "HomTypeError", "InvalidInput", "SpecMismatch",
    "AsymmetricDistance", "ZeroDistanceDistinctPoints", "NonpositiveMass",
    "QuasiTriangleViolation", "UnknownPoint", "SamePoint", "LengthMismatch",
    "EmptyDomain", "Overflow", "WindowTooNarrow", "EmptySubset",
    "NonconvergentBisection", "EmptyFamily", "NonpositiveWeight",
    "InvalidOperatorNorm", "UncoveredPoint", "SOutOfRange", "DiagonalOnly",
    "SEqualsOne", "UnknownScenario",
]
