"""
계산 모듈 패키지

공간(space_core), 측도 조건(conditions), 함수 공간 노름(function_spaces),
최대 연산자(operators), MS 범함수(ms_functional, ms_line), 재현 시나리오(scenarios)가 이 패키지에 있습니다.
"""

# __all__ = ["space_core", "conditions", "function_spaces", "operators", "ms_functional", "scenarios"]
