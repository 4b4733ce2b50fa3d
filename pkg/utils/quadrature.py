"""
1차원 수치 적분 노드 생성

구간 양 끝(계단함수의 점프 위치)에 노드를 모으는 graded Gauss–Legendre 규칙과,
전체 직선의 바깥쪽 반직선을 덮는 기하 패널 규칙을 제공합니다.
"""

import logging
from functools import lru_cache
from typing import Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.special import roots_legendre

logger = logging.getLogger(__name__)

MAX_GRADING = 4.0


class QuadratureRule(BaseModel):
    """구간별 graded Gauss–Legendre 설정"""
    nodes_per_panel: int = Field(8, ge=1, le=64)
    panels_per_side: int = Field(6, ge=1, le=256)
    grading: float = Field(2.0, ge=1.0, le=MAX_GRADING)
    # 바깥 반직선: 가장 작은 패널 폭과 잘라내는 반경 (지지 구간 길이 대비 배율)
    min_panel_factor: float = Field(1e-10, gt=0, lt=1)
    far_radius_factor: float = Field(1e8, gt=1)
    ray_ratio: float = Field(2.0, gt=1.0)

    def refined(self, factor: int = 2) -> "QuadratureRule":
        """패널 수와 패널당 노드 수를 factor 배로 늘린 규칙"""
        return self.model_copy(update={
            "panels_per_side": self.panels_per_side * factor,
            "nodes_per_panel": min(self.nodes_per_panel * factor, 64),
        })


DEFAULT_RULE = QuadratureRule()


@lru_cache(maxsize=64)
def _legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(a: float, b: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """[a, b] 위의 n점 Gauss–Legendre 노드와 가중치"""
    x, w = _legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def composite(edges: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """패널 경계 edges 위의 합성 Gauss–Legendre 규칙"""
    x, w = _legendre(n)
    lo = edges[:-1, None]
    half = 0.5 * np.diff(edges)[:, None]
    nodes = lo + half * (x[None, :] + 1.0)
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def graded_edges(a: float, b: float, panels_per_side: int, grading: float) -> np.ndarray:
    """양 끝으로 t^grading 비율로 조밀해지는 패널 경계"""
    mid = 0.5 * (a + b)
    t = np.linspace(0.0, 1.0, panels_per_side + 1) ** grading
    left = a + (mid - a) * t
    right = b - (b - mid) * t[::-1]
    return np.concatenate([left, right[1:]])


def graded_rule(a: float, b: float, rule: QuadratureRule = DEFAULT_RULE,
                grading: float = None) -> Tuple[np.ndarray, np.ndarray]:
    """유한 구간 (a, b)의 graded 합성 규칙"""
    g = rule.grading if grading is None else min(max(grading, 1.0), MAX_GRADING)
    edges = graded_edges(a, b, rule.panels_per_side, g)
    return composite(edges, rule.nodes_per_panel)


def geometric_end_rule(a: float, b: float, h_min: float,
                       rule: QuadratureRule = DEFAULT_RULE) -> Tuple[np.ndarray, np.ndarray]:
    """
    유한 구간 양 끝으로 기하적으로 조밀해지는 합성 규칙

    끝점 특이성 |x − a|^{−σ} 에 대해 패널 수의 지수적 수렴을 얻습니다.
    """
    half = 0.5 * (b - a)
    h = min(h_min, 0.5 * half)
    n_geo = int(np.ceil(np.log(half / h) / np.log(rule.ray_ratio)))
    offsets = h * rule.ray_ratio ** np.arange(n_geo)
    offsets = np.concatenate([[0.0], offsets[offsets < half], [half]])
    left, wl = composite(a + offsets, rule.nodes_per_panel)
    right, wr = composite(b - offsets[::-1], rule.nodes_per_panel)
    return np.concatenate([left, right]), np.concatenate([wl, wr])


def ray_rule(start: float, direction: int, h_min: float, far: float,
             rule: QuadratureRule = DEFAULT_RULE) -> Tuple[np.ndarray, np.ndarray]:
    """
    start에서 direction(+1/-1) 방향으로 거리 far까지의 기하 패널 규칙

    패널 경계는 0, h_min, h_min·ratio, ... 이며 마지막 경계는 far로 맞춥니다.
    """
    n_geo = int(np.ceil(np.log(far / h_min) / np.log(rule.ray_ratio)))
    offsets = h_min * rule.ray_ratio ** np.arange(n_geo + 1)
    offsets = np.concatenate([[0.0], offsets[offsets < far], [far]])
    nodes, weights = composite(offsets, rule.nodes_per_panel)
    logger.debug("반직선 규칙: 패널 %d개, far=%.3g", len(offsets) - 1, far)
    return start + direction * nodes, weights
