"""
유한 공간의 공 집합

canonical 집합은 각 중심에서 서로 다른 거리 사이의 로그 중점을 반지름으로 잡아
모든 서로 다른 열린 공을 정확히 한 번씩 담습니다.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np
from scipy.special import logsumexp

from utils.errors import EmptyFamily, UncoveredPoint
from utils.norm_specs import BallFamilySpec
from utils.space_core import FinitePointSpace, PointId

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class BallFamily:
    centers: np.ndarray
    log_radii: np.ndarray
    membership: np.ndarray  # (공 수, 점 수) bool
    log_measures: np.ndarray

    @property
    def n_balls(self) -> int:
        return len(self.centers)

    @property
    def balls(self) -> List[Tuple[int, float]]:
        return list(zip(self.centers.tolist(), self.log_radii.tolist()))

    def covers(self) -> bool:
        return bool(self.membership.any(axis=0).all())

    def require_cover(self) -> None:
        missing = np.flatnonzero(~self.membership.any(axis=0))
        if missing.size:
            raise UncoveredPoint(f"어떤 공에도 속하지 않는 점이 있습니다: {missing[:5].tolist()}")

    def membership_of(self, space: FinitePointSpace, center: PointId, log_radius: float) -> np.ndarray:
        i = space.point_index(center)
        return space.log_distances[i] < log_radius

    def weighted_averages(self, space: FinitePointSpace, values) -> np.ndarray:
        """각 공의 μ-평균 (질량은 최대값으로 정규화해 넘침 방지)"""
        w = np.exp(space.log_masses - space.log_masses.max())
        num = self.membership @ (np.asarray(values, dtype=float) * w)
        den = self.membership @ w
        return num / den

    @classmethod
    def _build(cls, space: FinitePointSpace, centers, log_radii) -> "BallFamily":
        centers = np.asarray(centers, dtype=int)
        log_radii = np.asarray(log_radii, dtype=float)
        membership = space.log_distances[centers] < log_radii[:, None]
        masked = np.where(membership, space.log_masses[None, :], -np.inf)
        return cls(centers, log_radii, membership, logsumexp(masked, axis=1))

    @classmethod
    def from_balls(cls, space: FinitePointSpace, balls: Iterable[Tuple[PointId, float]]) -> "BallFamily":
        """(중심, ln 반지름) 목록으로 만든 집합, 같은 중심·같은 원소의 공은 하나로 합침"""
        centers, radii, seen = [], [], set()
        for center, log_r in balls:
            i = space.point_index(center)
            key = (i, (space.log_distances[i] < log_r).tobytes())
            if key in seen:
                continue
            seen.add(key)
            centers.append(i)
            radii.append(log_r)
        if not centers:
            raise EmptyFamily("공 목록이 비어 있습니다")
        return cls._build(space, centers, radii)


def enumerate_ball_family(space: FinitePointSpace) -> BallFamily:
    """각 중심마다 서로 다른 원소 집합을 갖는 열린 공 하나씩"""
    centers, radii = [], []
    for i in range(space.n_points):
        row = space.log_distances[i]
        d = np.unique(row[np.isfinite(row)])
        if d.size == 0:
            centers.append(i)
            radii.append(0.0)
            continue
        cuts = np.concatenate([[d[0] - LN2], 0.5 * (d[:-1] + d[1:]), [d[-1] + LN2]])
        centers.extend([i] * len(cuts))
        radii.extend(cuts.tolist())
    family = BallFamily._build(space, centers, radii)
    logger.debug("canonical 공 집합: %d개 (점 %d개)", family.n_balls, space.n_points)
    return family


def full_space_family(space: FinitePointSpace) -> BallFamily:
    finite = space.log_distances[np.isfinite(space.log_distances)]
    log_r = float(finite.max()) + LN2 if finite.size else 0.0
    return BallFamily._build(space, [0], [log_r])


def resolve_family(space: FinitePointSpace, spec: BallFamilySpec) -> BallFamily:
    if spec.kind == "canonical":
        return enumerate_ball_family(space)
    if spec.kind == "full_space":
        return full_space_family(space)
    return BallFamily.from_balls(space, [(b.center, b.log_radius) for b in spec.balls])
