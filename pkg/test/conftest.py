import json
import os
import sys

import numpy as np
import pytest

# 프로젝트 루트를 파이썬 경로에 추가 (run_test.py 없이 pytest 를 바로 실행할 때)
current_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(current_dir)
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from dependencies import Settings, configure  # noqa: E402
from utils.space_core import (  # noqa: E402
    IntervalDomain1D, StepFunction1D, double_exponential_space, euclidean_nodes_space,
)


@pytest.fixture(autouse=True, scope="session")
def _settings():
    """테스트 전체에서 스레드 2개, 고정 시드"""
    configure(Settings(threads=2, seed=20240917))
    yield


@pytest.fixture
def line():
    return IntervalDomain1D.real_line()


@pytest.fixture
def indicator01():
    return StepFunction1D.indicator(0.0, 1.0)


@pytest.fixture(scope="session")
def dexp():
    return double_exponential_space(60)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def node_space(rng):
    """직선 위 무작위 노드 12개 (좌표 기반 유한 공간)"""
    coords = np.sort(rng.uniform(-3.0, 3.0, 12))
    return euclidean_nodes_space(coords, rng.uniform(0.5, 2.0, 12))


@pytest.fixture
def json_file(tmp_path):
    """dict 를 임시 JSON 파일로 저장하고 경로를 돌려주는 함수"""
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return write
