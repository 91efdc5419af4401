import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from config_manager import SuiteConfig
from flag_geometry import FlagGeometry
from padic_groups import GroupToolkit
from weights import Weight


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def toolkit():
    return GroupToolkit(2, 1, 3, 6)


@pytest.fixture
def toolkit_d2():
    return GroupToolkit(2, 2, 3, 6)


@pytest.fixture
def small_toolkit():
    return GroupToolkit(1, 1, 3, 4)


@pytest.fixture
def geometry():
    return FlagGeometry(2, 1, 3, 6)


@pytest.fixture
def lam():
    return Weight.from_tau0(2, 1, (3, 1, -1, -3))


@pytest.fixture
def suite_config():
    return SuiteConfig(p=3, n=2, d=1, N=6, r=1, t=3, m=1, k=0, seed=7, budget=200000, samples=5,
                       suites=('all',))


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    for name in ('COLEMAN_P', 'COLEMAN_N', 'COLEMAN_D', 'COLEMAN_PRECISION', 'COLEMAN_SEED',
                 'COLEMAN_BUDGET', 'COLEMAN_REPORTS_DIR', 'COLEMAN_LOG_LEVEL'):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path
