"""
共享测试夹具
Lyapunov 指数谱和长轨迹很贵，每个会话只算一次
"""
import pytest

from mcg.services.analysis import LyapunovSettings, lyapunov_spectrum
from mcg.services.integrator import IntegrationSettings, integrate
from mcg.services.model import PhysicalParams, make_field, study_params

START = (0.1, 0.1, 0.1)


@pytest.fixture
def study():
    return study_params(0.5)


@pytest.fixture
def physical():
    return PhysicalParams(capacitance=0.5, inductance=12.2, r0=60.0, beta=3000.0, t0=300.0,
                          heat_capacitance=20.0, dissipation=12.0, a=-6.0, b=3.0)


@pytest.fixture(scope="session")
def spectra():
    """按 α 缓存默认设置下的指数谱"""
    cache = {}

    def get(alpha, s0=START):
        key = (alpha, tuple(s0))
        if key not in cache:
            cache[key] = lyapunov_spectrum(study_params(alpha), s0, LyapunovSettings())
        return cache[key]

    return get


@pytest.fixture(scope="session")
def trajectories():
    """按 α 缓存默认设置下的轨迹"""
    cache = {}

    def get(alpha, settings=None):
        settings = settings or IntegrationSettings()
        key = (alpha, settings)
        if key not in cache:
            cache[key] = integrate(make_field(study_params(alpha)), START, settings)
        return cache[key]

    return get
