import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from orlicz_lab.orlicz import LinearSpliced, PhiA, PhiB, PhiR, Power, QuadLog

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def catalog_instances():
    return [Power(1.5), Power(2.0), Power(4.0), Power(3.0, c=0.5), QuadLog(),
            PhiR(0.5), PhiR(1.0), PhiR(2.0), PhiA(1.0), PhiA(3.0), PhiB(1.0),
            LinearSpliced()]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
