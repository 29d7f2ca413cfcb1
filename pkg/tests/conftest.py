import numpy as np
import pytest

from nmcband import KernelParams, find_r1


@pytest.fixture(scope="session")
def params_half():
    return KernelParams(0.5)


@pytest.fixture(scope="session")
def r1_half(params_half):
    return find_r1(params_half)


@pytest.fixture(scope="session")
def params_06():
    return KernelParams(0.6)


@pytest.fixture(scope="session")
def r1_06(params_06):
    return find_r1(params_06)


def rel_err(got, want):
    want = np.asarray(want, dtype=float)
    return np.abs(got - want) / np.maximum(np.abs(want), 1e-300)
