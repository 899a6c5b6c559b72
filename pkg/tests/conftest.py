import pytest

from rawsim import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # jit compilation happens here, outside any timed section
    kernels.warmup()
