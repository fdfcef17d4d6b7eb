import pytest

import projcurve


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Pay any JIT compilation cost once, before timed tests run.
    projcurve.warmup()
