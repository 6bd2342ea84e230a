import pytest

from coxkit.blueprint import GroupCache
from coxkit.coxeter import standard_coxeter


@pytest.fixture(scope="session")
def ctx():
    return standard_coxeter()


@pytest.fixture(scope="session")
def cache(ctx):
    return GroupCache(ctx)


@pytest.fixture(scope="session")
def st_model():
    from coxkit.quadrangle import build_model
    return build_model(("s", "t"))


@pytest.fixture(scope="session")
def rt_model():
    from coxkit.quadrangle import build_model
    return build_model(("r", "t"))


@pytest.fixture(scope="session")
def theorem_setup(cache):
    from coxkit.reduction import TheoremSetup
    return TheoremSetup(cache)
