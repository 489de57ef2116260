import functools

import pytest

from jacrings import CBulModel, CInfModel, JacobianRing, ModelConfig


@functools.lru_cache(maxsize=None)
def build(g, d, points=("p1",)):
    jac = JacobianRing(ModelConfig(g, d, points))
    ci = CInfModel(jac)
    return jac, ci, CBulModel(ci)


@pytest.fixture
def model():
    return build
