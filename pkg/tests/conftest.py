import warnings

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import settings
from scipy.spatial.distance import cdist

from coarsekit.metric import Cover, FiniteMetricSpace

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _quiet_symmetrize():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="generating set symmetrized")
        yield


@st.composite
def spaces(draw, min_n=1, max_n=10):
    """Integer points on a line or in the plane (l1), so distances are exact."""
    n = draw(st.integers(min_n, max_n))
    dim = draw(st.sampled_from([1, 2]))
    pts = draw(
        st.lists(
            st.tuples(*[st.integers(0, 12)] * dim), min_size=n, max_size=n, unique=True
        )
    )
    return FiniteMetricSpace(cdist(np.array(pts, float), np.array(pts, float), "cityblock"))


@st.composite
def covers(draw, X, max_elements=6):
    k = draw(st.integers(1, max_elements))
    sets = [set(draw(st.sets(st.integers(0, X.n - 1), min_size=1, max_size=X.n))) for _ in range(k)]
    missing = set(range(X.n)) - set().union(*sets)
    if missing:
        sets.append(missing)
    return Cover.from_sets(X, sets)


@st.composite
def space_and_cover(draw, max_n=10):
    X = draw(spaces(max_n=max_n))
    return X, draw(covers(X))
