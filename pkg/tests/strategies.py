"""Hypothesis strategies built on seeded generators (matrices come from numpy)."""

import numpy as np
from hypothesis import strategies as st

from qig.matcore import random_density, random_hermitian, random_traceless

seeds = st.integers(min_value=0, max_value=2**63 - 1)
dims = st.sampled_from([2, 3, 4])


@st.composite
def densities(draw, dim=None):
    n = draw(dims) if dim is None else dim
    return random_density(n, np.random.default_rng(draw(seeds)))


@st.composite
def state_and_observable(draw, traceless=False):
    n = draw(dims)
    rng = np.random.default_rng(draw(seeds))
    rho = random_density(n, rng)
    X = random_traceless(n, rng) if traceless else random_hermitian(n, rng)
    return rho, X


@st.composite
def state_pair(draw):
    n = draw(dims)
    rng = np.random.default_rng(draw(seeds))
    return random_density(n, rng), random_density(n, rng), rng
