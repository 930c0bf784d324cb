"""Hypothesis strategies for small complex matrices."""
import numpy as np
from hypothesis import strategies as st

from sdlab.linalg import random_complex, random_unitary


@st.composite
def complex_matrices(draw, min_n=1, max_n=4, scale=2.0):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return scale * random_complex((n, n), rng)


@st.composite
def hermitian_matrices(draw, min_n=1, max_n=6):
    X = draw(complex_matrices(min_n, max_n))
    return (X + X.conj().T) / 2


@st.composite
def unitaries(draw, n):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_unitary(n, np.random.default_rng(seed))


seeds = st.integers(0, 2**32 - 1)
