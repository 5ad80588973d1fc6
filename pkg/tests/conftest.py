from functools import reduce

import numpy as np
import pytest
from hypothesis import strategies as st

from ddaqc.codes import build_6k2k2, build_gottesman
from ddaqc.pauli import PauliString

# Dense single-qubit matrices, kept independent of ddaqc.simulator so they can
# serve as an oracle for it.
I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
MATS = {"I": I2, "X": X2, "Y": Y2, "Z": Z2}


def dense(p: PauliString) -> np.ndarray:
    """Oracle matrix: i**phase * kron_q X^x_q Z^z_q, qubit 0 leftmost."""
    factors = []
    for q in range(p.n):
        m = I2
        if (p.x >> q) & 1:
            m = m @ X2
        if (p.z >> q) & 1:
            m = m @ Z2
        factors.append(m)
    return (1j**p.phase) * reduce(np.kron, factors, np.eye(1, dtype=complex))


def dense_text(text: str) -> np.ndarray:
    return reduce(np.kron, [MATS[c] for c in text], np.eye(1, dtype=complex))


@st.composite
def paulis(draw, n=None, max_n=16):
    if n is None:
        n = draw(st.integers(1, max_n))
    x = draw(st.integers(0, (1 << n) - 1))
    z = draw(st.integers(0, (1 << n) - 1))
    phase = draw(st.integers(0, 3))
    return PauliString(n, x, z, phase)


@st.composite
def pauli_tuples(draw, size=3, max_n=16):
    n = draw(st.integers(1, max_n))
    return tuple(draw(paulis(n=n)) for _ in range(size))


@pytest.fixture(scope="session")
def code_k1():
    return build_6k2k2(1)


@pytest.fixture(scope="session")
def code_k2():
    return build_6k2k2(2)


@pytest.fixture(scope="session")
def gottesman_k1():
    return build_gottesman(1)
