import itertools
import random

import numpy as np
import pytest
from hypothesis import given

from ddaqc.codes import flat_index
from ddaqc.errors import DimensionError, PauliParseError
from ddaqc.pauli import (
    PauliString,
    commutes,
    format_pauli,
    multiply,
    parse_pauli,
    symplectic_product,
    weight,
)

from .conftest import dense, dense_text, pauli_tuples, paulis


def P(text):
    return parse_pauli(text)


class TestMultiply:
    def test_self_inverse(self):
        x1 = P("X")
        assert multiply(x1, x1) == PauliString.identity(1)

    def test_x_times_z_is_minus_i_y(self):
        prod = multiply(P("X"), P("Z"))
        assert (prod.x, prod.z) == (1, 1)
        assert format_pauli(prod) == "-iY"
        np.testing.assert_allclose(dense(prod), -1j * dense_text("Y"))

    def test_format_of_xi_times_zi(self):
        # oracle: 2x2 product X @ Z = -iY, tensored with identity
        prod = multiply(P("XI"), P("ZI"))
        np.testing.assert_allclose(dense(prod), np.kron(dense_text("X") @ dense_text("Z"), np.eye(2)))
        assert format_pauli(prod) == "-iYI"

    def test_two_body_reduction_product(self):
        n = 6
        q = flat_index
        a = PauliString.x_type(n, [q(1, "0"), q(1, "x")])
        b = PauliString.x_type(n, [q(2, "0"), q(2, "x")])
        s = PauliString.x_type(n, [q(1, "x"), q(2, "x")])
        assert multiply(multiply(a, b), s) == PauliString.x_type(n, [q(1, "0"), q(2, "0")])

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            multiply(P("X"), P("XX"))

    @given(paulis(max_n=4), paulis(max_n=4))
    def test_matches_dense_product(self, p, q):
        if p.n != q.n:
            q = PauliString(p.n, q.x & ((1 << p.n) - 1), q.z & ((1 << p.n) - 1), q.phase)
        np.testing.assert_allclose(dense(multiply(p, q)), dense(p) @ dense(q), atol=1e-12)

    @given(paulis())
    def test_inverse_gives_identity(self, p):
        # P^-1 = P^dagger; in x/z form the inverse is the same bits with the conjugate phase
        inv = PauliString(p.n, p.x, p.z, -p.phase - 2 * bin(p.x & p.z).count("1"))
        assert multiply(p, inv) == PauliString.identity(p.n)

    @given(pauli_tuples())
    def test_associative(self, t):
        a, b, c = t
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))

    def test_associative_10k_random_triples(self):
        rng = random.Random(1234)
        for _ in range(10_000):
            n = rng.randint(1, 16)
            a, b, c = (PauliString(n, rng.getrandbits(n), rng.getrandbits(n), rng.randrange(4)) for _ in range(3))
            assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


class TestCommutes:
    def test_xx_zz(self):
        assert commutes(P("XX"), P("ZZ"))

    def test_x_z(self):
        assert not commutes(P("X"), P("Z"))

    def test_gottesman_k1_generators(self):
        assert commutes(P("XXXX"), P("ZZZZ"))

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            commutes(P("X"), P("ZZ"))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_agrees_with_dense_commutator(self, n):
        ops = ["".join(t) for t in itertools.product("IXYZ", repeat=n)]
        mats = {o: dense_text(o) for o in ops}
        for a, b in itertools.product(ops, repeat=2):
            comm = mats[a] @ mats[b] - mats[b] @ mats[a]
            assert commutes(P(a), P(b)) == (np.linalg.norm(comm) < 1e-12), (a, b)

    @given(pauli_tuples())
    def test_bilinear(self, t):
        p, q, r = t
        assert symplectic_product(multiply(p, q), r) == symplectic_product(p, r) ^ symplectic_product(q, r)

    @given(pauli_tuples(size=2))
    def test_symmetric(self, t):
        p, q = t
        assert symplectic_product(p, q) == symplectic_product(q, p)


class TestWeight:
    def test_identity(self):
        assert weight(PauliString.identity(6)) == 0

    def test_single_body_logical(self):
        n = 6
        assert weight(PauliString.x_type(n, [flat_index(1, "x"), flat_index(1, "0")])) == 2

    def test_many_body_generator_k2(self):
        n = 12
        g = PauliString.x_type(n, [flat_index(i, r) for i in range(1, 5) for r in "0z"])
        assert weight(g) == 8

    @given(pauli_tuples(size=2))
    def test_subadditive(self, t):
        p, q = t
        assert weight(multiply(p, q)) <= weight(p) + weight(q)
        assert 0 <= weight(p) <= p.n


class TestText:
    def test_parse_xixi(self):
        p = P("XIXI")
        assert (p.n, p.x_bits, p.z_bits) == (4, (1, 0, 1, 0), (0, 0, 0, 0))

    def test_parse_zz(self):
        p = P("ZZ")
        assert (p.n, p.x_bits, p.z_bits) == (2, (0, 0), (1, 1))

    @pytest.mark.parametrize("text", ["XIQ", "xx", "+-X", "X Z"])
    def test_bad_characters(self, text):
        with pytest.raises(PauliParseError):
            parse_pauli(text)

    def test_bad_length(self):
        with pytest.raises(PauliParseError):
            parse_pauli("XX", 3)

    @pytest.mark.parametrize("text", ["XYZI", "-XZ", "+iYY", "-iI", "YYY"])
    def test_sign_prefixes_match_dense(self, text):
        sign = {"": 1, "-": -1, "+i": 1j, "-i": -1j}[text.rstrip("IXYZ")]
        np.testing.assert_allclose(dense(P(text)), sign * dense_text(text.lstrip("+-i")))

    @given(paulis())
    def test_round_trip(self, p):
        assert parse_pauli(format_pauli(p), p.n) == p
