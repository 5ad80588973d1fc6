import itertools
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ddaqc.codes import build_6k2k2, build_gottesman, flat_index, logical_product, reduce_logical
from ddaqc.errors import ParameterError, UnsupportedTermError
from ddaqc.hamiltonians import (
    AnnealSchedule,
    PauliHamiltonian,
    canonical,
    cat_prep_hamiltonians,
    commutation_audit,
    encode_hamiltonian,
    grid_problem,
    initial_hamiltonian,
    penalty_hamiltonian,
)
from ddaqc.pauli import PauliString, format_pauli, parse_pauli

from .conftest import dense, dense_text


def q(i, role):
    return flat_index(i, role)


def H(n, *terms):
    return PauliHamiltonian.from_strings(n, terms)


def dense_h(h):
    return sum((c * dense(p) for c, p in h.terms), np.zeros((1 << h.n,) * 2, dtype=complex))


def logical_basis(c):
    """Columns |ab..>_L built from the code's own X/Z logicals (dense oracle)."""
    dim = 1 << c.n
    proj = np.eye(dim, dtype=complex)
    for g in (*c.generators, *c.logical_z):
        proj = proj @ (np.eye(dim) + dense(g)) / 2
    w, v = np.linalg.eigh(proj)
    assert np.sum(w > 0.5) == 1
    zero = v[:, -1]
    cols = []
    for bits in itertools.product((0, 1), repeat=c.k):
        vec = zero
        for i, b in enumerate(bits):
            if b:
                vec = dense(c.logical_x[i]) @ vec
        cols.append(vec)
    return np.column_stack(cols)


class TestCanonical:
    def test_merges_and_drops(self):
        h = H(2, (1.0, "ZZ"), (0.5, "ZZ"), (2.0, "XI"), (-2.0, "XI"))
        assert len(h) == 1 and h.terms[0][0] == 1.5

    def test_sign_moves_into_coefficient(self):
        h = H(2, (1.0, "-ZZ"))
        assert h.terms == ((-1.0, parse_pauli("ZZ")),)

    def test_rejects_antihermitian(self):
        with pytest.raises(ParameterError):
            H(1, (1.0, "+iZ"))

    def test_rejects_nonfinite(self):
        with pytest.raises(ParameterError):
            H(1, (float("nan"), "Z"))

    @given(st.lists(st.tuples(st.floats(-5, 5, allow_nan=False), st.sampled_from(["XI", "ZZ", "-YX", "II", "IZ"])), max_size=8))
    def test_idempotent(self, terms):
        h = H(2, *terms)
        assert canonical(canonical(h)) == canonical(h) == h

    def test_json_round_trip(self):
        h = H(3, (0.25, "XXI"), (-1.0, "IZZ"))
        d = json.loads(json.dumps(h.to_dict()))
        assert d == {"n": 3, "terms": [{"coeff": -1.0, "pauli": "IZZ"}, {"coeff": 0.25, "pauli": "XXI"}]}
        assert PauliHamiltonian.from_dict(d) == h


class TestEncode:
    def test_zz_pair(self, code_k1):
        enc = encode_hamiltonian(H(2, (1.0, "ZZ")), code_k1)
        assert enc.terms == ((1.0, PauliString.z_type(6, [q(1, "0"), q(2, "0")])),)

    def test_zero(self, code_k1):
        assert len(encode_hamiltonian(PauliHamiltonian(2), code_k1)) == 0

    def test_mixed(self, code_k1):
        enc = encode_hamiltonian(H(2, (0.5, "XI"), (0.25, "ZZ")), code_k1)
        assert set(enc.terms) == {
            (0.5, PauliString.x_type(6, [q(1, "x"), q(1, "0")])),
            (0.25, PauliString.z_type(6, [q(1, "0"), q(2, "0")])),
        }

    def test_mixed_codespace_action(self, code_k1):
        h = H(2, (0.5, "XI"), (0.25, "ZZ"))
        b = logical_basis(code_k1)
        restricted = b.conj().T @ dense_h(encode_hamiltonian(h, code_k1)) @ b
        np.testing.assert_allclose(restricted, dense_text("XI") * 0.5 + dense_text("ZZ") * 0.25, atol=1e-10)

    @pytest.mark.parametrize("seed", range(5))
    def test_codespace_equivalence_random(self, code_k1, seed):
        rng = np.random.default_rng(seed)
        ops = ["XI", "IX", "ZI", "IZ", "XX", "ZZ", "II"]
        h = H(2, *((float(rng.normal()), o) for o in ops))
        b = logical_basis(code_k1)
        restricted = b.conj().T @ dense_h(encode_hamiltonian(h, code_k1)) @ b
        assert np.max(np.abs(restricted - dense_h(h))) < 1e-10

    @pytest.mark.parametrize("bad", ["YI", "XZ", "ZX"])
    def test_unsupported(self, code_k1, bad):
        with pytest.raises(UnsupportedTermError):
            encode_hamiltonian(H(2, (1.0, bad)), code_k1)

    def test_commutes_with_generators(self, code_k2):
        h = grid_problem(2, 2, 1.0, 0.7)
        enc = encode_hamiltonian(h, code_k2)
        assert commutation_audit(enc, code_k2) == []
        assert enc.max_weight() == 2

    def test_audit_reports_violation(self, code_k1):
        h = PauliHamiltonian(6, ((1.0, PauliString.x_type(6, [0])),))
        assert commutation_audit(h, code_k1)

    def test_gottesman_baseline(self):
        c = build_gottesman(1)
        enc = encode_hamiltonian(H(2, (1.0, "XI"), (1.0, "ZI"), (1.0, "XX")), c)
        assert sorted(format_pauli(p) for p in enc.operators) == ["IXXI", "IZIZ", "XXII"]
        assert commutation_audit(enc, c) == []
        b = logical_basis(c)
        restricted = b.conj().T @ dense_h(enc) @ b
        np.testing.assert_allclose(restricted, dense_text("XI") + dense_text("ZI") + dense_text("XX"), atol=1e-10)


class TestInitialHamiltonian:
    def test_k1(self):
        h = initial_hamiltonian(1)
        pair = [q(1, "0"), q(2, "0")]
        assert set(h.terms) == {(-1.0, PauliString.z_type(6, pair)), (-1.0, PauliString.x_type(6, pair))}

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_commutes_with_generators(self, k):
        c = build_6k2k2(k)
        assert commutation_audit(initial_hamiltonian(k), c) == []

    def test_k2_pairs(self):
        h = initial_hamiltonian(2)
        assert len(h) == 4
        supports = {p.support for p in h.operators}
        assert supports == {(q(1, "0"), q(2, "0")), (q(3, "0"), q(4, "0"))}

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_terms_are_reduced_logical_pairs(self, k):
        c = build_6k2k2(k)
        expected = {
            reduce_logical(c, logical_product(c, kind, [2 * i - 1, 2 * i]))
            for i in range(1, k + 1) for kind in "XZ"
        }
        assert set(initial_hamiltonian(k).operators) == expected

    def test_bad_k(self):
        with pytest.raises(ParameterError):
            initial_hamiltonian(0)


class TestPenalty:
    def test_k1(self, code_k1):
        h = penalty_hamiltonian(code_k1, 0.7)
        assert set(h.terms) == {
            (-0.7, PauliString.x_type(6, [q(1, "x"), q(2, "x")])),
            (-0.7, PauliString.z_type(6, [q(1, "z"), q(2, "z")])),
        }

    @pytest.mark.parametrize("s", [0.0, -1.0])
    def test_strength_positive(self, code_k1, s):
        with pytest.raises(ParameterError):
            penalty_hamiltonian(code_k1, s)

    def test_commutes_with_encoded_terms(self, code_k2):
        pen = penalty_hamiltonian(code_k2)
        enc = encode_hamiltonian(grid_problem(2, 2, 1.0, 1.0), code_k2)
        for a in pen.operators:
            assert enc.commutes_with(a)
            assert pen.commutes_with(a)


class TestCatPrep:
    def test_m2_z(self):
        h0, h1 = cat_prep_hamiltonians(2, "Z")
        assert h0 == H(2, (-1.0, "XI"), (-1.0, "IX"))
        assert h1 == H(2, (-1.0, "ZZ"))

    def test_m3_x(self):
        _, h1 = cat_prep_hamiltonians(3, "X")
        assert h1 == H(3, (-1.0, "XXI"), (-1.0, "IXX"))

    @pytest.mark.parametrize("basis,parity", [("Z", "XXXX"), ("X", "ZZZZ")])
    def test_parity_conserved_along_schedule(self, basis, parity):
        h0, h1 = cat_prep_hamiltonians(4, basis)
        sched = AnnealSchedule(h0, h1, 1.0)
        for s in np.linspace(0, 1, 11):
            assert sched.hamiltonian(float(s)).commutes_with(parse_pauli(parity))

    def test_m_too_small(self):
        with pytest.raises(ParameterError):
            cat_prep_hamiltonians(1)


def test_schedule_endpoints():
    h0, h1 = cat_prep_hamiltonians(2)
    sched = AnnealSchedule(h0, h1, 5.0)
    assert sched.s(0) == 0.0 and sched.s(5.0) == 1.0
    assert all(a <= b for a, b in zip(map(sched.s, np.linspace(0, 5, 20)), map(sched.s, np.linspace(0, 5, 20)[1:])))
    assert sched.hamiltonian(0.0) == h0 and sched.hamiltonian(1.0) == h1


def test_grid_problem_shape():
    h = grid_problem(2, 3)
    # 7 grid edges, XX and ZZ on each
    assert len(h) == 14 and h.n == 6
    assert len(grid_problem(2, 2, 1.0, 0.5)) == 8 + 8
