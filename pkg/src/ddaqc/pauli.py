"""Pauli operators in binary symplectic form.

An n-qubit Pauli operator is stored as two bit masks and a phase exponent,

    P = i**phase * X**x_0 Z**z_0 (x) X**x_1 Z**z_1 (x) ... (x) X**x_{n-1} Z**z_{n-1}

where bit ``q`` of ``x`` (``z``) is the X (Z) component on qubit ``q``.  Note that
the stored phase refers to the X-before-Z product form, so ``Y = i XZ`` is stored
with ``phase == 1``.  The textual form uses Hermitian single-qubit factors
(``I, X, Y, Z``) with qubit 0 written first, e.g. ``"-iYI"``; conversion between
the two phase conventions happens only in :func:`parse_pauli` and
:func:`format_pauli`.

Python integers are used as the packed bit vectors, so every operation below is
a handful of word-level bit operations regardless of ``n``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DimensionError, PauliParseError

_SIGNS = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_SIGN_TEXT = {0: "", 1: "+i", 2: "-", 3: "-i"}
_TEXT_RE = re.compile(r"^([+-]?i?)([IXYZ]*)$")


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """Immutable n-qubit Pauli operator ``i**phase * prod_q X^x_q Z^z_q``."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError(f"negative qubit count {self.n}")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise DimensionError(f"bit masks exceed {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n)

    @classmethod
    def from_sparse(cls, n: int, ops: Mapping[int, str]) -> PauliString:
        """Build a phase-free Hermitian Pauli from ``{qubit: 'X'|'Y'|'Z'|'I'}``."""
        x = z = 0
        n_y = 0
        for q, c in ops.items():
            if not 0 <= q < n:
                raise DimensionError(f"qubit {q} outside 0..{n - 1}")
            if c in "XY":
                x |= 1 << q
            if c in "ZY":
                z |= 1 << q
            if c == "Y":
                n_y += 1
            elif c not in "IXZ":
                raise PauliParseError(f"bad Pauli character {c!r}")
        return cls(n, x, z, n_y)

    @classmethod
    def x_type(cls, n: int, qubits: Iterable[int]) -> PauliString:
        return cls(n, x=_mask(n, qubits))

    @classmethod
    def z_type(cls, n: int, qubits: Iterable[int]) -> PauliString:
        return cls(n, z=_mask(n, qubits))

    # -- views --------------------------------------------------------------

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> q) & 1 for q in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> q) & 1 for q in range(self.n))

    @property
    def support(self) -> tuple[int, ...]:
        s = self.x | self.z
        return tuple(q for q in range(self.n) if (s >> q) & 1)

    @property
    def symplectic(self) -> int:
        """The 2n-bit vector ``x | z << n`` used for GF(2) linear algebra."""
        return self.x | (self.z << self.n)

    @property
    def hermitian_phase(self) -> int:
        """Phase exponent relative to the Hermitian (I/X/Y/Z) product form."""
        return (self.phase - _popcount(self.x & self.z)) % 4

    @property
    def is_hermitian(self) -> bool:
        return self.hermitian_phase % 2 == 0

    def unsigned(self) -> PauliString:
        """The same Pauli with its Hermitian-form phase stripped to ``+1``."""
        return PauliString(self.n, self.x, self.z, _popcount(self.x & self.z))

    def char(self, q: int) -> str:
        return "IXZY"[((self.x >> q) & 1) | (((self.z >> q) & 1) << 1)]

    # -- algebra ------------------------------------------------------------

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliString({format_pauli(self)!r})"


def _mask(n: int, qubits: Iterable[int]) -> int:
    m = 0
    for q in qubits:
        if not 0 <= q < n:
            raise DimensionError(f"qubit {q} outside 0..{n - 1}")
        m ^= 1 << q
    return m


def _check_dims(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise DimensionError(f"Pauli lengths differ: {p.n} vs {q.n}")


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Operator product ``p @ q`` with exact phase."""
    _check_dims(p, q)
    # moving each X of q left past a Z of p costs a sign
    phase = p.phase + q.phase + 2 * _popcount(p.z & q.x)
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, phase)


def multiply_all(ops: Iterable[PauliString], n: int) -> PauliString:
    out = PauliString.identity(n)
    for op in ops:
        out = multiply(out, op)
    return out


def symplectic_product(p: PauliString, q: PauliString) -> int:
    """0 if ``p`` and ``q`` commute, 1 if they anticommute."""
    _check_dims(p, q)
    return _popcount((p.x & q.z) ^ (p.z & q.x)) & 1


def commutes(p: PauliString, q: PauliString) -> bool:
    return symplectic_product(p, q) == 0


def weight(p: PauliString) -> int:
    return _popcount(p.x | p.z)


def parse_pauli(text: str, n: int | None = None) -> PauliString:
    """Parse ``[sign]PAULIS`` where sign is one of ``+ - +i -i`` (or none)."""
    m = _TEXT_RE.match(text.strip())
    if m is None:
        raise PauliParseError(f"cannot parse Pauli string {text!r}")
    sign, body = m.groups()
    if n is not None and len(body) != n:
        raise PauliParseError(f"expected {n} qubits, got {len(body)} in {text!r}")
    p = PauliString.from_sparse(len(body), dict(enumerate(body)))
    return PauliString(p.n, p.x, p.z, p.phase + _SIGNS[sign])


def format_pauli(p: PauliString) -> str:
    return _SIGN_TEXT[p.hermitian_phase] + "".join(p.char(q) for q in range(p.n))
