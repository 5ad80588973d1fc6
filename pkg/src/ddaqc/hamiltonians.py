"""Pauli-sum Hamiltonians and the encodings/constructions built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .codes import StabilizerCode, flat_index
from .errors import DimensionError, ParameterError, UnsupportedTermError
from .pauli import PauliString, commutes, format_pauli, parse_pauli, weight


def _canonical_terms(n: int, terms: Iterable[tuple[float, PauliString]]):
    merged: dict[tuple[int, int], float] = {}
    for coeff, op in terms:
        if op.n != n:
            raise DimensionError(f"term {op} does not act on {n} qubits")
        coeff = float(coeff)
        if not math.isfinite(coeff):
            raise ParameterError(f"non-finite coefficient {coeff} on {op}")
        hp = op.hermitian_phase
        if hp % 2:
            raise ParameterError(f"term {op} is not Hermitian")
        if hp == 2:
            coeff = -coeff
        key = (op.x, op.z)
        merged[key] = merged.get(key, 0.0) + coeff
    out = [
        (c, PauliString(n, x, z).unsigned())
        for (x, z), c in merged.items()
        if c != 0.0
    ]
    out.sort(key=lambda t: format_pauli(t[1]))
    return tuple(out)


@dataclass(frozen=True)
class PauliHamiltonian:
    """Real-weighted sum of Hermitian Pauli operators, kept in canonical form.

    Construction strips signs into coefficients, merges repeated operators,
    drops zero terms and sorts terms by their text form.
    """

    n: int
    terms: tuple[tuple[float, PauliString], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", _canonical_terms(self.n, self.terms))

    @classmethod
    def from_strings(cls, n: int, terms: Iterable[tuple[float, str]]) -> PauliHamiltonian:
        return cls(n, tuple((c, parse_pauli(s, n)) for c, s in terms))

    def __add__(self, other: PauliHamiltonian) -> PauliHamiltonian:
        if other.n != self.n:
            raise DimensionError(f"cannot add Hamiltonians on {self.n} and {other.n} qubits")
        return PauliHamiltonian(self.n, self.terms + other.terms)

    def __mul__(self, scale: float) -> PauliHamiltonian:
        return PauliHamiltonian(self.n, tuple((scale * c, p) for c, p in self.terms))

    __rmul__ = __mul__

    def __neg__(self) -> PauliHamiltonian:
        return self * -1.0

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def operators(self) -> list[PauliString]:
        return [p for _, p in self.terms]

    def max_weight(self) -> int:
        return max((weight(p) for p in self.operators), default=0)

    def commutes_with(self, p: PauliString) -> bool:
        return all(commutes(op, p) for op in self.operators)

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "terms": [{"coeff": c, "pauli": format_pauli(p)} for c, p in self.terms]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PauliHamiltonian:
        try:
            n = int(d["n"])
            return cls(n, tuple((float(t["coeff"]), parse_pauli(t["pauli"], n)) for t in d["terms"]))
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed Hamiltonian description: {exc!r}") from exc


def canonical(h: PauliHamiltonian) -> PauliHamiltonian:
    return PauliHamiltonian(h.n, h.terms)


# ---------------------------------------------------------------------------
# encoding


def _classify(op: PauliString) -> tuple[str, tuple[int, ...]]:
    support = op.support
    kinds = {op.char(q) for q in support}
    if not support:
        return "I", ()
    if len(support) <= 2 and len(kinds) == 1 and kinds <= {"X", "Z"}:
        return kinds.pop() * len(support), support
    raise UnsupportedTermError(f"term {format_pauli(op)} is not one of I, X_i, Z_i, X_iX_j, Z_iZ_j")


def _logical_map_6k(n_phys: int, kind: str, support: tuple[int, ...]) -> PauliString:
    idx = [i + 1 for i in support]
    if kind == "X":
        return PauliString.x_type(n_phys, [flat_index(idx[0], "x"), flat_index(idx[0], "0")])
    if kind == "Z":
        return PauliString.z_type(n_phys, [flat_index(idx[0], "0"), flat_index(idx[0], "z")])
    qubits = [flat_index(i, "0") for i in idx]
    if kind == "XX":
        return PauliString.x_type(n_phys, qubits)
    return PauliString.z_type(n_phys, qubits)


def _logical_map_gottesman(n_phys: int, kind: str, support: tuple[int, ...]) -> PauliString:
    spokes = [i + 1 for i in support]
    if kind == "X":
        return PauliString.x_type(n_phys, [0, spokes[0]])
    if kind == "Z":
        return PauliString.z_type(n_phys, [spokes[0], n_phys - 1])
    if kind == "XX":
        return PauliString.x_type(n_phys, spokes)
    return PauliString.z_type(n_phys, spokes)


_LOGICAL_MAPS = {"6k2k2": _logical_map_6k, "gottesman": _logical_map_gottesman}


def encode_operator(op: PauliString, c: StabilizerCode) -> PauliString:
    """Weight-two physical representative of a logical I/X/Z/XX/ZZ operator."""
    mapper = _LOGICAL_MAPS.get(c.family or "")
    if mapper is None:
        raise ParameterError(f"no logical operator map for code family {c.family!r}")
    if op.n != c.k:
        raise DimensionError(f"logical operator on {op.n} qubits, code encodes {c.k}")
    kind, support = _classify(op)
    if kind == "I":
        return PauliString.identity(c.n)
    return mapper(c.n, kind, support)


def encode_hamiltonian(h: PauliHamiltonian, c: StabilizerCode) -> PauliHamiltonian:
    """Map a logical 2-local Hamiltonian onto the physical qubits of ``c``.

    Designed for the [[6k,2k,2]] code; the Gottesman code is accepted as a
    baseline, using its hub-and-spoke representatives.
    """
    return PauliHamiltonian(c.n, tuple((coeff, encode_operator(op, c)) for coeff, op in h.terms))


def commutation_audit(h: PauliHamiltonian, c: StabilizerCode) -> list[tuple[str, int]]:
    """(term, generator index) pairs that anticommute; empty for a valid encoding."""
    return [
        (format_pauli(op), i)
        for op in h.operators
        for i, g in enumerate(c.generators)
        if not commutes(op, g)
    ]


# ---------------------------------------------------------------------------
# constructions


def initial_hamiltonian(k: int) -> PauliHamiltonian:
    """``-sum_i (Z Z + X X)`` on the (2i-1, 0), (2i, 0) pairs of the 6k code."""
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    n = 6 * k
    terms = []
    for i in range(1, k + 1):
        pair = [flat_index(2 * i - 1, "0"), flat_index(2 * i, "0")]
        terms.append((-1.0, PauliString.z_type(n, pair)))
        terms.append((-1.0, PauliString.x_type(n, pair)))
    return PauliHamiltonian(n, tuple(terms))


def penalty_hamiltonian(c: StabilizerCode, strength: float = 1.0) -> PauliHamiltonian:
    """``-strength`` times the sum of the weight-two generators of ``c``.

    Higher-weight generators are left out; they are applied as decoupling
    pulses instead.
    """
    if not strength > 0:
        raise ParameterError(f"penalty strength must be positive, got {strength}")
    return PauliHamiltonian(c.n, tuple((-strength, g) for g in c.generators if weight(g) == 2))


def cat_prep_hamiltonians(m: int, basis: str = "Z") -> tuple[PauliHamiltonian, PauliHamiltonian]:
    """Transverse-field start and Ising-chain end Hamiltonians for cat preparation.

    ``basis="Z"`` targets ``(|0..0> + |1..1>)/sqrt2``; ``basis="X"`` swaps X and Z
    throughout and targets ``(|+..+> + |-..->)/sqrt2``.
    """
    if m < 2:
        raise ParameterError(f"cat preparation needs m >= 2 qubits, got {m}")
    if basis not in ("X", "Z"):
        raise ParameterError(f"basis must be 'X' or 'Z', got {basis!r}")
    field_, coupling = (PauliString.x_type, PauliString.z_type) if basis == "Z" else (
        PauliString.z_type, PauliString.x_type)
    h0 = PauliHamiltonian(m, tuple((-1.0, field_(m, [i])) for i in range(m)))
    h1 = PauliHamiltonian(m, tuple((-1.0, coupling(m, [i, i + 1])) for i in range(m - 1)))
    return h0, h1


def linear_ramp(t: float, total_time: float) -> float:
    return t / total_time if total_time > 0 else 1.0


@dataclass(frozen=True)
class AnnealSchedule:
    """``H(s) = (1 - s) * h_initial + s * h_final`` with ``s = s(t)`` over ``[0, T]``."""

    h_initial: PauliHamiltonian
    h_final: PauliHamiltonian
    total_time: float
    interpolation: Callable[[float, float], float] = field(default=linear_ramp)

    def __post_init__(self):
        if self.h_initial.n != self.h_final.n:
            raise DimensionError("initial and final Hamiltonians act on different qubit counts")
        if self.total_time < 0:
            raise ParameterError(f"total time must be >= 0, got {self.total_time}")

    @property
    def n(self) -> int:
        return self.h_initial.n

    def s(self, t: float) -> float:
        return min(1.0, max(0.0, self.interpolation(t, self.total_time)))

    def hamiltonian(self, s: float) -> PauliHamiltonian:
        return self.h_initial * (1.0 - s) + self.h_final * s


# ---------------------------------------------------------------------------
# problem generators


def grid_problem(
    rows: int,
    cols: int,
    coupling: float = 1.0,
    field_strength: float = 0.0,
    rng=None,
) -> PauliHamiltonian:
    """XX + ZZ couplings on a rows x cols grid of logical qubits, plus optional
    X and Z fields on every qubit.

    Qubits are numbered row-major.  With ``rng`` (a numpy Generator) every
    coefficient is drawn uniformly from ``[-1, 1]`` instead, for each term that
    has a nonzero default.
    """
    if rows < 1 or cols < 1:
        raise ParameterError(f"grid must be at least 1x1, got {rows}x{cols}")
    n = rows * cols

    def coeff(default):
        return float(rng.uniform(-1.0, 1.0)) if rng is not None else default

    terms = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            nbrs = ([q + 1] if c + 1 < cols else []) + ([q + cols] if r + 1 < rows else [])
            for v in nbrs:
                if coupling:
                    terms.append((coeff(coupling), PauliString.x_type(n, [q, v])))
                    terms.append((coeff(coupling), PauliString.z_type(n, [q, v])))
            if field_strength:
                terms.append((coeff(field_strength), PauliString.x_type(n, [q])))
                terms.append((coeff(field_strength), PauliString.z_type(n, [q])))
    return PauliHamiltonian(n, tuple(terms))
