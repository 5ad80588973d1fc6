"""Stabilizer codes: the [[6k,2k,2]] family, the Gottesman [[2k+2,2k,2]] baseline,
and the checks used to certify them.

Physical qubits of the [[6k,2k,2]] code are triples ``(i, x), (i, 0), (i, z)`` for
logical qubit ``i`` in ``1..2k``; they are laid out as

    flat_index = 3 * (i - 1) + {"x": 0, "0": 1, "z": 2}[role]
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

from .errors import DimensionError, NotALogicalError, ParameterError, ResourceError
from .gf2 import GF2Span
from .pauli import (
    PauliString,
    commutes,
    format_pauli,
    multiply,
    parse_pauli,
    symplectic_product,
    weight,
)

ROLES = ("x", "0", "z")
_ROLE_OFFSET = {r: i for i, r in enumerate(ROLES)}

DEFAULT_DISTANCE_BUDGET = 5_000_000
BUDGET_ENV_VAR = "DDAQC_DISTANCE_BUDGET"
EXHAUSTIVE_COSET_LIMIT = 20


@dataclass(frozen=True)
class QubitLabel:
    logical_index: int
    role: str
    flat_index: int

    @classmethod
    def of(cls, logical_index: int, role: str) -> QubitLabel:
        return cls(logical_index, role, flat_index(logical_index, role))


def flat_index(logical_index: int, role: str) -> int:
    if role not in _ROLE_OFFSET:
        raise ParameterError(f"unknown qubit role {role!r}")
    if logical_index < 1:
        raise ParameterError(f"logical index must be >= 1, got {logical_index}")
    return 3 * (logical_index - 1) + _ROLE_OFFSET[role]


def label_of(flat: int) -> QubitLabel:
    i, r = divmod(flat, 3)
    return QubitLabel(i + 1, ROLES[r], flat)


@dataclass(frozen=True)
class StabilizerCode:
    """Generators and logical operators of an [[n, k]] stabilizer code.

    ``k`` counts logical qubits, so ``build_6k2k2(k)`` returns a code whose
    ``k`` attribute is ``2k``.  ``family`` records which constructor produced the
    code (``"6k2k2"`` or ``"gottesman"``) and survives Hadamard transforms.
    """

    n: int
    k: int
    generators: tuple[PauliString, ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]
    labels: tuple[QubitLabel, ...] | None = None
    css: bool = True
    family: str | None = None

    def __post_init__(self):
        for p in (*self.generators, *self.logical_x, *self.logical_z):
            if p.n != self.n:
                raise DimensionError(f"operator {p} does not act on {self.n} qubits")

    @cached_property
    def _span(self) -> GF2Span:
        return GF2Span(g.symplectic for g in self.generators)

    @cached_property
    def _syndrome_table(self) -> list[tuple[int, int, int]]:
        # per qubit: syndrome masks of X, Z and Y on that qubit
        table = []
        for q in range(self.n):
            sx = sz = 0
            for i, g in enumerate(self.generators):
                if (g.z >> q) & 1:
                    sx |= 1 << i
                if (g.x >> q) & 1:
                    sz |= 1 << i
            table.append((sx, sz, sx ^ sz))
        return table

    @property
    def num_logical(self) -> int:
        return len(self.logical_x)

    def in_stabilizer_group(self, op: PauliString) -> bool:
        """GF(2) membership of ``op``'s x/z pattern in the generator span (phase ignored)."""
        return op.symplectic in self._span

    def stabilizer_decomposition(self, op: PauliString) -> list[int] | None:
        combo = self._span.decompose(op.symplectic)
        if combo is None:
            return None
        return [i for i in range(len(self.generators)) if (combo >> i) & 1]

    def stabilizer_element(self, indices: Iterable[int]) -> PauliString:
        out = PauliString.identity(self.n)
        for i in indices:
            out = multiply(out, self.generators[i])
        return out

    def _syndrome_mask(self, op: PauliString) -> int:
        s = 0
        for i, g in enumerate(self.generators):
            s |= symplectic_product(op, g) << i
        return s

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "n": self.n,
            "k": self.k,
            "css": self.css,
            "generators": [format_pauli(g) for g in self.generators],
            "logical_x": [format_pauli(p) for p in self.logical_x],
            "logical_z": [format_pauli(p) for p in self.logical_z],
            "labels": (
                [{"logical": lb.logical_index, "role": lb.role} for lb in self.labels]
                if self.labels
                else []
            ),
        }
        if self.family:
            d["family"] = self.family
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> StabilizerCode:
        try:
            n = int(d["n"])
            labels = tuple(QubitLabel.of(int(lb["logical"]), str(lb["role"])) for lb in d.get("labels", []))
            return cls(
                n=n,
                k=int(d["k"]),
                generators=tuple(parse_pauli(s, n) for s in d["generators"]),
                logical_x=tuple(parse_pauli(s, n) for s in d["logical_x"]),
                logical_z=tuple(parse_pauli(s, n) for s in d["logical_z"]),
                labels=labels or None,
                css=bool(d.get("css", False)),
                family=d.get("family"),
            )
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed code description: {exc!r}") from exc


# ---------------------------------------------------------------------------
# constructors


def build_6k2k2(k: int) -> StabilizerCode:
    """The [[6k,2k,2]] code: 4k generators, weight-two logicals on each triple."""
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    m = 2 * k
    n = 6 * k

    def q(i, role):
        return flat_index(i, role)

    gens = [PauliString.x_type(n, [q(i, "x"), q(i + 1, "x")]) for i in range(1, m)]
    gens.append(PauliString.x_type(n, [q(i, r) for i in range(1, m + 1) for r in ("0", "z")]))
    gens += [PauliString.z_type(n, [q(i, "z"), q(i + 1, "z")]) for i in range(1, m)]
    gens.append(PauliString.z_type(n, [q(i, r) for i in range(1, m + 1) for r in ("x", "0")]))

    lx = [PauliString.x_type(n, [q(i, "x"), q(i, "0")]) for i in range(1, m + 1)]
    lz = [PauliString.z_type(n, [q(i, "0"), q(i, "z")]) for i in range(1, m + 1)]
    labels = tuple(label_of(f) for f in range(n))
    return StabilizerCode(n, m, tuple(gens), tuple(lx), tuple(lz), labels, True, "6k2k2")


def build_gottesman(k: int) -> StabilizerCode:
    """Gottesman's [[2k+2,2k,2]] code with its hub-and-spoke logicals."""
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    m = 2 * k
    n = m + 2
    gens = (PauliString.x_type(n, range(n)), PauliString.z_type(n, range(n)))
    # logical i (1-based) -> X_1 X_{i+1}, Z_{i+1} Z_{2k+2}; 0-based qubit indices below
    lx = tuple(PauliString.x_type(n, [0, i]) for i in range(1, m + 1))
    lz = tuple(PauliString.z_type(n, [i, n - 1]) for i in range(1, m + 1))
    return StabilizerCode(n, m, gens, lx, lz, None, True, "gottesman")


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    failures: dict[str, list[str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "checks": dict(self.checks), "failures": dict(self.failures)}


def verify_code(c: StabilizerCode) -> VerificationReport:
    """Check every structural invariant of ``c``; failures are recorded, never raised."""
    rep = VerificationReport()
    gens = c.generators

    bad = [f"g{i}~g{j}" for i, j in itertools.combinations(range(len(gens)), 2)
           if not commutes(gens[i], gens[j])]
    rep.checks["generators_commute"] = not bad
    rep.failures["generators_commute"] = bad

    span = GF2Span(g.symplectic for g in gens)
    rep.checks["generators_independent"] = span.rank == len(gens)
    rep.failures["generators_independent"] = [f"g{i}" for i in span.dependent]

    bad = [f"{name}{a}~g{i}"
           for name, ops in (("X", c.logical_x), ("Z", c.logical_z))
           for a, op in enumerate(ops)
           for i, g in enumerate(gens) if not commutes(op, g)]
    rep.checks["logicals_commute_with_generators"] = not bad
    rep.failures["logicals_commute_with_generators"] = bad

    bad = []
    if len(c.logical_x) != len(c.logical_z):
        bad.append(f"{len(c.logical_x)} X vs {len(c.logical_z)} Z logicals")
    else:
        for i, lx in enumerate(c.logical_x):
            for j, lz in enumerate(c.logical_z):
                if commutes(lx, lz) == (i == j):
                    bad.append(f"X{i}~Z{j}")
        for name, ops in (("X", c.logical_x), ("Z", c.logical_z)):
            for i, j in itertools.combinations(range(len(ops)), 2):
                if not commutes(ops[i], ops[j]):
                    bad.append(f"{name}{i}~{name}{j}")
    rep.checks["logical_pairing"] = not bad
    rep.failures["logical_pairing"] = bad

    counts_ok = c.n - span.rank == c.k == len(c.logical_x)
    rep.checks["n_minus_rank_equals_k"] = counts_ok
    rep.failures["n_minus_rank_equals_k"] = [] if counts_ok else [
        f"n={c.n} rank={span.rank} k={c.k} logicals={len(c.logical_x)}"
    ]
    return rep


@dataclass(frozen=True)
class Syndrome:
    bits: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def syndrome(c: StabilizerCode, e: PauliString) -> Syndrome:
    if e.n != c.n:
        raise DimensionError(f"error acts on {e.n} qubits, code has {c.n}")
    return Syndrome(tuple(symplectic_product(e, g) for g in c.generators))


def detects_all_weight_one(c: StabilizerCode) -> bool:
    return all(s != 0 for row in c._syndrome_table for s in row)


# ---------------------------------------------------------------------------
# distance


@dataclass(frozen=True)
class DistanceResult:
    """``distance`` is None when no logical of weight <= ``max_weight`` exists."""

    distance: int | None
    max_weight: int
    witness: PauliString | None = None
    enumerated: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "distance": self.distance if self.distance is not None else f">{self.max_weight}",
            "max_weight": self.max_weight,
            "witness": format_pauli(self.witness) if self.witness is not None else None,
            "enumerated": self.enumerated,
        }


def enumeration_count(n: int, w: int) -> int:
    return 3**w * math.comb(n, w)


def _budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    return int(os.environ.get(BUDGET_ENV_VAR, DEFAULT_DISTANCE_BUDGET))


def distance(c: StabilizerCode, max_weight: int, budget: int | None = None) -> DistanceResult:
    """Brute-force the minimum weight of an undetectable non-stabilizer Pauli.

    Weights are scanned upward from 1; the cumulative number of candidate
    Paulis may not exceed ``budget`` (default from ``DDAQC_DISTANCE_BUDGET``).
    """
    if max_weight < 1:
        raise ParameterError(f"max_weight must be >= 1, got {max_weight}")
    budget = _budget(budget)
    table = c._syndrome_table
    total = 0
    for w in range(1, min(max_weight, c.n) + 1):
        total += enumeration_count(c.n, w)
        if total > budget:
            raise ResourceError(
                f"distance enumeration at weight {w} needs {total} candidates, budget is {budget}"
            )
        for support in itertools.combinations(range(c.n), w):
            rows = [table[q] for q in support]
            for kinds in itertools.product(range(3), repeat=w):
                s = 0
                for row, t in zip(rows, kinds):
                    s ^= row[t]
                if s:
                    continue
                x = z = 0
                for q, t in zip(support, kinds):
                    if t != 1:
                        x |= 1 << q
                    if t != 0:
                        z |= 1 << q
                cand = PauliString(c.n, x, z).unsigned()
                if not c.in_stabilizer_group(cand):
                    return DistanceResult(w, max_weight, cand, total)
    return DistanceResult(None, max_weight, None, total)


# ---------------------------------------------------------------------------
# coset reduction


def _coset_key(p: PauliString, preferred: int) -> tuple[int, int, str, str]:
    # weight, then support off the preferred qubits, then bit strings read from qubit 0
    off = bin((p.x | p.z) & ~preferred).count("1")
    return (weight(p), off, "".join(map(str, p.x_bits)), "".join(map(str, p.z_bits)))


def _preferred_mask(c: StabilizerCode) -> int:
    if not c.labels:
        return (1 << c.n) - 1
    return sum(1 << lb.flat_index for lb in c.labels if lb.role == "0")


def _scan_coset(op: PauliString, gens: Sequence[PauliString], preferred: int) -> PauliString:
    best, best_key = op, _coset_key(op, preferred)
    cur = op
    # Gray-code walk: each step toggles one generator into/out of the product
    for step in range(1, 1 << len(gens)):
        bit = (step & -step).bit_length() - 1
        cur = multiply(cur, gens[bit])
        key = _coset_key(cur, preferred)
        if key < best_key:
            best, best_key = cur, key
    return best


def reduce_logical(c: StabilizerCode, op: PauliString) -> PauliString:
    """Minimum-weight representative of the coset ``op * S``.

    Among equal-weight representatives, labelled codes prefer support on the
    ``(i, 0)`` coupling qubits; remaining ties go to the lexicographically
    smallest (x, z) bit pattern read from qubit 0.  The coset is
    scanned exhaustively up to ``2**20`` elements; a pure X- (Z-) type operator
    on a CSS code only needs the X- (Z-) type generators, which keeps larger
    codes within reach.
    """
    if op.n != c.n:
        raise DimensionError(f"operator acts on {op.n} qubits, code has {c.n}")
    s = c._syndrome_mask(op)
    if s:
        bad = [i for i in range(len(c.generators)) if (s >> i) & 1]
        raise NotALogicalError(f"{format_pauli(op)} anticommutes with generators {bad}")

    gens: Sequence[PauliString] = c.generators
    if len(gens) > EXHAUSTIVE_COSET_LIMIT:
        if c.css and op.z == 0:
            gens = [g for g in gens if g.z == 0]
        elif c.css and op.x == 0:
            gens = [g for g in gens if g.x == 0]
        if len(gens) > EXHAUSTIVE_COSET_LIMIT:
            raise ResourceError(
                f"coset of {format_pauli(op)} has 2^{len(gens)} elements; "
                f"exhaustive limit is 2^{EXHAUSTIVE_COSET_LIMIT}"
            )
    return _scan_coset(op, gens, _preferred_mask(c))


# ---------------------------------------------------------------------------
# convenience


def logical_product(c: StabilizerCode, kind: str, indices: Iterable[int]) -> PauliString:
    """Product of single-qubit logicals, e.g. ``X_i X_j`` in its unreduced form.

    ``indices`` are 1-based logical qubit numbers.
    """
    ops = {"X": c.logical_x, "Z": c.logical_z}[kind]
    out = PauliString.identity(c.n)
    for i in indices:
        out = multiply(out, ops[i - 1])
    return out


def all_x(n: int) -> PauliString:
    return PauliString.x_type(n, range(n))


def all_z(n: int) -> PauliString:
    return PauliString.z_type(n, range(n))
