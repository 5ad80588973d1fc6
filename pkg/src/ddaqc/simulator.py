"""Dense statevector dynamics at desk scale.

States are plain complex numpy vectors of length ``2**n``.  Qubit 0 is the most
significant bit of the basis index, matching the left-to-right Pauli text
format, so ``np.kron(a, b)`` puts ``a`` on the lower-numbered qubits.  Time is
measured in inverse energy units (hbar = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .codes import StabilizerCode, all_x, all_z, flat_index
from .errors import (
    CodeInconsistencyError,
    DDAQCError,
    DimensionError,
    InvalidPulseError,
    ParameterError,
    ResourceError,
)
from .hamiltonians import AnnealSchedule, PauliHamiltonian, cat_prep_hamiltonians
from .pauli import PauliString, commutes, multiply, symplectic_product

MAX_QUBITS = 14
DENSE_PROPAGATOR_MAX_QUBITS = 10
NORM_TOL = 1e-9


class ConservationError(DDAQCError):
    exit_code = 1


def _guard(n: int) -> None:
    if n > MAX_QUBITS:
        raise ResourceError(f"{n} qubits exceeds the statevector limit of {MAX_QUBITS}")


def _basis_mask(mask: int, n: int) -> int:
    # qubit q lives at bit n-1-q of the basis index
    out = 0
    for q in range(n):
        if (mask >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


def _pauli_action(p: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """Row indices and values such that ``P|b> = vals[b] |rows[b]>``."""
    n = p.n
    cols = np.arange(1 << n, dtype=np.int64)
    xb, zb = _basis_mask(p.x, n), _basis_mask(p.z, n)
    signs = 1 - 2 * (np.bitwise_count(cols & zb) & 1).astype(np.int8)
    vals = (1j**p.phase) * signs
    return cols ^ xb, vals


def apply_pauli(psi: np.ndarray, p: PauliString) -> np.ndarray:
    _guard(p.n)
    if psi.shape != (1 << p.n,):
        raise DimensionError(f"state of length {psi.shape} does not match {p.n} qubits")
    rows, vals = _pauli_action(p)
    out = np.empty_like(psi, dtype=complex)
    out[rows] = vals * psi
    return out


def pauli_matrix(p: PauliString) -> sp.csr_matrix:
    _guard(p.n)
    rows, vals = _pauli_action(p)
    dim = 1 << p.n
    return sp.csr_matrix((vals.astype(complex), (rows, np.arange(dim))), shape=(dim, dim))


def sparse_matrix(h: PauliHamiltonian) -> sp.csr_matrix:
    _guard(h.n)
    dim = 1 << h.n
    out = sp.csr_matrix((dim, dim), dtype=complex)
    for c, p in h.terms:
        out = out + c * pauli_matrix(p)
    return out


def dense_matrix(h: PauliHamiltonian) -> np.ndarray:
    return sparse_matrix(h).toarray()


def expectation(psi: np.ndarray, op: PauliString | PauliHamiltonian) -> float:
    if isinstance(op, PauliString):
        return float(np.vdot(psi, apply_pauli(psi, op)).real)
    return float(np.vdot(psi, sparse_matrix(op) @ psi).real)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)


# ---------------------------------------------------------------------------
# propagation


def propagator(h: PauliHamiltonian, t: float) -> Callable[[np.ndarray], np.ndarray]:
    """Exact ``psi -> exp(-i h t) psi``.

    Small systems use a dense eigendecomposition; larger ones fall back to
    scipy's scaling-and-squaring action of the sparse exponential.
    """
    _guard(h.n)
    if h.n <= DENSE_PROPAGATOR_MAX_QUBITS:
        w, v = np.linalg.eigh(dense_matrix(h))
        u = (v * np.exp(-1j * w * t)) @ v.conj().T
        return lambda psi: u @ psi
    a = (-1j * t) * sparse_matrix(h).tocsc()
    return lambda psi: expm_multiply(a, psi)


def evolve(psi: np.ndarray, h: PauliHamiltonian, t: float) -> np.ndarray:
    if psi.shape != (1 << h.n,):
        raise DimensionError(f"state of length {psi.shape[0]} does not match {h.n} qubits")
    if t == 0:
        return psi.astype(complex, copy=True)
    return propagator(h, t)(psi)


def ground_space(h: PauliHamiltonian, tol: float = 1e-8) -> tuple[float, np.ndarray]:
    """Lowest eigenvalue and an orthonormal basis (columns) of its eigenspace."""
    w, v = np.linalg.eigh(dense_matrix(h))
    scale = max(1.0, abs(w[0]))
    return float(w[0]), v[:, w <= w[0] + tol * scale]


def subspace_overlap(psi: np.ndarray, basis: np.ndarray) -> float:
    return float(np.linalg.norm(basis.conj().T @ psi) ** 2)


@dataclass
class AnnealResult:
    state: np.ndarray
    times: list[float]
    s_values: list[float]
    ground_overlaps: list[float]
    observables: dict[str, list[float]] = field(default_factory=dict)
    final_ground_overlap: float = float("nan")
    target_overlap: float | None = None
    total_time: float = 0.0
    steps: int = 0

    def drift(self, name: str, reference: float | None = None) -> float:
        vals = self.observables[name]
        ref = vals[0] if reference is None else reference
        return max(abs(v - ref) for v in vals)


def anneal(
    psi0: np.ndarray,
    schedule: AnnealSchedule,
    steps: int,
    observables: Mapping[str, PauliString] | None = None,
) -> AnnealResult:
    """Piecewise-constant propagation under ``H(s)`` sampled at slice midpoints.

    After each slice the overlap with the ground space of that slice's
    Hamiltonian is recorded (degenerate ground spaces count as a whole), as are
    the expectation values of ``observables``.
    """
    if steps < 1:
        raise ParameterError(f"steps must be >= 1, got {steps}")
    _guard(schedule.n)
    observables = dict(observables or {})
    psi = np.asarray(psi0, dtype=complex).copy()
    T = schedule.total_time
    dt = T / steps
    res = AnnealResult(psi, [0.0], [schedule.s(0.0)], [], {k: [expectation(psi, p)] for k, p in observables.items()},
                       total_time=T, steps=steps)
    for j in range(steps):
        s_mid = schedule.s((j + 0.5) * dt)
        w, v = np.linalg.eigh(dense_matrix(schedule.hamiltonian(s_mid)))
        if dt:
            psi = v @ (np.exp(-1j * w * dt) * (v.conj().T @ psi))
        ground = v[:, w <= w[0] + 1e-8 * max(1.0, abs(w[0]))]
        res.times.append((j + 1) * dt)
        res.s_values.append(schedule.s((j + 1) * dt))
        res.ground_overlaps.append(subspace_overlap(psi, ground))
        for k, p in observables.items():
            res.observables[k].append(expectation(psi, p))
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise ConservationError(f"state norm drifted to {norm}")
    res.state = psi
    _, g1 = ground_space(schedule.hamiltonian(schedule.s(T)))
    res.final_ground_overlap = subspace_overlap(psi, g1)
    return res


# ---------------------------------------------------------------------------
# states


def product_state(single: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for s in single:
        out = np.kron(out, s)
    return out


_KET = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / math.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / math.sqrt(2),
}


def cat_state(m: int, basis: str = "Z") -> np.ndarray:
    """``(|0..0> + |1..1>)/sqrt2`` for basis Z, ``(|+..+> + |-..->)/sqrt2`` for basis X."""
    _guard(m)
    a, b = ("0", "1") if basis == "Z" else ("+", "-")
    return (product_state([_KET[a]] * m) + product_state([_KET[b]] * m)) / math.sqrt(2)


def _conserved(m: int, basis: str) -> PauliString:
    return all_x(m) if basis == "Z" else all_z(m)


def prepare_cat(m: int, basis: str = "Z", T: float = 20.0, steps: int = 400) -> AnnealResult:
    """Adiabatically prepare an m-qubit cat state from the transverse-field ground state.

    The parity operator (``X^m`` for basis Z, ``Z^m`` for basis X) commutes with
    the whole schedule; a drift above 1e-6 raises :class:`ConservationError`.
    The final state is ``result.state``.
    """
    if not 2 <= m <= 12:
        raise ParameterError(f"cat preparation supports 2 <= m <= 12, got {m}")
    if T < 0:
        raise ParameterError(f"T must be >= 0, got {T}")
    h0, h1 = cat_prep_hamiltonians(m, basis)
    psi0 = product_state([_KET["+" if basis == "Z" else "0"]] * m)
    res = anneal(psi0, AnnealSchedule(h0, h1, T), steps, {"parity": _conserved(m, basis)})
    drift = res.drift("parity", reference=1.0)
    if drift >= 1e-6:
        raise ConservationError(f"conserved parity drifted by {drift:.3e}")
    res.target_overlap = fidelity(cat_state(m, basis), res.state)
    return res


def converge_cat(
    m: int,
    basis: str = "Z",
    target: float = 0.99,
    T0: float = 1.0,
    dt: float = 0.05,
    max_doublings: int = 12,
) -> AnnealResult:
    """Double the anneal time from ``T0`` until the cat overlap exceeds ``target``."""
    T = T0
    for _ in range(max_doublings + 1):
        res = prepare_cat(m, basis, T, max(1, math.ceil(T / dt)))
        if res.target_overlap > target:
            return res
        T *= 2
    raise ConservationError(f"cat overlap {res.target_overlap:.4f} below {target} after T={T / 2}")


def _grouped_order(k: int) -> list[int]:
    m = 2 * k
    return ([flat_index(i, "x") for i in range(1, m + 1)]
            + [flat_index(i, "0") for i in range(1, m + 1)]
            + [flat_index(i, "z") for i in range(1, m + 1)])


def build_initial_state(k: int = 1, method: str = "exact", T: float | None = None, dt: float = 0.05) -> np.ndarray:
    """Codespace initial state of the [[6k,2k,2]] code in flat qubit order.

    (i,x) qubits hold an X-basis cat, (2i-1,0)/(2i,0) pairs hold Bell pairs and
    (i,z) qubits hold a Z-basis cat.  ``method="adiabatic"`` prepares each part
    by :func:`prepare_cat` (Bell pairs as two-qubit cats) instead of writing
    the amplitudes down directly.
    """
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    n = 6 * k
    _guard(n)
    m = 2 * k
    if method == "exact":
        parts = [cat_state(m, "X")] + [cat_state(2, "Z")] * k + [cat_state(m, "Z")]
    elif method == "adiabatic":
        def prep(size, basis):
            res = converge_cat(size, basis) if T is None else prepare_cat(size, basis, T, max(1, math.ceil(T / dt)))
            return res.state
        parts = [prep(m, "X")] + [prep(2, "Z")] * k + [prep(m, "Z")]
    else:
        raise ParameterError(f"unknown preparation method {method!r}")
    grouped = product_state(parts)
    axes = np.argsort(_grouped_order(k))
    return grouped.reshape([2] * n).transpose(axes).reshape(-1)


def codespace_basis(c: StabilizerCode) -> np.ndarray:
    """Orthonormal basis (columns) of the joint +1 eigenspace of the generators."""
    _guard(c.n)
    dim = 1 << c.n
    proj = sp.identity(dim, dtype=complex, format="csr")
    for g in c.generators:
        proj = proj @ ((sp.identity(dim, format="csr") + pauli_matrix(g)) * 0.5)
    w, v = np.linalg.eigh(proj.toarray())
    return v[:, w > 0.5]


def restrict_to_codespace(h: PauliHamiltonian, c: StabilizerCode) -> np.ndarray:
    b = codespace_basis(c)
    return b.conj().T @ dense_matrix(h) @ b


# ---------------------------------------------------------------------------
# dynamical decoupling


def local_control_hamiltonian(target: PauliString) -> PauliHamiltonian:
    """Sum of the single-qubit factors of ``target``."""
    return PauliHamiltonian(target.n, tuple(
        (1.0, PauliString.from_sparse(target.n, {q: target.char(q)})) for q in target.support
    ))


@dataclass(frozen=True)
class DDPulse:
    """A many-body decoupling pulse.

    ``method="exact"`` applies ``exp(-i pi/2 target)`` instantaneously after a
    free evolution of length ``tau``; ``method="local"`` drives the sum of the
    target's single-qubit factors with amplitude ``alpha = pi / (2 tau)``
    simultaneously with the system Hamiltonian for time ``tau``.
    """

    target: PauliString
    method: str = "local"
    tau: float = 0.05

    def __post_init__(self):
        if self.method not in ("exact", "local"):
            raise ParameterError(f"unknown pulse method {self.method!r}")
        if not self.tau > 0:
            raise ParameterError(f"pulse duration must be positive, got {self.tau}")

    @property
    def alpha(self) -> float:
        return math.pi / (2 * self.tau)


def _check_pulse(h: PauliHamiltonian, target: PauliString) -> None:
    bad = [p for p in h.operators if not commutes(p, target)]
    if bad:
        raise InvalidPulseError(f"pulse {target} anticommutes with {len(bad)} Hamiltonian terms, e.g. {bad[0]}")


def dd_step(psi: np.ndarray, h_aqc: PauliHamiltonian, pulse: DDPulse) -> np.ndarray:
    _check_pulse(h_aqc, pulse.target)
    if pulse.method == "exact":
        return -1j * apply_pauli(evolve(psi, h_aqc, pulse.tau), pulse.target)
    h = h_aqc + local_control_hamiltonian(pulse.target) * pulse.alpha
    return evolve(psi, h, pulse.tau)


@dataclass(frozen=True)
class FidelityRecord:
    n_pulses: int
    tau: float
    infidelity: float
    bound: float

    def to_dict(self) -> dict:
        return {"tau": self.tau, "n_d": self.n_pulses, "infidelity": self.infidelity, "bound": self.bound}


def spectral_norm(h: PauliHamiltonian) -> float:
    return float(np.linalg.norm(dense_matrix(h), 2))


def pulse_sequence(n: int) -> tuple[PauliString, PauliString]:
    return all_x(n), all_z(n)


def dd_scaling_experiment(
    h_aqc: PauliHamiltonian,
    taus: Iterable[float],
    nds: Iterable[int],
    psi0: np.ndarray | None = None,
) -> list[FidelityRecord]:
    """Infidelity between exact and local-control pulse trains.

    ``n_d`` counts pulse applications, alternating ``X_all, Z_all, X_all, ...``.
    Both trajectories start from :func:`build_initial_state` unless ``psi0`` is
    given.  ``bound`` is the first-order error estimate ``n_d ||h|| tau pi/4``
    with the spectral norm.
    """
    n = h_aqc.n
    if n > 12:
        raise ResourceError(f"DD sweeps are limited to 12 qubits, got {n}")
    nds = sorted(set(int(v) for v in nds))
    if nds and nds[0] < 0:
        raise ParameterError("pulse counts must be >= 0")
    if psi0 is None:
        if n % 6:
            raise ParameterError(f"cannot build a [[6k,2k,2]] initial state on {n} qubits")
        psi0 = build_initial_state(n // 6)
    targets = pulse_sequence(n)
    for t in targets:
        _check_pulse(h_aqc, t)
    norm = spectral_norm(h_aqc)
    records = []
    for tau in taus:
        if not tau > 0:
            raise ParameterError(f"tau must be positive, got {tau}")
        alpha = math.pi / (2 * tau)
        free = propagator(h_aqc, tau)
        local = [propagator(h_aqc + local_control_hamiltonian(t) * alpha, tau) for t in targets]
        exact_state = psi0.astype(complex)
        local_state = psi0.astype(complex)
        done = 0
        for nd in nds:
            while done < nd:
                j = done % 2
                exact_state = -1j * apply_pauli(free(exact_state), targets[j])
                local_state = local[j](local_state)
                done += 1
            inf = max(0.0, 1.0 - fidelity(exact_state, local_state))
            records.append(FidelityRecord(nd, float(tau), inf, nd * norm * tau * math.pi / 4))
    return records


def bound_constant(records: Iterable[FidelityRecord]) -> float:
    """Smallest C with ``infidelity <= C * bound**2`` over all records."""
    ratios = [r.infidelity / r.bound**2 for r in records if r.bound > 0]
    return max(ratios, default=0.0)


@dataclass(frozen=True)
class FitSummary:
    slope: float
    intercept: float
    r2: float

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2}


def fit_loglog(xs: Sequence[float], ys: Sequence[float]) -> FitSummary:
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    if len(lx) < 2:
        raise ParameterError("a log-log fit needs at least two points")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return FitSummary(float(slope), float(intercept), r2)


# ---------------------------------------------------------------------------
# decoupling group


def decoupling_group_elements(n: int) -> list[PauliString]:
    x, z = pulse_sequence(n)
    return [PauliString.identity(n), x, z, multiply(x, z)]


def orbit_signs(error: PauliString, group: Sequence[PauliString]) -> list[int]:
    """Signs s_g with ``g E g^dagger = s_g E``."""
    return [1 - 2 * symplectic_product(g, error) for g in group]


def orbit_average(error: PauliString, group: Sequence[PauliString]) -> np.ndarray:
    e = pauli_matrix(error).toarray()
    acc = np.zeros_like(e)
    for g in group:
        gm = pauli_matrix(g).toarray()
        acc += gm @ e @ gm.conj().T
    return acc / len(group)


def universal_decoupling_group(c: StabilizerCode) -> list[PauliString]:
    """``[X_all, Z_all]`` after checking they are stabilizers and decouple every
    weight-one Pauli at first order."""
    gens = pulse_sequence(c.n)
    for g in gens:
        if not c.in_stabilizer_group(g):
            raise CodeInconsistencyError(f"{g} is not in the stabilizer group")
    group = decoupling_group_elements(c.n)
    for q in range(c.n):
        for ch in "XYZ":
            e = PauliString.from_sparse(c.n, {q: ch})
            if sum(orbit_signs(e, group)) != 0:
                raise CodeInconsistencyError(f"single-qubit {ch} on qubit {q} survives the group average")
    return list(gens)
