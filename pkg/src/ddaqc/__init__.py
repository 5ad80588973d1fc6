"""Construction, verification and simulation of the [[6k,2k,2]] error-detecting
code family for adiabatic quantum computation."""

from .codes import (
    StabilizerCode,
    build_6k2k2,
    build_gottesman,
    detects_all_weight_one,
    distance,
    reduce_logical,
    syndrome,
    verify_code,
)
from .hamiltonians import (
    PauliHamiltonian,
    cat_prep_hamiltonians,
    encode_hamiltonian,
    initial_hamiltonian,
    penalty_hamiltonian,
)
from .pauli import PauliString, commutes, format_pauli, multiply, parse_pauli, weight

__version__ = "0.1.0"

__all__ = [
    "PauliHamiltonian",
    "PauliString",
    "StabilizerCode",
    "build_6k2k2",
    "build_gottesman",
    "cat_prep_hamiltonians",
    "commutes",
    "detects_all_weight_one",
    "distance",
    "encode_hamiltonian",
    "format_pauli",
    "initial_hamiltonian",
    "multiply",
    "parse_pauli",
    "penalty_hamiltonian",
    "reduce_logical",
    "syndrome",
    "verify_code",
    "weight",
]
