"""Random nearest-neighbour qubit-chain Hamiltonians and their eigenstatistics."""

__version__ = "0.1.0"

from .ensembles import EnsembleSpec, Family, FixedKind, SampledHamiltonian, fixed_hamiltonian, sample  # noqa: E402
from .pauli import PauliString, commutes, mul, to_dense  # noqa: E402
from .spectra import Spectrum, diagonalize, hamiltonian_spectrum  # noqa: E402

__all__ = [
    "EnsembleSpec",
    "Family",
    "FixedKind",
    "PauliString",
    "SampledHamiltonian",
    "Spectrum",
    "commutes",
    "diagonalize",
    "fixed_hamiltonian",
    "hamiltonian_spectrum",
    "mul",
    "sample",
    "to_dense",
]
