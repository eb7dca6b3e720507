"""Dense complex linear algebra for one- and two-qubit operators.

Matrices are plain numpy arrays (complex128, row major) of dimension 2 or 4.
The two-qubit basis order is [++, +-, -+, --], with the excited state |+>
first in each single-qubit factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-10

# spectral junk below _CLAMP_TOL is roundoff, above _FAILURE_TOL the input was bad
_CLAMP_TOL = 1e-9
_FAILURE_TOL = 1e-6


class ValidationError(ValueError):
    """A matrix failed density-matrix validation."""


class HermiticityError(ValidationError):
    pass


class TraceError(ValidationError):
    pass


class PositivityError(ValidationError):
    pass


class NumericalFailureError(RuntimeError):
    """A numerical routine left its guaranteed regime."""


def as_matrix(m, dims=(2, 4)) -> np.ndarray:
    """Coerce to a square complex matrix whose dimension is in ``dims``."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] not in dims:
        raise ValueError(f"expected dimension in {dims}, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product of two single-qubit operators, first factor leftmost.

    Consistent with the [++, +-, -+, --] basis order: row i of the product
    is (i // 2) of the first factor and (i % 2) of the second.
    """
    a = as_matrix(a, dims=(2,))
    b = as_matrix(b, dims=(2,))
    return np.kron(a, b)


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def hermitian_eigvals(a, herm_tol: float = 1e-10) -> np.ndarray:
    """Real spectrum of a Hermitian matrix, ascending."""
    a = as_matrix(a)
    if np.abs(a - a.conj().T).max() > herm_tol:
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(a)


def product_spectrum(m) -> np.ndarray:
    """Eigenvalues of a spin-flip product matrix, descending, clamped to >= 0.

    The input must be of the form rho @ rho_tilde for a valid two-qubit
    density matrix; that product is not Hermitian but its spectrum is real
    and nonnegative up to roundoff.  Imaginary parts and negative parts up
    to 1e-9 are discarded; parts beyond 1e-6 raise NumericalFailureError
    because they mean the input was not such a product.
    """
    m = as_matrix(m, dims=(4,))
    vals = np.linalg.eigvals(m)
    worst_imag = np.abs(vals.imag).max()
    worst_neg = -min(vals.real.min(), 0.0)
    if worst_imag > _FAILURE_TOL or worst_neg > _FAILURE_TOL:
        raise NumericalFailureError(
            "spectrum has imaginary or negative parts "
            f"(imag {worst_imag:.3e}, neg {worst_neg:.3e}); "
            "input is not a valid spin-flip product"
        )
    real = vals.real.copy()
    real[real < 0.0] = 0.0
    return np.sort(real)[::-1]


@dataclass(frozen=True)
class DensityMatrix:
    """A validated quantum state: Hermitian, unit trace, positive semidefinite.

    Instances are immutable; ``mat`` is a read-only array.  Construct via
    :func:`validate_density`.
    """

    n_qubits: int
    mat: np.ndarray

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits


def validate_density(m, positivity_tol: float = POSITIVITY_TOL) -> DensityMatrix:
    """Validate a matrix as a density operator and wrap it.

    Raises HermiticityError, TraceError or PositivityError, naming the
    violated property.  ``positivity_tol`` bounds how far below zero the
    smallest eigenvalue may sit.
    """
    a = as_matrix(m)
    herm_defect = np.abs(a - a.conj().T).max()
    if herm_defect > HERMITICITY_TOL:
        raise HermiticityError(
            f"hermiticity defect {herm_defect:.3e} exceeds {HERMITICITY_TOL:.0e}"
        )
    trace_defect = abs(a.trace() - 1.0)
    if trace_defect > TRACE_TOL:
        raise TraceError(f"trace defect {trace_defect:.3e} exceeds {TRACE_TOL:.0e}")
    smallest = np.linalg.eigvalsh(0.5 * (a + a.conj().T))[0]
    if smallest < -positivity_tol:
        raise PositivityError(
            f"smallest eigenvalue {smallest:.3e} below -{positivity_tol:.0e}"
        )
    a = a.copy()
    a.setflags(write=False)
    return DensityMatrix(n_qubits=1 if a.shape[0] == 2 else 2, mat=a)


def partial_trace(m, keep: str) -> np.ndarray:
    """Reduced single-qubit operator of a two-qubit one; ``keep`` is 'A' or 'B'."""
    a = as_matrix(m, dims=(4,)).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ikjk->ij", a)
    if keep == "B":
        return np.einsum("kikj->ij", a)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
