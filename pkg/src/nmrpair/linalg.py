"""Dense complex matrix primitives for two-qubit work.

Everything here operates on plain ``numpy`` arrays: 2x2 single-qubit
operators, 4x4 two-qubit operators and density matrices, and the 16x16
superoperators used by the relaxation solver.  Matrices are row-major and
indexed ``(row, col)`` from zero.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import PositivityWarning, ValidationError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "pauli",
    "kron",
    "expm",
    "herm_eigvals",
    "DensityMatrix",
    "validate_density",
    "partial_trace_B",
    "basis_ket",
    "bell_ket",
    "ket_density",
    "validate_state_vector",
    "hermiticity_defect",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances for density-matrix validation.

    ``structural`` bounds Hermiticity and trace defects; ``positivity``
    bounds how negative the smallest eigenvalue may be before it is even
    worth a warning.  Phenomenological relaxation output drifts slightly
    below zero, hence the looser positivity default.
    """

    structural: float = 1e-10
    positivity: float = 1e-8


DEFAULT_TOL = Tolerances()

# How negative an eigenvalue may be before validation fails outright rather
# than warning.  Small transient negativity is expected from the relaxation
# model; anything past this floor indicates a genuinely invalid input.
POSITIVITY_FLOOR = 1e-3

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)


def pauli(axis: str) -> np.ndarray:
    """Return a copy of the Pauli matrix for ``axis`` in {'x', 'y', 'z'}."""
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValidationError(f"unknown Pauli axis {axis!r}; expected 'x', 'y' or 'z'")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, ``(a ⊗ b)[i·rb+k, j·cb+l] = a[i,j]·b[k,l]``."""
    return np.kron(np.asarray(a), np.asarray(b))


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential of a square complex matrix.

    Uses scaling-and-squaring with Pade approximation, which handles the
    non-normal (non-diagonalisable) generators produced by the relaxation
    model.  Raises :class:`ValidationError` for non-square input.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expm requires a square matrix, got shape {m.shape}")
    return scipy.linalg.expm(m)


def herm_eigvals(m: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, in descending order.

    Raises :class:`ValidationError` if ``m`` deviates from Hermiticity by
    more than ``tol`` relative to its magnitude.
    """
    m = np.asarray(m, dtype=complex)
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    defect = hermiticity_defect(m)
    if defect > tol * scale:
        raise ValidationError(f"matrix is not Hermitian: max |m - m†| = {defect:.3e}")
    return np.linalg.eigvalsh(m)[::-1]


def hermiticity_defect(m: np.ndarray) -> float:
    """Max-norm distance of ``m`` from its own conjugate transpose."""
    m = np.asarray(m)
    return float(np.abs(m - m.conj().T).max())


@dataclass(frozen=True)
class DensityMatrix:
    """A validated 4x4 two-qubit density matrix.

    ``min_eigenvalue`` is diagnostic metadata: phenomenological relaxation
    is not a completely positive map and can push the smallest eigenvalue
    slightly negative.  The matrix is stored as validated, never clamped.
    """

    matrix: np.ndarray
    min_eigenvalue: float

    def __post_init__(self):
        self.matrix.setflags(write=False)


def validate_density(
    m: np.ndarray,
    tol: Tolerances = DEFAULT_TOL,
    positivity_floor: float | None = POSITIVITY_FLOOR,
) -> DensityMatrix:
    """Check two-qubit density-matrix invariants and wrap the result.

    Parameters
    ----------
    m : array_like
        4x4 complex matrix.
    tol : Tolerances
        Structural (Hermiticity/trace) and positivity tolerances.
    positivity_floor : float or None
        Eigenvalues below ``-positivity_floor`` raise; eigenvalues in
        ``[-positivity_floor, -tol.positivity)`` only warn.  ``None``
        disables the fatal check entirely (relaxation trajectories).

    Raises
    ------
    ValidationError
        Wrong shape, Hermiticity or trace defect beyond ``tol.structural``,
        or negativity past the floor.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > tol.structural:
        raise ValidationError(f"not Hermitian: max |m - m†| = {defect:.3e}")
    trace_defect = abs(m.trace() - 1.0)
    if trace_defect > tol.structural:
        raise ValidationError(f"trace differs from 1 by {trace_defect:.3e}")
    min_eig = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())
    if min_eig < -tol.positivity:
        if positivity_floor is not None and min_eig < -positivity_floor:
            raise ValidationError(f"matrix has negative eigenvalue {min_eig:.3e}")
        warnings.warn(
            f"density matrix has negative eigenvalue {min_eig:.3e}",
            PositivityWarning,
            stacklevel=2,
        )
    return DensityMatrix(matrix=m.copy(), min_eigenvalue=min_eig)


def as_density(rho, tol: Tolerances = DEFAULT_TOL) -> DensityMatrix:
    """Coerce an array or :class:`DensityMatrix` to a validated wrapper."""
    if isinstance(rho, DensityMatrix):
        return rho
    return validate_density(rho, tol=tol)


def partial_trace_B(rho) -> np.ndarray:
    """Reduced 2x2 state of the first qubit (trace out the second)."""
    m = as_density(rho).matrix.reshape(2, 2, 2, 2)
    return np.einsum("abcb->ac", m)


def basis_ket(label: str) -> np.ndarray:
    """Computational basis ket, e.g. ``basis_ket('01')``."""
    if label not in ("00", "01", "10", "11"):
        raise ValidationError(f"unknown basis label {label!r}")
    psi = np.zeros(4, dtype=complex)
    psi[int(label, 2)] = 1.0
    return psi


_BELL = {
    "phi_plus": ("00", "11", 1.0),
    "phi_minus": ("00", "11", -1.0),
    "psi_plus": ("01", "10", 1.0),
    "psi_minus": ("01", "10", -1.0),
}


def bell_ket(name: str) -> np.ndarray:
    """One of the four Bell states: phi_plus, phi_minus, psi_plus, psi_minus."""
    try:
        a, b, sign = _BELL[name]
    except KeyError:
        raise ValidationError(f"unknown Bell state {name!r}")
    return (basis_ket(a) + sign * basis_ket(b)) / np.sqrt(2.0)


def ket_density(psi: np.ndarray) -> np.ndarray:
    """Projector |psi><psi| of a (normalised) pure state."""
    psi = validate_state_vector(psi)
    return np.outer(psi, psi.conj())


def validate_state_vector(psi: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Check unit norm of a 4-component pure state."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (4,):
        raise ValidationError(f"expected a 4-component state vector, got {psi.shape}")
    defect = abs(np.vdot(psi, psi).real - 1.0)
    if defect > tol:
        raise ValidationError(f"state vector norm differs from 1 by {defect:.3e}")
    return psi
