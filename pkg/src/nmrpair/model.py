"""Two-spin liquid-state NMR Hamiltonians and closed (relaxation-free) evolution.

All Hamiltonians are stored divided by hbar, so entries are angular
frequencies in rad/s and hbar never appears numerically.  The static part is
diagonal in the computational basis; the rotating-wave transformation
``diag(e^{i w t}, 1, 1, e^{-i w t})`` removes the drive's explicit time
dependence and leaves a constant 4x4 matrix whose exponential gives the
exact propagator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConsistencyError, ValidationError
from .linalg import DensityMatrix, I2, as_density, kron, pauli, validate_density, validate_state_vector

__all__ = [
    "NmrParameters",
    "h_sys",
    "h_rf",
    "h_tilde",
    "rotating_phase",
    "propagator",
    "evolve",
    "evolve_series",
    "lab_frame_evolve_oracle",
]

_SX, _SY, _SZ = pauli("x"), pauli("y"), pauli("z")


@dataclass(frozen=True)
class NmrParameters:
    """Frequency parameters of a two-spin liquid-state NMR system, in rad/s.

    Attributes
    ----------
    mean_larmor : float
        (w1 + w2) / 2, the average of the two Larmor frequencies.
    half_difference : float
        (w1 - w2) / 2, half the chemical-shift splitting.
    coupling : float
        Scalar spin-spin coupling J.
    drive_1, drive_2 : float
        Half the nutation amplitudes g1/2 and g2/2 of the transverse field
        as seen by each spin.
    drive_frequency : float
        Carrier frequency w of the rotating transverse field.
    """

    mean_larmor: float
    half_difference: float
    coupling: float
    drive_1: float
    drive_2: float
    drive_frequency: float

    def __post_init__(self):
        values = (
            self.mean_larmor,
            self.half_difference,
            self.coupling,
            self.drive_1,
            self.drive_2,
            self.drive_frequency,
        )
        if not all(math.isfinite(v) for v in values):
            raise ValidationError("all frequency parameters must be finite")
        if self.mean_larmor < 0:
            raise ValidationError("mean Larmor frequency must be nonnegative")
        if self.drive_1 < 0 or self.drive_2 < 0:
            raise ValidationError("drive amplitudes must be nonnegative")

    @property
    def omega_1(self) -> float:
        return self.mean_larmor + self.half_difference

    @property
    def omega_2(self) -> float:
        return self.mean_larmor - self.half_difference

    def at_drive_frequency(self, omega: float) -> "NmrParameters":
        return replace(self, drive_frequency=omega)

    def scaled(self, factor: float) -> "NmrParameters":
        """All six frequencies multiplied by ``factor`` (e.g. 2 pi)."""
        return NmrParameters(
            mean_larmor=self.mean_larmor * factor,
            half_difference=self.half_difference * factor,
            coupling=self.coupling * factor,
            drive_1=self.drive_1 * factor,
            drive_2=self.drive_2 * factor,
            drive_frequency=self.drive_frequency * factor,
        )

    @classmethod
    def typical(cls, drive_frequency: float | None = None) -> "NmrParameters":
        """Typical homonuclear liquid-state values; drive on resonance by default."""
        a = 3e8
        return cls(
            mean_larmor=a,
            half_difference=1e4,
            coupling=3e2,
            drive_1=5e4,
            drive_2=5e4,
            drive_frequency=a if drive_frequency is None else drive_frequency,
        )


def h_sys(p: NmrParameters) -> np.ndarray:
    """Static Hamiltonian / hbar: Zeeman terms plus scalar coupling (diagonal)."""
    return (
        -(p.omega_1 / 2.0) * kron(_SZ, I2)
        - (p.omega_2 / 2.0) * kron(I2, _SZ)
        + p.coupling * kron(_SZ, _SZ)
    )


def h_rf(p: NmrParameters, t: float) -> np.ndarray:
    """Transverse rotating-field Hamiltonian / hbar at lab time ``t``."""
    c = np.cos(p.drive_frequency * t)
    s = np.sin(p.drive_frequency * t)
    return c * (-p.drive_1 * kron(_SX, I2) - p.drive_2 * kron(I2, _SX)) + s * (
        p.drive_1 * kron(_SY, I2) + p.drive_2 * kron(I2, _SY)
    )


def _h_tilde_direct(p: NmrParameters) -> np.ndarray:
    a, b, c = p.mean_larmor, p.half_difference, p.coupling
    d, e, w = p.drive_1, p.drive_2, p.drive_frequency
    return -np.array(
        [
            [a - w - c, e, d, 0.0],
            [e, b + c, 0.0, d],
            [d, 0.0, -b + c, e],
            [0.0, d, e, -a + w - c],
        ],
        dtype=complex,
    )


def _h_tilde_operator(p: NmrParameters) -> np.ndarray:
    return (
        -((p.omega_1 - p.drive_frequency) / 2.0) * kron(_SZ, I2)
        - ((p.omega_2 - p.drive_frequency) / 2.0) * kron(I2, _SZ)
        + p.coupling * kron(_SZ, _SZ)
        - p.drive_1 * kron(_SX, I2)
        - p.drive_2 * kron(I2, _SX)
    )


def h_tilde(p: NmrParameters) -> np.ndarray:
    """Rotating-frame Hamiltonian / hbar (time independent, Hermitian).

    Built two independent ways -- the explicit 4x4 layout and the operator
    sum over Kronecker products -- which must agree to rounding accuracy
    relative to the parameter magnitudes.
    """
    direct = _h_tilde_direct(p)
    operator = _h_tilde_operator(p)
    scale = max(1.0, float(np.abs(direct).max()))
    gap = float(np.abs(direct - operator).max())
    if gap > 1e-12 * scale:
        raise ConsistencyError(f"rotating-frame Hamiltonian routes disagree by {gap:.3e}")
    return direct


def rotating_phase(omega: float, t: float) -> np.ndarray:
    """Diagonal frame unitary diag(e^{i w t}, 1, 1, e^{-i w t})."""
    phase = np.exp(1j * omega * t)
    return np.diag([phase, 1.0, 1.0, np.conj(phase)]).astype(complex)


def propagator(p: NmrParameters, t: float) -> np.ndarray:
    """Exact lab-frame propagator U(t), unitary to machine precision.

    The constant rotating-frame Hamiltonian is exponentiated through its
    eigendecomposition (it is Hermitian by construction), then multiplied
    by the frame phase.
    """
    if t < 0:
        raise ValidationError("propagation time must be nonnegative")
    evals, vecs = np.linalg.eigh(h_tilde(p))
    u_rot = (vecs * np.exp(-1j * evals * t)) @ vecs.conj().T
    return rotating_phase(p.drive_frequency, t) @ u_rot


def evolve(rho0, p: NmrParameters, t: float) -> DensityMatrix:
    """Closed evolution U(t) rho0 U(t)^dagger, revalidated."""
    u = propagator(p, t)
    m = as_density(rho0).matrix
    return validate_density(u @ m @ u.conj().T)


def evolve_series(rho0, p: NmrParameters, times) -> list[DensityMatrix]:
    """Closed evolution sampled at many times, diagonalising only once."""
    m = as_density(rho0).matrix
    evals, vecs = np.linalg.eigh(h_tilde(p))
    out = []
    for t in times:
        if t < 0:
            raise ValidationError("propagation times must be nonnegative")
        u = rotating_phase(p.drive_frequency, t) @ (
            (vecs * np.exp(-1j * evals * t)) @ vecs.conj().T
        )
        out.append(validate_density(u @ m @ u.conj().T))
    return out


def lab_frame_evolve_oracle(psi0, p: NmrParameters, t: float, steps: int) -> np.ndarray:
    """Brute-force lab-frame integration of the time-dependent dynamics.

    Time-ordered product of short-step exponentials with the drive term
    evaluated at each step's midpoint (second-order accurate).  Exists only
    to cross-check the rotating-frame closed form; never used in
    production paths.  For sub-1e-6 accuracy choose ``steps`` well above
    ``20 * t * (a + d + e) / (2 pi)``, i.e. many steps per period of the
    fastest frequency present.
    """
    psi = validate_state_vector(psi0)
    if t == 0:
        return psi.copy()
    if steps < 1:
        raise ValidationError("steps must be positive")
    dt = t / steps
    static = h_sys(p)
    # Midpoint drive values for every step, then a chunked, eigh-batched
    # product.  Step exponentials commute with nothing, so the product is
    # accumulated in time order.
    u_total = np.eye(4, dtype=complex)
    chunk = 16384
    for start in range(0, steps, chunk):
        k = np.arange(start, min(start + chunk, steps))
        mids = (k + 0.5) * dt
        hams = static[None, :, :] + _h_rf_batch(p, mids)
        evals, vecs = np.linalg.eigh(hams)
        phases = np.exp(-1j * evals * dt)
        us = np.einsum("nij,nj,nkj->nik", vecs, phases, vecs.conj())
        u_total = _ordered_product(us) @ u_total
    return u_total @ psi


def _h_rf_batch(p: NmrParameters, times: np.ndarray) -> np.ndarray:
    c = np.cos(p.drive_frequency * times)
    s = np.sin(p.drive_frequency * times)
    hc = -p.drive_1 * kron(_SX, I2) - p.drive_2 * kron(I2, _SX)
    hs = p.drive_1 * kron(_SY, I2) + p.drive_2 * kron(I2, _SY)
    return c[:, None, None] * hc[None, :, :] + s[:, None, None] * hs[None, :, :]


def _ordered_product(us: np.ndarray) -> np.ndarray:
    """Product us[-1] @ ... @ us[1] @ us[0] by pairwise reduction."""
    while us.shape[0] > 1:
        n = us.shape[0]
        half = n // 2
        paired = np.matmul(us[1 : 2 * half : 2], us[0 : 2 * half : 2])
        if n % 2:
            paired = np.concatenate([paired, us[-1:]], axis=0)
        us = paired
    return us[0]
