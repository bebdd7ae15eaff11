"""Entanglement and discord measures for two-qubit density matrices.

Concurrence is computed from the spin-flipped state; geometric discord from
the Bloch decomposition (local Bloch vectors plus correlation tensor).  The
Bloch decomposition is always computed by two independent routes -- operator
traces and closed-form element sums -- and the routes are cross-checked on
every call.  Entropic discord (projective-measurement minimisation) is an
optional, slower measure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .errors import ConsistencyError, ValidationError
from .linalg import DEFAULT_TOL, DensityMatrix, as_density, kron, pauli

__all__ = [
    "BlochDecomposition",
    "CorrelationReport",
    "spin_flip",
    "concurrence",
    "pseudo_concurrence",
    "bloch_decompose",
    "geometric_discord",
    "entropic_discord",
    "make_classical_state",
    "correlation_report",
]

_SY_SY = kron(pauli("y"), pauli("y"))
_PAULIS = [pauli("x"), pauli("y"), pauli("z")]
_I2 = np.eye(2, dtype=complex)

# Stack of the 15 traceless operators sigma_i (x) I, I (x) sigma_j,
# sigma_i (x) sigma_j used by the trace route of the Bloch decomposition.
_X_OPS = np.stack([kron(s, _I2) for s in _PAULIS])
_Y_OPS = np.stack([kron(_I2, s) for s in _PAULIS])
_T_OPS = np.stack([kron(a, b) for a in _PAULIS for b in _PAULIS])

# Dual-route agreement threshold: exact algebra, so only rounding noise
# (entries are bounded by 1) may separate the routes.
_ROUTE_TOL = 1e-10


@dataclass(frozen=True)
class BlochDecomposition:
    """Local Bloch vectors ``x``, ``y`` and 3x3 correlation tensor ``T``."""

    x: np.ndarray
    y: np.ndarray
    T: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Rebuild the density matrix from the decomposition."""
        m = np.eye(4, dtype=complex)
        for i in range(3):
            m = m + self.x[i] * _X_OPS[i] + self.y[i] * _Y_OPS[i]
        for i in range(3):
            for j in range(3):
                m = m + self.T[i, j] * _T_OPS[3 * i + j]
        return m / 4.0


@dataclass(frozen=True)
class CorrelationReport:
    """All correlation measures of one state, plus the min-eigenvalue diagnostic."""

    concurrence: float
    pseudo_concurrence: float
    geometric_discord: float
    entropic_discord: float | None
    min_eigenvalue: float


def spin_flip(rho) -> np.ndarray:
    """Spin-flipped state (sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    m = as_density(rho).matrix
    return _SY_SY @ m.conj() @ _SY_SY


def pseudo_concurrence(rho) -> float:
    """lambda_1 - lambda_2 - lambda_3 - lambda_4, without clamping at zero.

    The lambda_i are the decreasingly ordered square roots of the
    eigenvalues of rho @ spin_flip(rho).  Negative values measure how far
    the state is from the entangled region.
    """
    d = as_density(rho)
    product = d.matrix @ spin_flip(d)
    # rho * rho-tilde is similar to a PSD matrix; tiny negative eigenvalues
    # are rounding noise and are clamped before the square root.
    evals = np.linalg.eigvals(product).real
    lam = np.sqrt(np.clip(evals, 0.0, None))
    lam[::-1].sort()
    return float(lam[0] - lam[1] - lam[2] - lam[3])


def concurrence(rho) -> float:
    """Concurrence in [0, 1]: zero for separable states, one for Bell states."""
    return max(0.0, pseudo_concurrence(rho))


def _bloch_from_traces(m: np.ndarray):
    x = np.einsum("ij,kji->k", m, _X_OPS).real
    y = np.einsum("ij,kji->k", m, _Y_OPS).real
    T = np.einsum("ij,kji->k", m, _T_OPS).real.reshape(3, 3)
    return x, y, T


def _bloch_from_elements(m: np.ndarray):
    # Closed-form element sums; each component of a Hermitian matrix's
    # decomposition is real, so take .real after combining entries.
    r = m
    x = np.array(
        [
            (r[0, 2] + r[1, 3] + r[2, 0] + r[3, 1]).real,
            (1j * (r[0, 2] + r[1, 3] - r[2, 0] - r[3, 1])).real,
            (r[0, 0] + r[1, 1] - r[2, 2] - r[3, 3]).real,
        ]
    )
    y = np.array(
        [
            (r[0, 1] + r[1, 0] + r[2, 3] + r[3, 2]).real,
            (1j * (r[0, 1] - r[1, 0] + r[2, 3] - r[3, 2])).real,
            (r[0, 0] - r[1, 1] + r[2, 2] - r[3, 3]).real,
        ]
    )
    T = np.array(
        [
            [
                (r[0, 3] + r[1, 2] + r[2, 1] + r[3, 0]).real,
                (1j * (r[0, 3] - r[1, 2] + r[2, 1] - r[3, 0])).real,
                (r[0, 2] - r[1, 3] + r[2, 0] - r[3, 1]).real,
            ],
            [
                (1j * (r[0, 3] + r[1, 2] - r[2, 1] - r[3, 0])).real,
                (-r[0, 3] + r[1, 2] + r[2, 1] - r[3, 0]).real,
                (1j * (r[0, 2] - r[1, 3] - r[2, 0] + r[3, 1])).real,
            ],
            [
                (r[0, 1] + r[1, 0] - r[2, 3] - r[3, 2]).real,
                (1j * (r[0, 1] - r[1, 0] - r[2, 3] + r[3, 2])).real,
                (r[0, 0] - r[1, 1] - r[2, 2] + r[3, 3]).real,
            ],
        ]
    )
    return x, y, T


def bloch_decompose(rho) -> BlochDecomposition:
    """Bloch decomposition of a two-qubit state, with dual-route self-check.

    The production values come from operator traces; the same quantities
    are recomputed from closed-form element sums and the two routes must
    agree to rounding accuracy, else :class:`ConsistencyError` is raised.
    """
    m = as_density(rho).matrix
    x, y, T = _bloch_from_traces(m)
    xe, ye, Te = _bloch_from_elements(m)
    gap = max(
        np.abs(x - xe).max(), np.abs(y - ye).max(), np.abs(T - Te).max()
    )
    if gap > _ROUTE_TOL:
        raise ConsistencyError(
            f"Bloch decomposition routes disagree by {gap:.3e}"
        )
    return BlochDecomposition(x=x, y=y, T=T)


def geometric_discord(rho) -> float:
    """Geometric discord (measurement on the first qubit), in [0, 0.5].

    Closed form: (|x|^2 + |T|_F^2 - lambda_max(x x^t + T T^t)) / 4, clamped
    at zero against rounding.
    """
    dec = bloch_decompose(rho)
    k = np.outer(dec.x, dec.x) + dec.T @ dec.T.T
    lam_max = float(np.linalg.eigvalsh(k)[-1])
    value = 0.25 * (dec.x @ dec.x + (dec.T * dec.T).sum() - lam_max)
    return max(0.0, float(value))


def _measurement_basis(theta, phi):
    """Orthonormal pair of measurement directions on the Bloch sphere.

    ``theta``/``phi`` may be arrays; returns two stacks of 2-component kets.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    a0 = np.stack([c + 0j, e * s], axis=-1)
    a1 = np.stack([-np.conj(e) * s, c + 0j], axis=-1)
    return a0, a1


def _binary_entropy_2x2(mats: np.ndarray) -> np.ndarray:
    """Von Neumann entropy in bits of a stack of 2x2 Hermitian PSD matrices."""
    tr = np.einsum("...aa->...", mats).real
    det = (
        mats[..., 0, 0] * mats[..., 1, 1] - mats[..., 0, 1] * mats[..., 1, 0]
    ).real
    disc = np.sqrt(np.clip(tr * tr - 4.0 * det, 0.0, None))
    p = np.clip((tr + disc) / 2.0, 0.0, None)
    q = np.clip((tr - disc) / 2.0, 0.0, None)
    out = np.zeros_like(tr)
    for lam in (p, q):
        # 0 log 0 = 0; substitute 1 under the log to avoid spurious warnings
        safe = np.where(lam > 0.0, lam, 1.0)
        out = out - safe * np.log2(safe)
    return out


def _entropy_bits(m: np.ndarray) -> float:
    evals = np.linalg.eigvalsh(m)
    evals = evals[evals > 0.0]
    return float(-(evals * np.log2(evals)).sum())


def _conditional_entropy(m4: np.ndarray, theta, phi) -> np.ndarray:
    """Post-measurement conditional entropy sum_a p_a S(rho_B|a) in bits.

    Vectorised over measurement angles.  ``m4`` is the density matrix
    reshaped to (2, 2, 2, 2) with axes (A, B, A', B').
    """
    a0, a1 = _measurement_basis(theta, phi)
    total = 0.0
    for alpha in (a0, a1):
        # Unnormalised conditional block <alpha| rho |alpha>, trace = p_alpha.
        block = np.einsum("...a,abcd,...c->...bd", alpha.conj(), m4, alpha)
        # S(block / p) * p = S_unnormalised(block) + p * log2(p)
        p = np.einsum("...bb->...", block).real
        s_un = _binary_entropy_2x2(block)
        safe_p = np.where(p > 0.0, p, 1.0)
        total = total + s_un + safe_p * np.log2(safe_p)
    return total


def entropic_discord(rho, grid: tuple[int, int] = (64, 128)) -> float:
    """Entropy-based discord with measurement on the first qubit, in bits.

    Minimises the measured conditional entropy over rank-1 projective
    measurements parameterised by Bloch angles (theta, phi): a coarse grid
    scan picks the best cell, then Nelder-Mead refines it.  Deterministic.

    Parameters
    ----------
    rho : density matrix
    grid : (int, int)
        Grid resolution for theta in [0, pi] and phi in [0, 2 pi).
        Both counts must be at least 32.
    """
    if grid[0] < 32 or grid[1] < 32:
        raise ValidationError(f"grid resolution must be >= 32 per angle, got {grid}")
    d = as_density(rho)
    m = d.matrix
    m4 = m.reshape(2, 2, 2, 2)

    s_a = _entropy_bits(np.einsum("abcb->ac", m4))
    s_ab = _entropy_bits(m)

    thetas = np.linspace(0.0, np.pi, grid[0])
    phis = np.linspace(0.0, 2.0 * np.pi, grid[1], endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    values = _conditional_entropy(m4, tt, pp)
    best = np.unravel_index(int(np.argmin(values)), values.shape)
    x0 = np.array([tt[best], pp[best]])

    res = scipy.optimize.minimize(
        lambda ang: float(_conditional_entropy(m4, ang[0], ang[1])),
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-10, "maxiter": 400},
    )
    cond = min(float(values[best]), float(res.fun))
    return max(0.0, s_a - s_ab + cond)


def _check_qubit_density(m, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValidationError(f"{name} must be 2x2, got {m.shape}")
    if np.abs(m - m.conj().T).max() > DEFAULT_TOL.structural:
        raise ValidationError(f"{name} is not Hermitian")
    if abs(m.trace() - 1.0) > DEFAULT_TOL.structural:
        raise ValidationError(f"{name} does not have unit trace")
    if np.linalg.eigvalsh(m).min() < -1e-10:
        raise ValidationError(f"{name} is not positive semidefinite")
    return m


def make_classical_state(p: float, theta: float, phi: float, rho1, rho2) -> DensityMatrix:
    """Zero-discord mixture p |a0><a0| x rho1 + (1-p) |a1><a1| x rho2.

    ``(theta, phi)`` pick the orthonormal basis {|a0>, |a1>} on the first
    qubit's Bloch sphere.  Any state of this form has exactly zero discord,
    which makes this the test-fixture generator for the discord oracles.
    """
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"probability must be in [0, 1], got {p}")
    rho1 = _check_qubit_density(rho1, "rho1")
    rho2 = _check_qubit_density(rho2, "rho2")
    a0, a1 = _measurement_basis(theta, phi)
    proj0 = np.outer(a0, a0.conj())
    proj1 = np.outer(a1, a1.conj())
    return as_density(p * kron(proj0, rho1) + (1.0 - p) * kron(proj1, rho2))


def correlation_report(rho, entropic: bool = False, grid=(64, 128)) -> CorrelationReport:
    """Compute every correlation measure of ``rho`` in one pass."""
    d = as_density(rho)
    cbar = pseudo_concurrence(d)
    return CorrelationReport(
        concurrence=max(0.0, cbar),
        pseudo_concurrence=cbar,
        geometric_discord=geometric_discord(d),
        entropic_discord=entropic_discord(d, grid=grid) if entropic else None,
        min_eigenvalue=d.min_eigenvalue,
    )
