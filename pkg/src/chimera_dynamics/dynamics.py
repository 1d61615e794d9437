"""Exact single-excitation time evolution.

States are complex numpy vectors over the site basis ``|i>``.  Evolution
expands the initial state in the Hamiltonian eigenbasis, so every sample time
is computed directly from ``psi0`` with no accumulated stepping error.
``rk4_evolve`` is an independent fixed-step integrator kept for checking.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import HamiltonianMatrix, j_min

DEFAULT_SAMPLES = 2001
NORM_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
# Above this dimension the cyclic Jacobi sweep is too slow in pure Python.
JACOBI_MAX_DIM = 256


def localized_state(n: int, site: int) -> np.ndarray:
    if not 0 <= site < n:
        raise IndexError(f"site {site} out of range for {n} nodes")
    psi = np.zeros(n, dtype=complex)
    psi[site] = 1.0
    return psi


def superposition_state(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("superposition needs at least one site")
    return np.full(n, 1.0 / np.sqrt(n), dtype=complex)


def check_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"state must be a vector, got shape {psi.shape}")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalised (|psi|^2 = {norm})")
    return psi


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


def _as_array(H) -> np.ndarray:
    return H.entries if isinstance(H, HamiltonianMatrix) else np.asarray(H, dtype=float)


def jacobi_eigh(A, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigensolver for a real symmetric matrix.

    Sweeps rotate out every off-diagonal pair in row-major order until the
    off-diagonal Frobenius norm drops below ``tol * ||A||_F``.  Returns
    ascending eigenvalues and orthonormal eigenvector columns, each column
    signed so its largest-magnitude component is positive.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A)
    threshold = tol * scale
    # entries this small cannot keep the off-diagonal norm above threshold
    skip = threshold / max(n, 1)

    mask = ~np.eye(n, dtype=bool)

    def off_norm(M):
        return np.linalg.norm(M[mask])

    for _ in range(max_sweeps):
        if off_norm(A) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    t = apq / diff
                elif diff == 0.0:
                    t = 1.0
                else:
                    theta = diff / (2.0 * apq)
                    t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap, aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * ap - s * aq
                A[q, :] = s * ap + c * aq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        if off_norm(A) > threshold:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")

    evals = np.diag(A).copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], V[:, order]


def _fix_signs(V: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def eigendecompose(H, method: str = "auto") -> Spectrum:
    """Eigen-decomposition of a real symmetric Hamiltonian.

    ``method`` is ``"jacobi"``, ``"lapack"`` (numpy ``eigh``) or ``"auto"``,
    which uses Jacobi up to ``JACOBI_MAX_DIM`` sites.
    """
    A = _as_array(H)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"Hamiltonian must be square, got shape {A.shape}")
    if not np.array_equal(A, A.T):
        raise ValueError("Hamiltonian must be symmetric")
    if method == "auto":
        method = "jacobi" if A.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        evals, V = jacobi_eigh(A)
    elif method == "lapack":
        evals, V = np.linalg.eigh(A)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    V = _fix_signs(V)
    evals.setflags(write=False)
    V.setflags(write=False)
    return Spectrum(evals, V)


def evolve(spec: Spectrum, psi0, t):
    """State at time ``t`` (scalar, or a 1-D array giving one row per time).

    psi(t) = sum_k exp(-i E_k t) <v_k|psi0> v_k
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (spec.n,):
        raise ValueError(f"state has shape {psi0.shape}, spectrum has dimension {spec.n}")
    V, E = spec.eigenvectors, spec.eigenvalues
    coeffs = V.T @ psi0
    t = np.asarray(t, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(t, E))
    return (phases * coeffs) @ V.T


@dataclass(frozen=True, eq=False)
class FidelityTrace:
    times: np.ndarray
    fidelities: np.ndarray
    t_max: float
    labels: tuple[int, ...]
    initial: str
    initial_site: int | None = None

    @property
    def n(self) -> int:
        return self.fidelities.shape[1]

    @property
    def samples(self) -> int:
        return self.times.shape[0]

    def column(self, label: int) -> np.ndarray:
        return self.fidelities[:, self.labels.index(label)]


def describe_initial(psi0, labels) -> tuple[str, int | None]:
    psi0 = np.asarray(psi0)
    nz = np.flatnonzero(np.abs(psi0) > 0)
    if nz.size == 1:
        return f"localized:{labels[nz[0]]}", int(nz[0])
    if np.allclose(psi0, psi0[0]) and psi0.size > 1:
        return "superposition", None
    return "custom", None


def fidelity_trace(
    H: HamiltonianMatrix,
    psi0,
    samples: int = DEFAULT_SAMPLES,
    t_max: float | None = None,
    spectrum: Spectrum | None = None,
) -> FidelityTrace:
    """Site occupation probabilities on a uniform grid over ``[0, t_max]``.

    The window defaults to ``1 / j_min(H)``.
    """
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    psi0 = check_state(psi0)
    if t_max is None:
        t_max = 1.0 / j_min(H)
    if not t_max > 0:
        raise ValueError(f"window end must be positive, got {t_max}")
    spec = spectrum if spectrum is not None else eigendecompose(H)
    times = np.linspace(0.0, t_max, samples)
    psi = evolve(spec, psi0, times)
    fid = np.clip(np.abs(psi) ** 2, 0.0, 1.0)
    initial, site = describe_initial(psi0, H.labels)
    times.setflags(write=False)
    fid.setflags(write=False)
    return FidelityTrace(times, fid, float(t_max), tuple(H.labels), initial, site)


def _rk4_step_matrix(A: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step of ``dpsi/dt = -i A psi``, applied to every basis vector."""
    Y = np.eye(A.shape[0], dtype=complex)

    def f(Y):
        return -1j * (A @ Y)

    k1 = f(Y)
    k2 = f(Y + 0.5 * h * k1)
    k3 = f(Y + 0.5 * h * k2)
    k4 = f(Y + h * k3)
    return Y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_trajectory(H, psi0, times, step: float) -> np.ndarray:
    """RK4 states at each of the non-decreasing ``times`` (fixed step ``step``).

    The integrator walks a fixed grid ``k * step``; a checkpoint between grid
    points gets one extra partial step that is not carried forward.
    """
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    A = _as_array(H)
    psi = np.array(psi0, dtype=complex)
    if psi.shape != (A.shape[0],):
        raise ValueError(f"state has shape {psi.shape}, Hamiltonian has dimension {A.shape[0]}")
    times = np.asarray(times, dtype=float)
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("checkpoint times must be non-negative and non-decreasing")
    P = _rk4_step_matrix(A, step)
    out = np.empty((times.size, psi.size), dtype=complex)
    k = 0
    for m, t in enumerate(times):
        target = int(np.floor(t / step * (1 + 1e-14)))
        while k < target:
            psi = P @ psi
            k += 1
        rest = t - k * step
        out[m] = _rk4_step_matrix(A, rest) @ psi if rest > 1e-15 * max(t, 1.0) else psi
    return out


def rk4_evolve(H, psi0, t: float, step: float) -> np.ndarray:
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    return rk4_trajectory(H, psi0, [t], step)[0]
