"""Coupling Hamiltonians on the single-excitation subspace.

Units: hbar = 1, energies in units of the baseline coupling ``J0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .topology import IndexMap, Network, euclidean_lengths, remap


class Coupling(str, Enum):
    CONSTANT = "constant"
    DIPOLE = "dipole"


@dataclass(frozen=True)
class CouplingMode:
    kind: Coupling = Coupling.CONSTANT
    j0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Coupling(self.kind))
        if not 0 < self.j0 <= 1:
            raise ValueError(f"J0 must lie in (0, 1], got {self.j0}")


CONSTANT = CouplingMode(Coupling.CONSTANT)
DIPOLE = CouplingMode(Coupling.DIPOLE)


def coupling_weight(length: float, min_length: float = 1.0, mode: CouplingMode = CONSTANT) -> float:
    """Weight of a coupler of the given length.

    Constant couplings ignore the length; dipole couplings fall off as the
    inverse cube of the length relative to the shortest coupler.
    """
    if not length > 0 or not min_length > 0:
        raise ValueError(f"lengths must be positive, got length={length}, min_length={min_length}")
    if length < min_length:
        raise ValueError(f"length {length} is shorter than the minimum {min_length}")
    if mode.kind is Coupling.CONSTANT:
        return mode.j0
    return mode.j0 * (min_length / length) ** 3


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    entries: np.ndarray
    indexmap: IndexMap

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"Hamiltonian must be square, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("Hamiltonian must be exactly symmetric")
        if len(self.indexmap) != m.shape[0]:
            raise ValueError("index map does not match the matrix dimension")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def labels(self) -> tuple[int, ...]:
        return self.indexmap.backward

    @classmethod
    def from_dense(cls, entries, labels=None) -> "HamiltonianMatrix":
        entries = np.asarray(entries, dtype=float)
        labels = range(entries.shape[0]) if labels is None else labels
        return cls(entries, remap(list(labels)))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "labels": list(self.labels),
            "entries": self.entries.tolist(),
        }


def build_hamiltonian(net: Network, mode: CouplingMode = CONSTANT) -> HamiltonianMatrix:
    if net.n == 0:
        raise ValueError("cannot build a Hamiltonian for an empty network")
    lengths = euclidean_lengths(net)
    indexmap = remap(net)
    M = np.zeros((net.n, net.n))
    shortest = min(lengths) if lengths else 1.0
    for e, ell in zip(net.edges, lengths):
        w = coupling_weight(ell, shortest, mode)
        i, j = indexmap.forward[e.a], indexmap.forward[e.b]
        M[i, j] = w
        M[j, i] = w
    return HamiltonianMatrix(M, indexmap)


def j_min(H: HamiltonianMatrix) -> float:
    """Smallest nonzero coupling magnitude."""
    off = H.entries[~np.eye(H.n, dtype=bool)]
    nonzero = np.abs(off[off != 0])
    if nonzero.size == 0:
        raise ValueError("Hamiltonian has no nonzero coupling")
    return float(nonzero.min())
