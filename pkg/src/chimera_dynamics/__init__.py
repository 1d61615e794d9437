"""Single-excitation dynamics and spatial-correlation analysis on Chimera spin networks."""
from .analysis import (GearyResult, NoPeakError, PeakReport, PositionGroupStats, SimilarityGrid,
                       Subset, ZeroVarianceError, find_peaks, geary_table, gearys_c,
                       position_group_stats, similarity, similarity_grid)
from .dynamics import (FidelityTrace, Spectrum, eigendecompose, evolve, fidelity_trace,
                       localized_state, rk4_evolve, rk4_trajectory, superposition_state)
from .hamiltonian import (CONSTANT, DIPOLE, Coupling, CouplingMode, HamiltonianMatrix,
                          build_hamiltonian, coupling_weight, j_min)
from .ingest import QubitDataset, QubitRecord, load_dataset, validate_against, write_dataset
from .topology import (Builtin, Edge, EdgeClass, IndexMap, Network, builtin_network,
                       euclidean_lengths, generate_chimera, make_network, remap)

__version__ = "0.1.0"
