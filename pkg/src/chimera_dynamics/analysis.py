"""Fidelity peaks, edge similarity, Geary's C and per-position statistics."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np
from scipy.signal import peak_prominences

from .dynamics import FidelityTrace
from .ingest import PARAMETERS, QubitDataset
from .topology import EdgeClass, Network

PEAK_PROMINENCE = 1e-3
# peaks lower than this are invisible on a fidelity plot and are ignored
PEAK_MIN_HEIGHT = 0.02
# peak values closer than this count as ties
PEAK_TIE_TOL = 1e-12
STRONG_DEVIATION = 0.10
FIDELITY_TOL = 1e-9


class NoPeakError(LookupError):
    pass


class ZeroVarianceError(ValueError):
    pass


class NoUsableEdgesError(ValueError):
    pass


def peak_indices(f: np.ndarray, prominence: float = PEAK_PROMINENCE,
                 min_height: float = 0.0) -> np.ndarray:
    """Interior samples with ``f[k] > f[k-1]``, ``f[k] >= f[k+1]``, enough prominence and height."""
    f = np.asarray(f, dtype=float)
    if f.size < 3:
        return np.empty(0, dtype=int)
    mid = f[1:-1]
    cand = np.flatnonzero((mid > f[:-2]) & (mid >= f[2:]) & (mid >= min_height)) + 1
    if cand.size == 0:
        return cand
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="some peaks have a prominence of 0")
        prom = peak_prominences(f, cand)[0]
    return cand[prom >= prominence]


@dataclass(frozen=True)
class NodePeaks:
    t_first: float
    value_first: float
    t_max: float
    value_max: float


@dataclass(frozen=True)
class PeakReport:
    """Network-wide first and maximum fidelity peaks.

    Nodes are native labels.  When no node has a peak in the window the
    time/node fields are ``None`` and ``found`` is false.
    """

    t_first: float | None
    node_first: int | None
    value_first: float | None
    t_max_peak: float | None
    node_max: int | None
    value_max: float | None
    excluded: int | None
    window: tuple[float, float]
    per_node: Mapping[int, NodePeaks] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.t_first is not None

    def to_dict(self) -> dict:
        return {
            "t_first": self.t_first,
            "node_first": self.node_first,
            "t_max_peak": self.t_max_peak,
            "node_max": self.node_max,
            "window": list(self.window),
        }


def find_peaks(trace: FidelityTrace, exclude: int | None = None,
               prominence: float = PEAK_PROMINENCE,
               min_height: float = PEAK_MIN_HEIGHT) -> PeakReport:
    """First and largest peak over every node except ``exclude`` (a canonical index).

    Ties resolve to the earliest time, then the lowest canonical index; peak
    values within ``PEAK_TIE_TOL`` of each other tie.
    """
    if exclude is not None and not 0 <= exclude < trace.n:
        raise IndexError(f"excluded node {exclude} out of range")
    times = trace.times
    best_first = None  # (k, node)
    tops = []          # (value, k, node)
    per_node = {}
    for i in range(trace.n):
        if i == exclude:
            continue
        f = trace.fidelities[:, i]
        ks = peak_indices(f, prominence, min_height)
        if ks.size == 0:
            continue
        k_first = int(ks[0])
        k_top = int(ks[np.argmax(f[ks])])
        per_node[trace.labels[i]] = NodePeaks(float(times[k_first]), float(f[k_first]),
                                              float(times[k_top]), float(f[k_top]))
        if best_first is None or (k_first, i) < best_first:
            best_first = (k_first, i)
        tops.append((float(f[k_top]), k_top, i))
    window = (float(times[0]), float(times[-1]))
    excluded = None if exclude is None else trace.labels[exclude]
    if best_first is None:
        return PeakReport(None, None, None, None, None, None, excluded, window, per_node)
    kf, nf = best_first
    top = max(v for v, _, _ in tops)
    v_max, km, nm = min((t for t in tops if t[0] >= top - PEAK_TIE_TOL), key=lambda t: (t[1], t[2]))
    return PeakReport(
        t_first=float(times[kf]), node_first=trace.labels[nf],
        value_first=float(trace.fidelities[kf, nf]),
        t_max_peak=float(times[km]), node_max=trace.labels[nm], value_max=v_max,
        excluded=excluded, window=window, per_node=per_node,
    )


def similarity(f_i: float, f_j: float) -> float:
    """1 - |f_i - f_j| for two fidelities in [0, 1]."""
    for f in (f_i, f_j):
        if not -FIDELITY_TOL <= f <= 1 + FIDELITY_TOL:
            raise ValueError(f"fidelity {f} outside [0, 1]")
    f_i = min(max(f_i, 0.0), 1.0)
    f_j = min(max(f_j, 0.0), 1.0)
    return 1.0 - abs(f_i - f_j)


@dataclass(frozen=True)
class SimilarityEntry:
    a: int
    b: int
    length: float
    sim: float


@dataclass(frozen=True)
class SimilarityGrid:
    entries: tuple[SimilarityEntry, ...]
    diagonal: Mapping[int, float]
    at_time: float
    at_kind: str

    def sim(self, a: int, b: int) -> float:
        for e in self.entries:
            if {e.a, e.b} == {a, b}:
                return e.sim
        raise KeyError(f"no edge ({a}, {b})")


def resolve_time(trace: FidelityTrace, at) -> tuple[int, str]:
    """Grid index for ``"first-peak"``, ``"max-peak"``, or an explicit time."""
    if at in ("first-peak", "max-peak"):
        report = find_peaks(trace, exclude=trace.initial_site)
        if not report.found:
            raise NoPeakError(f"no fidelity peak in window {report.window}")
        t = report.t_first if at == "first-peak" else report.t_max_peak
        return int(np.searchsorted(trace.times, t)), at
    t = float(at)
    return int(np.argmin(np.abs(trace.times - t))), "explicit"


def similarity_grid(net: Network, trace: FidelityTrace, at="first-peak") -> SimilarityGrid:
    if tuple(net.nodes) != tuple(trace.labels):
        raise ValueError("trace labels do not match the network nodes")
    k, kind = resolve_time(trace, at)
    f = trace.fidelities[k]
    idx = {label: i for i, label in enumerate(trace.labels)}
    entries = tuple(
        SimilarityEntry(e.a, e.b, e.length, similarity(f[idx[e.a]], f[idx[e.b]]))
        for e in net.edges
    )
    diagonal = {label: float(f[i]) for i, label in enumerate(trace.labels)}
    return SimilarityGrid(entries, diagonal, float(trace.times[k]), kind)


class Subset(str, Enum):
    ALL = "all"
    INTERNAL = "internal"
    EXTERNAL = "external"


@dataclass(frozen=True)
class GearyResult:
    c: float
    n: int
    edges_used: int
    subset: Subset = Subset.ALL
    parameter: str = ""
    weight_sum: float = 0.0
    strong: bool = False


def _canonical_edges(values: Mapping[int, float], edges: Iterable[tuple[int, int]]):
    usable = set()
    for a, b in edges:
        if a == b or a not in values or b not in values:
            continue
        usable.add((min(a, b), max(a, b)))
    return sorted(usable)


def gearys_c(values: Mapping[int, float], edges: Iterable[tuple[int, int]],
             subset: Subset = Subset.ALL, parameter: str = "") -> GearyResult:
    """Geary's C with unit weights on each connected ordered pair.

    C = (n-1) sum_ij w_ij (x_i - x_j)^2 / (2 sum_i (x_i - xbar)^2 sum_ij w_ij)

    The node statistics use every entry of ``values``; edges with an endpoint
    missing from ``values`` are dropped.  Sums are exactly rounded, so the
    result does not depend on edge order or orientation.
    """
    if len(values) < 2:
        raise ValueError("Geary's C needs at least two observations")
    x = {k: float(v) for k, v in values.items()}
    n = len(x)
    mean = math.fsum(x.values()) / n
    dev2 = math.fsum((v - mean) ** 2 for v in x.values())
    if dev2 == 0.0:
        raise ZeroVarianceError(f"zero variance in {parameter or 'values'}")
    usable = _canonical_edges(x, edges)
    if not usable:
        raise NoUsableEdgesError(f"no edge has both endpoints in the data ({subset.value})")
    # each undirected edge is two ordered pairs with w = 1
    num = 2.0 * math.fsum((x[a] - x[b]) ** 2 for a, b in usable)
    wsum = 2.0 * len(usable)
    c = (n - 1) * num / (2.0 * dev2 * wsum)
    return GearyResult(c=c, n=n, edges_used=len(usable), subset=Subset(subset),
                       parameter=parameter, weight_sum=wsum)


def geary_table(data: QubitDataset, net: Network,
                parameters: Iterable[str] = PARAMETERS,
                subsets: Iterable[Subset] = tuple(Subset),
                strong_threshold: float = STRONG_DEVIATION) -> list[GearyResult]:
    """Geary's C for each parameter over all, internal and external couplers.

    Only the weights change between subsets; node statistics always use the
    whole dataset.  ``strong`` marks internal/external values deviating from
    the all-coupler value by more than ``strong_threshold`` (relative).
    """
    outside = sorted(set(data.records) - set(net.nodes))
    if outside:
        raise ValueError(f"dataset qubits not in network {net.name!r}: {outside[:10]}")
    subsets = [Subset(s) for s in subsets]
    edge_sets = {
        Subset.ALL: [(e.a, e.b) for e in net.edges],
        Subset.INTERNAL: [(e.a, e.b) for e in net.edges_of_class(EdgeClass.INTERNAL)],
        Subset.EXTERNAL: [(e.a, e.b) for e in net.edges_of_class(EdgeClass.EXTERNAL)],
    }
    results = []
    for param in parameters:
        values = data.column(param)
        c_all = gearys_c(values, edge_sets[Subset.ALL], Subset.ALL, param).c
        for s in subsets:
            r = gearys_c(values, edge_sets[s], s, param)
            strong = s is not Subset.ALL and abs(r.c - c_all) > strong_threshold * abs(c_all)
            results.append(GearyResult(r.c, r.n, r.edges_used, s, param, r.weight_sum, strong))
    return results


@dataclass(frozen=True)
class Summary:
    count: int
    mean: float
    std: float
    q1: float
    median: float
    q3: float

    @classmethod
    def of(cls, xs) -> "Summary":
        xs = np.asarray(list(xs), dtype=float)
        if xs.size == 0:
            nan = float("nan")
            return cls(0, nan, nan, nan, nan, nan)
        q1, med, q3 = np.percentile(xs, [25, 50, 75])
        std = float(np.std(xs, ddof=1)) if xs.size > 1 else 0.0
        return cls(int(xs.size), float(np.mean(xs)), std, float(q1), float(med), float(q3))


@dataclass(frozen=True)
class PositionGroupStats:
    """Per-position (0-7) summaries plus the 0-3 / 4-7 orientation split."""

    positions: Mapping[int, Mapping[str, Summary]]
    orientation: Mapping[str, Mapping[str, Summary]]

    def split_means(self, param: str) -> tuple[float, float]:
        return (self.orientation["0-3"][param].mean, self.orientation["4-7"][param].mean)


def position_group_stats(data: QubitDataset) -> PositionGroupStats:
    if not data.records:
        raise ValueError("empty dataset")
    groups = {p: [r for r in data.records.values() if r.qubit % 8 == p] for p in range(8)}
    positions = {
        p: {param: Summary.of(getattr(r, param) for r in recs) for param in PARAMETERS}
        for p, recs in groups.items()
    }
    low = [r for r in data.records.values() if r.qubit % 8 < 4]
    high = [r for r in data.records.values() if r.qubit % 8 >= 4]
    orientation = {
        name: {param: Summary.of(getattr(r, param) for r in recs) for param in PARAMETERS}
        for name, recs in (("0-3", low), ("4-7", high))
    }
    return PositionGroupStats(positions, orientation)
