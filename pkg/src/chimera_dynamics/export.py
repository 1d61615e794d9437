"""Deterministic CSV/JSON serialisation of simulation and analysis results.

Floats are rounded to 12 significant digits and then written in shortest
round-trip form, so repeated runs produce byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math

from .analysis import GearyResult, PeakReport, PositionGroupStats, SimilarityGrid
from .dynamics import FidelityTrace
from .hamiltonian import HamiltonianMatrix
from .ingest import PARAMETERS
from .topology import Network, network_to_dict

SIG_DIGITS = 12


def round_sig(x: float) -> float:
    return float(format(float(x), f".{SIG_DIGITS}g"))


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, str)):
        return str(x).lower() if isinstance(x, bool) else x
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(round_sig(x)) if x != 0 else "0"


def _clean(obj):
    """Round every float inside a JSON-ready structure."""
    if isinstance(obj, float):
        return None if math.isnan(obj) else round_sig(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def trace_csv(trace: FidelityTrace) -> str:
    header = ["time"] + [f"f_{label}" for label in trace.labels]
    rows = [header]
    rows.extend([t, *f] for t, f in zip(trace.times.tolist(), trace.fidelities.tolist()))
    return _csv(rows)


def trace_json(trace: FidelityTrace, meta: dict) -> str:
    doc = {
        **meta,
        "initial": trace.initial,
        "t_max": trace.t_max,
        "samples": trace.samples,
        "labels": list(trace.labels),
        "times": trace.times.tolist(),
        "fidelities": {str(label): trace.fidelities[:, i].tolist()
                       for i, label in enumerate(trace.labels)},
    }
    return dumps(doc)


def peaks_json(report: PeakReport) -> str:
    return dumps(report.to_dict())


def similarity_csv(grid: SimilarityGrid) -> str:
    rows = [("a", "b", "length", "sim")]
    rows.extend((e.a, e.b, e.length, e.sim) for e in grid.entries)
    rows.extend((i, i, None, f) for i, f in grid.diagonal.items())
    return _csv(rows)


def similarity_json(grid: SimilarityGrid) -> str:
    return dumps({
        "at_time": grid.at_time,
        "at_kind": grid.at_kind,
        "edges": [{"a": e.a, "b": e.b, "length": e.length, "sim": e.sim} for e in grid.entries],
        "diagonal": {str(i): f for i, f in grid.diagonal.items()},
    })


def geary_csv(results: list[GearyResult]) -> str:
    rows = [("parameter", "subset", "C", "n", "edges_used", "strong_flag")]
    rows.extend((r.parameter, r.subset.value, r.c, r.n, r.edges_used, r.strong) for r in results)
    return _csv(rows)


def geary_json(results: list[GearyResult]) -> str:
    return dumps([
        {"parameter": r.parameter, "subset": r.subset.value, "C": r.c, "n": r.n,
         "edges_used": r.edges_used, "strong_flag": r.strong}
        for r in results
    ])


def _position_rows(stats: PositionGroupStats):
    groups = [(str(p), stats.positions[p]) for p in sorted(stats.positions)]
    groups += [(name, stats.orientation[name]) for name in ("0-3", "4-7")]
    for name, by_param in groups:
        for param in PARAMETERS:
            s = by_param[param]
            yield name, param, s.count, s.mean, s.std, s.q1, s.median, s.q3


def positions_csv(stats: PositionGroupStats) -> str:
    rows = [("position", "parameter", "count", "mean", "std", "q1", "median", "q3")]
    rows.extend(_position_rows(stats))
    return _csv(rows)


def positions_json(stats: PositionGroupStats) -> str:
    keys = ("position", "parameter", "count", "mean", "std", "q1", "median", "q3")
    return dumps([dict(zip(keys, row)) for row in _position_rows(stats)])


def network_json(net: Network, hamiltonian: HamiltonianMatrix | None = None,
                 coupling: str | None = None) -> str:
    doc = network_to_dict(net)
    if hamiltonian is not None:
        doc["hamiltonian"] = {"coupling": coupling, **hamiltonian.to_dict()}
    return dumps(doc)


def network_csv(net: Network) -> str:
    rows = [("a", "b", "length", "class")]
    rows.extend((e.a, e.b, e.length, e.edge_class.value) for e in net.edges)
    return _csv(rows)
