"""Chimera graphs, the three 8-node test networks, and native-ID remapping.

Native qubit IDs follow the D-Wave linear numbering: qubit ``q`` lives in unit
cell ``q // 8`` at position ``q % 8``. Positions 0-3 form one shore of the
K(4,4) cell and couple to the vertically adjacent cells; positions 4-7 form
the other shore and couple to the horizontally adjacent cells.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

CELL_SIZE = 8
SHORE_SIZE = 4

# Cross layout used for generated Chimera graphs: the four shore-0 qubits sit
# in a vertical column, the four shore-1 qubits in a horizontal row, both
# centred on the cell centre with unit dot spacing.  Cells sit on a square
# grid of pitch CELL_PITCH.
DOT_SPACING = 1.0
CELL_PITCH = 6.0

LENGTH_TOL = 1e-9


class MalformedNetworkError(ValueError):
    pass


class EdgeClass(str, Enum):
    INTERNAL = "internal"
    EXTERNAL = "external"


def cell(native: int) -> int:
    return native // CELL_SIZE


def position(native: int) -> int:
    return native % CELL_SIZE


def classify(a: int, b: int) -> EdgeClass:
    """Internal if both qubits sit in the same unit cell."""
    return EdgeClass.INTERNAL if cell(a) == cell(b) else EdgeClass.EXTERNAL


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    length: float
    edge_class: EdgeClass

    def key(self) -> tuple[int, int]:
        return (min(self.a, self.b), max(self.a, self.b))


@dataclass(frozen=True)
class Network:
    """Immutable spin network over native qubit IDs.

    ``labels`` maps canonical index (position in ``nodes``) to the native
    label; for the built-in test networks the native labels are the node
    numbers used in the figures.  ``injection`` is the default native label
    for a localized initial excitation, when one is defined.
    """

    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]
    coords: Mapping[int, tuple[float, float]] | None = None
    name: str = ""
    injection: int | None = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(n) for n in self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        index = {}
        for i, n in enumerate(self.nodes):
            if n < 0:
                raise MalformedNetworkError(f"negative native id {n}")
            if n in index:
                raise MalformedNetworkError(f"duplicate node {n}")
            index[n] = i
        object.__setattr__(self, "_index", index)

        seen = set()
        for e in self.edges:
            if e.a == e.b:
                raise MalformedNetworkError(f"self-loop on node {e.a}")
            if e.a not in index or e.b not in index:
                raise MalformedNetworkError(f"edge ({e.a}, {e.b}) has an endpoint outside the node list")
            if e.key() in seen:
                raise MalformedNetworkError(f"duplicate edge ({e.a}, {e.b})")
            seen.add(e.key())
            if not e.length > 0:
                raise MalformedNetworkError(f"edge ({e.a}, {e.b}) has non-positive length {e.length}")
            if e.edge_class != classify(e.a, e.b):
                raise MalformedNetworkError(f"edge ({e.a}, {e.b}) is misclassified as {e.edge_class.value}")
        if self.edges:
            shortest = min(e.length for e in self.edges)
            if abs(shortest - 1.0) > LENGTH_TOL:
                raise MalformedNetworkError(f"shortest edge has length {shortest}, expected 1")
        if self.injection is not None and self.injection not in index:
            raise MalformedNetworkError(f"injection node {self.injection} not in network")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def labels(self) -> dict[int, int]:
        return dict(enumerate(self.nodes))

    def index_of(self, native: int) -> int:
        try:
            return self._index[native]
        except KeyError:
            raise KeyError(f"node {native} not in network {self.name!r}") from None

    def degree(self, native: int) -> int:
        return sum(native in (e.a, e.b) for e in self.edges)

    def edges_of_class(self, edge_class: EdgeClass) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.edge_class == edge_class)


@dataclass(frozen=True)
class IndexMap:
    forward: Mapping[int, int]
    backward: tuple[int, ...]

    def __len__(self):
        return len(self.backward)


def remap(net: Network | Sequence[int]) -> IndexMap:
    """Order-preserving compaction of native IDs onto ``0..N-1``."""
    nodes = net.nodes if isinstance(net, Network) else tuple(int(n) for n in net)
    if not nodes:
        raise MalformedNetworkError("cannot remap an empty node list")
    forward = {}
    for i, n in enumerate(nodes):
        if n in forward:
            raise MalformedNetworkError(f"duplicate native id {n}")
        forward[n] = i
    return IndexMap(forward=forward, backward=tuple(nodes))


def rescale_lengths(lengths: Sequence[float]) -> list[float]:
    """Divide by the shortest length so the minimum becomes exactly 1."""
    lengths = [float(x) for x in lengths]
    if not lengths:
        return []
    shortest = min(lengths)
    if not shortest > 0:
        raise MalformedNetworkError(f"non-positive edge length {shortest}")
    return [x / shortest for x in lengths]


def _coordinate_lengths(pairs, coords) -> list[float]:
    out = []
    for a, b in pairs:
        if a not in coords or b not in coords:
            missing = a if a not in coords else b
            raise MalformedNetworkError(f"missing coordinate for node {missing}")
        (xa, ya), (xb, yb) = coords[a], coords[b]
        out.append(math.hypot(xa - xb, ya - yb))
    return out


def make_network(
    nodes: Iterable[int],
    pairs: Iterable[tuple[int, int]],
    lengths: Sequence[float] | None = None,
    coords: Mapping[int, tuple[float, float]] | None = None,
    name: str = "",
    injection: int | None = None,
) -> Network:
    """Build a network, classifying edges and rescaling lengths.

    Lengths come from ``lengths`` when given, otherwise from Euclidean
    distances between ``coords``; either way they are rescaled so the
    shortest edge has length 1.
    """
    nodes = tuple(int(n) for n in nodes)
    pairs = [(int(a), int(b)) for a, b in pairs]
    if lengths is None:
        if coords is None:
            raise MalformedNetworkError("need either explicit lengths or node coordinates")
        raw = _coordinate_lengths(pairs, coords)
    else:
        raw = list(lengths)
        if len(raw) != len(pairs):
            raise MalformedNetworkError(f"{len(pairs)} edges but {len(raw)} lengths")
    scaled = rescale_lengths(raw)
    edges = tuple(Edge(a, b, ell, classify(a, b)) for (a, b), ell in zip(pairs, scaled))
    if coords is not None:
        coords = {int(k): (float(v[0]), float(v[1])) for k, v in coords.items()}
    return Network(nodes, edges, coords=coords, name=name, injection=injection)


def euclidean_lengths(net: Network) -> list[float]:
    """Per-edge lengths, shortest rescaled to 1.

    Networks with stored edge lengths and no coordinates (the built-in test
    networks) return the stored values.
    """
    pairs = [(e.a, e.b) for e in net.edges]
    if net.coords is None:
        if net.edges and all(e.length > 0 for e in net.edges):
            return [e.length for e in net.edges]
        raise MalformedNetworkError(f"network {net.name!r} has no coordinates")
    return rescale_lengths(_coordinate_lengths(pairs, net.coords))


def chimera_coordinates(rows: int, cols: int) -> dict[int, tuple[float, float]]:
    coords = {}
    offsets = [(k - (SHORE_SIZE - 1) / 2) * DOT_SPACING for k in range(SHORE_SIZE)]
    for r in range(rows):
        for c in range(cols):
            base = (r * cols + c) * CELL_SIZE
            cx, cy = c * CELL_PITCH, -r * CELL_PITCH
            for k in range(SHORE_SIZE):
                coords[base + k] = (cx, cy - offsets[k])
                coords[base + SHORE_SIZE + k] = (cx + offsets[k], cy)
    return coords


def generate_chimera(rows: int, cols: int) -> Network:
    """Chimera graph of ``rows x cols`` K(4,4) unit cells.

    Each cell is complete bipartite between positions 0-3 and 4-7.  Position
    ``p < 4`` couples to the same position in the cell below; position
    ``p >= 4`` couples to the same position in the cell to the right.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"chimera dimensions must be positive, got {rows}x{cols}")
    pairs = []
    for r in range(rows):
        for c in range(cols):
            base = (r * cols + c) * CELL_SIZE
            for i in range(SHORE_SIZE):
                for j in range(SHORE_SIZE, CELL_SIZE):
                    pairs.append((base + i, base + j))
            if r + 1 < rows:
                below = ((r + 1) * cols + c) * CELL_SIZE
                pairs.extend((base + k, below + k) for k in range(SHORE_SIZE))
            if c + 1 < cols:
                right = base + CELL_SIZE
                pairs.extend((base + k, right + k) for k in range(SHORE_SIZE, CELL_SIZE))
    nodes = range(rows * cols * CELL_SIZE)
    return make_network(nodes, pairs, coords=chimera_coordinates(rows, cols), name=f"chimera:{rows}x{cols}")


class Builtin(str, Enum):
    MAX_LENGTHS = "max-lengths"
    MIN_MAX = "min-max"
    MID_LENGTHS = "mid-lengths"


# Native labels are the qubit numbers of a 2x2 Chimera patch.  The two rings
# are reconstructed so the injection node's external coupler is the vertical
# one (the shorter of the two external lengths in each table).
_BUILTINS = {
    Builtin.MAX_LENGTHS: dict(
        nodes=(3, 7, 15, 11, 27, 31, 23, 19),
        edges=[(3, 7, 1.000), (7, 15, 2.920), (15, 11, 1.000), (11, 27, 2.174),
               (27, 31, 1.000), (31, 23, 2.920), (23, 19, 1.000), (19, 3, 2.174)],
        injection=3,
    ),
    Builtin.MIN_MAX: dict(
        nodes=(2, 6, 14, 9, 25, 29, 21, 18),
        edges=[(2, 6, 1.000), (6, 14, 6.168), (14, 9, 1.000), (9, 25, 4.592),
               (25, 29, 1.000), (29, 21, 6.168), (21, 18, 1.000), (18, 2, 4.592)],
        injection=2,
    ),
    Builtin.MID_LENGTHS: dict(
        nodes=(1, 3, 4, 7, 8, 10, 12, 15),
        edges=[(1, 4, 1.000), (1, 7, 1.000), (3, 4, 1.392), (3, 7, 1.392),
               (4, 12, 4.064), (7, 15, 4.064), (8, 12, 1.392), (8, 15, 1.392),
               (10, 12, 1.000), (10, 15, 1.000)],
        injection=1,
    ),
}


def builtin_network(kind: Builtin | str) -> Network:
    kind = Builtin(kind)
    spec = _BUILTINS[kind]
    pairs = [(a, b) for a, b, _ in spec["edges"]]
    lengths = [ell for _, _, ell in spec["edges"]]
    return make_network(spec["nodes"], pairs, lengths=lengths, name=kind.value, injection=spec["injection"])


def network_to_dict(net: Network) -> dict:
    out = {
        "name": net.name,
        "nodes": list(net.nodes),
        "edges": [
            {"a": e.a, "b": e.b, "length": e.length, "class": e.edge_class.value}
            for e in net.edges
        ],
        "labels": {str(i): n for i, n in enumerate(net.nodes)},
    }
    if net.injection is not None:
        out["injection"] = net.injection
    if net.coords is not None:
        out["coords"] = {str(n): list(net.coords[n]) for n in net.nodes}
    return out


def network_from_dict(data: Mapping) -> Network:
    try:
        nodes = [int(n) for n in data["nodes"]]
        edges = data["edges"]
        pairs = [(int(e["a"]), int(e["b"])) for e in edges]
        lengths = [float(e["length"]) for e in edges] if all("length" in e for e in edges) else None
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedNetworkError(f"bad network document: {exc}") from exc
    coords = data.get("coords")
    if coords is not None:
        coords = {int(k): tuple(v) for k, v in coords.items()}
    labels = data.get("labels")
    if labels is not None and [int(labels[str(i)]) for i in range(len(nodes))] != nodes:
        raise MalformedNetworkError("labels disagree with node order")
    net = make_network(nodes, pairs, lengths=lengths, coords=coords,
                       name=str(data.get("name", "")), injection=data.get("injection"))
    for given, e in zip(edges, net.edges):
        if "class" in given and given["class"] != e.edge_class.value:
            raise MalformedNetworkError(f"edge ({e.a}, {e.b}) declared {given['class']} but is {e.edge_class.value}")
    return net


def load_network(path: str | Path) -> Network:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedNetworkError(f"{path}: {exc}") from exc
    return network_from_dict(data)


def resolve_network(selector: str) -> Network:
    """Parse ``max-lengths``, ``chimera:RxC`` or ``file:<path>``."""
    if selector.startswith("file:"):
        return load_network(selector[len("file:"):])
    if selector.startswith("chimera:"):
        dims = selector[len("chimera:"):].lower().split("x")
        if len(dims) != 2 or not all(d.isdigit() for d in dims):
            raise ValueError(f"bad chimera size {selector!r}, expected chimera:RxC")
        return generate_chimera(int(dims[0]), int(dims[1]))
    try:
        return builtin_network(selector)
    except ValueError:
        names = ", ".join(b.value for b in Builtin)
        raise ValueError(f"unknown network {selector!r} (choose {names}, chimera:RxC or file:<path>)") from None


def adjacency(net: Network) -> np.ndarray:
    idx = remap(net).forward
    A = np.zeros((net.n, net.n), dtype=int)
    for e in net.edges:
        A[idx[e.a], idx[e.b]] = A[idx[e.b], idx[e.a]] = 1
    return A
