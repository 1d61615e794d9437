"""Per-qubit parameter datasets (inverse temperature, bias, field gain, noise).

CSV files carry the header ``qubit_id,beta,b,gamma,eta``; JSON files hold an
array of objects with the same keys.  Dead qubits are simply absent.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .topology import EdgeClass, Network

PARAMETERS = ("beta", "b", "gamma", "eta")
HEADER = ("qubit_id",) + PARAMETERS
CHIP_SIZE = 2048


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class QubitRecord:
    qubit: int
    beta: float
    b: float
    gamma: float
    eta: float


@dataclass(frozen=True)
class QubitDataset:
    records: Mapping[int, QubitRecord]
    source: str = ""
    chip_size: int = CHIP_SIZE

    def __post_init__(self):
        if not self.records:
            raise DatasetError("dataset is empty")
        for q in self.records:
            if not 0 <= q < self.chip_size:
                raise DatasetError(f"qubit id {q} outside chip of {self.chip_size} qubits")
        object.__setattr__(self, "records", dict(sorted(self.records.items())))

    def __len__(self):
        return len(self.records)

    def column(self, param: str) -> dict[int, float]:
        if param not in PARAMETERS:
            raise KeyError(f"unknown parameter {param!r}; expected one of {PARAMETERS}")
        return {q: getattr(r, param) for q, r in self.records.items()}

    @classmethod
    def from_records(cls, records, source: str = "", chip_size: int = CHIP_SIZE) -> "QubitDataset":
        out = {}
        for r in records:
            if r.qubit in out:
                raise DatasetError(f"duplicate qubit_id {r.qubit}")
            out[r.qubit] = r
        return cls(out, source, chip_size)


def _parse_row(raw: Mapping, where: str) -> QubitRecord:
    try:
        qid = raw["qubit_id"]
        if isinstance(qid, bool) or (isinstance(qid, float) and not qid.is_integer()):
            raise ValueError
        qubit = int(str(qid).strip()) if not isinstance(qid, (int, float)) else int(qid)
    except (KeyError, ValueError, TypeError):
        raise DatasetError(f"{where}: bad qubit_id {raw.get('qubit_id')!r}") from None
    vals = {}
    for p in PARAMETERS:
        v = raw.get(p)
        try:
            if isinstance(v, bool) or v is None:
                raise ValueError
            x = float(v.strip()) if isinstance(v, str) else float(v)
        except (ValueError, TypeError):
            raise DatasetError(f"{where}: non-numeric {p} value {v!r}") from None
        if not math.isfinite(x):
            raise DatasetError(f"{where}: non-finite {p} value {v!r}")
        vals[p] = x
    return QubitRecord(qubit, **vals)


def _collect(rows, source, chip_size) -> QubitDataset:
    records = {}
    for where, rec in rows:
        if rec.qubit in records:
            raise DatasetError(f"{where}: duplicate qubit_id {rec.qubit}")
        if not 0 <= rec.qubit < chip_size:
            raise DatasetError(f"{where}: qubit_id {rec.qubit} outside chip of {chip_size} qubits")
        records[rec.qubit] = rec
    if not records:
        raise DatasetError(f"{source}: no records")
    return QubitDataset(records, source, chip_size)


def _read_csv(path: Path, chip_size: int) -> QubitDataset:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != HEADER:
            raise DatasetError(f"{path}: line 1: header must be {','.join(HEADER)}, got {','.join(header)}")

        def rows():
            for row in reader:
                where = f"{path}: line {reader.line_num}"
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != len(HEADER):
                    raise DatasetError(f"{where}: expected {len(HEADER)} fields, got {len(row)}")
                yield where, _parse_row(dict(zip(HEADER, row)), where)

        return _collect(rows(), str(path), chip_size)


def _read_json(path: Path, chip_size: int) -> QubitDataset:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"{path}: {exc}") from exc
    if not isinstance(data, list):
        raise DatasetError(f"{path}: expected a JSON array of records")

    def rows():
        for i, raw in enumerate(data):
            where = f"{path}: record {i}"
            if not isinstance(raw, dict):
                raise DatasetError(f"{where}: expected an object")
            yield where, _parse_row(raw, where)

    return _collect(rows(), str(path), chip_size)


def _infer_format(path: Path, fmt: str | None) -> str:
    if fmt is not None:
        fmt = fmt.lower()
    elif path.suffix.lower() == ".json":
        fmt = "json"
    else:
        fmt = "csv"
    if fmt not in ("csv", "json"):
        raise DatasetError(f"unknown dataset format {fmt!r}")
    return fmt


def load_dataset(path, fmt: str | None = None, chip_size: int = CHIP_SIZE) -> QubitDataset:
    path = Path(path)
    if _infer_format(path, fmt) == "json":
        return _read_json(path, chip_size)
    return _read_csv(path, chip_size)


def write_dataset(data: QubitDataset, path, fmt: str | None = None) -> None:
    """Write with ``repr`` floats so a reload is bit-identical."""
    path = Path(path)
    if _infer_format(path, fmt) == "json":
        rows = [{"qubit_id": r.qubit, **{p: getattr(r, p) for p in PARAMETERS}}
                for r in data.records.values()]
        path.write_text(json.dumps(rows, indent=1) + "\n", encoding="utf-8")
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for r in data.records.values():
            w.writerow([r.qubit] + [repr(getattr(r, p)) for p in PARAMETERS])


@dataclass(frozen=True)
class ValidationReport:
    not_in_network: tuple[int, ...]
    dead_qubits: tuple[int, ...]
    usable_internal: int
    usable_external: int
    unusable_edges: tuple[tuple[int, int], ...] = field(default=())

    @property
    def usable_edges(self) -> int:
        return self.usable_internal + self.usable_external


def validate_against(data: QubitDataset, net: Network) -> ValidationReport:
    have = set(data.records)
    nodes = set(net.nodes)
    internal = external = 0
    unusable = []
    for e in net.edges:
        if e.a in have and e.b in have:
            if e.edge_class is EdgeClass.INTERNAL:
                internal += 1
            else:
                external += 1
        else:
            unusable.append((e.a, e.b))
    return ValidationReport(
        not_in_network=tuple(sorted(have - nodes)),
        dead_qubits=tuple(n for n in net.nodes if n not in have),
        usable_internal=internal,
        usable_external=external,
        unusable_edges=tuple(unusable),
    )
