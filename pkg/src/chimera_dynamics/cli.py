"""Command-line entry point.

Exit codes: 0 success, 1 runtime error (no peak, zero variance, malformed
file, ...), 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import export
from .analysis import (NoPeakError, NoUsableEdgesError, Subset, ZeroVarianceError,
                       find_peaks, geary_table, position_group_stats, similarity_grid)
from .dynamics import (DEFAULT_SAMPLES, FidelityTrace, fidelity_trace, localized_state,
                       superposition_state)
from .hamiltonian import Coupling, CouplingMode, build_hamiltonian, j_min
from .ingest import PARAMETERS, DatasetError, load_dataset
from .topology import Builtin, MalformedNetworkError, Network, resolve_network

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

EPILOG = """exit codes:
  0  success
  1  runtime error (no-peak, zero-variance, no usable edges, malformed file)
  2  usage error (unknown network, bad selector, bad option)
"""


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    network: str = Builtin.MAX_LENGTHS.value
    coupling: Coupling = Coupling.CONSTANT
    j0: float = 1.0
    initial: str = "localized"
    samples: int = DEFAULT_SAMPLES
    out: str | None = None
    fmt: str = "csv"
    seed: int = 0


def _network(selector: str) -> Network:
    try:
        return resolve_network(selector)
    except (MalformedNetworkError, OSError):
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def initial_state(net: Network, spec: str, by_label: bool = True):
    """``superposition``, ``localized`` or ``localized:<label>``.

    Built-in networks take native (figure) labels; other networks take a
    canonical index.  Plain ``localized`` uses the network's injection node.
    """
    if spec == "superposition":
        return superposition_state(net.n)
    if spec == "localized":
        site = net.index_of(net.injection) if net.injection is not None else 0
        return localized_state(net.n, site)
    if spec.startswith("localized:"):
        raw = spec.split(":", 1)[1]
        if not raw.lstrip("-").isdigit():
            raise UsageError(f"bad initial-state label {raw!r}")
        label = int(raw)
        if by_label:
            if label not in net.nodes:
                raise UsageError(f"node {label} is not in {net.name} (labels {list(net.nodes)})")
            return localized_state(net.n, net.index_of(label))
        if not 0 <= label < net.n:
            raise UsageError(f"canonical index {label} out of range for {net.n} nodes")
        return localized_state(net.n, label)
    raise UsageError(f"bad initial state {spec!r}; use superposition or localized[:label]")


def run_trace(cfg: RunConfig) -> tuple[Network, FidelityTrace, dict]:
    net = _network(cfg.network)
    mode = CouplingMode(cfg.coupling, cfg.j0)
    H = build_hamiltonian(net, mode)
    psi0 = initial_state(net, cfg.initial, by_label=cfg.network in {b.value for b in Builtin})
    trace = fidelity_trace(H, psi0, samples=cfg.samples)
    meta = {
        "network": net.name or cfg.network,
        "coupling": mode.kind.value,
        "j0": mode.j0,
        "j_min": j_min(H),
    }
    return net, trace, meta


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _config(args) -> RunConfig:
    if args.samples < 2:
        raise UsageError(f"--samples must be at least 2, got {args.samples}")
    if not 0 < args.j0 <= 1:
        raise UsageError(f"--j0 must lie in (0, 1], got {args.j0}")
    return RunConfig(network=args.network, coupling=Coupling(args.coupling), j0=args.j0,
                     initial=args.initial, samples=args.samples, out=args.out,
                     fmt=args.format, seed=args.seed)


def cmd_simulate(args) -> int:
    cfg = _config(args)
    net, trace, meta = run_trace(cfg)
    print(f"network={meta['network']} coupling={meta['coupling']} initial={trace.initial} "
          f"J_min={export.fmt(meta['j_min'])} t_max={export.fmt(trace.t_max)} "
          f"samples={trace.samples}", file=sys.stderr)
    text = export.trace_json(trace, meta) if cfg.fmt == "json" else export.trace_csv(trace)
    _emit(text, cfg.out)
    return EXIT_OK


def cmd_peaks(args) -> int:
    cfg = _config(args)
    _, trace, _ = run_trace(cfg)
    report = find_peaks(trace, exclude=trace.initial_site)
    if not report.found:
        raise NoPeakError(f"no fidelity peak in window {report.window}")
    _emit(export.peaks_json(report), cfg.out)
    return EXIT_OK


def _parse_at(raw: str):
    if raw in ("first-peak", "max-peak"):
        return raw
    if raw.startswith("t="):
        try:
            return float(raw[2:])
        except ValueError:
            pass
    raise UsageError(f"bad --at {raw!r}; use first-peak, max-peak or t=<value>")


def cmd_similarity(args) -> int:
    cfg = _config(args)
    at = _parse_at(args.at)
    net, trace, _ = run_trace(cfg)
    grid = similarity_grid(net, trace, at)
    text = export.similarity_json(grid) if cfg.fmt == "json" else export.similarity_csv(grid)
    _emit(text, cfg.out)
    return EXIT_OK


def _load_data(args):
    return load_dataset(args.data, fmt=args.data_format)


def cmd_geary(args) -> int:
    data = _load_data(args)
    net = _network(args.network)
    params = PARAMETERS if args.param is None else (args.param,)
    subsets = tuple(Subset) if args.subset is None else (Subset(args.subset),)
    results = geary_table(data, net, params, subsets)
    text = export.geary_json(results) if args.format == "json" else export.geary_csv(results)
    _emit(text, args.out)
    return EXIT_OK


def cmd_positions(args) -> int:
    stats = position_group_stats(_load_data(args))
    text = export.positions_json(stats) if args.format == "json" else export.positions_csv(stats)
    _emit(text, args.out)
    return EXIT_OK


def cmd_network(args) -> int:
    net = _network(args.kind or args.network)
    if args.format == "csv":
        if args.with_hamiltonian:
            raise UsageError("--with-hamiltonian needs --format json")
        _emit(export.network_csv(net), args.out)
        return EXIT_OK
    H = None
    if args.with_hamiltonian:
        H = build_hamiltonian(net, CouplingMode(Coupling(args.coupling), args.j0))
    _emit(export.network_json(net, H, args.coupling if H is not None else None), args.out)
    return EXIT_OK


REPRODUCE_INITIALS = ("localized", "superposition")


def reproduce(out_dir: Path, samples: int = DEFAULT_SAMPLES, fmt: str = "csv") -> list[dict]:
    """Run every network x coupling x initial-state cell into ``out_dir``.

    Layout: ``<network>/<coupling>/<initial>/`` holding the trace, the peak
    report and the similarity grids at the first and maximum peaks.
    """
    summary = []
    for kind in Builtin:
        for coupling in Coupling:
            for initial in REPRODUCE_INITIALS:
                cfg = RunConfig(network=kind.value, coupling=coupling, initial=initial, samples=samples)
                net, trace, meta = run_trace(cfg)
                cell_dir = out_dir / kind.value / coupling.value / initial
                cell_dir.mkdir(parents=True, exist_ok=True)
                if fmt == "json":
                    (cell_dir / "trace.json").write_text(export.trace_json(trace, meta), encoding="utf-8")
                else:
                    (cell_dir / "trace.csv").write_text(export.trace_csv(trace), encoding="utf-8")
                report = find_peaks(trace, exclude=trace.initial_site)
                (cell_dir / "peaks.json").write_text(
                    export.dumps({**report.to_dict(), "found": report.found}), encoding="utf-8")
                if report.found:
                    for at in ("first-peak", "max-peak"):
                        grid = similarity_grid(net, trace, at)
                        (cell_dir / f"similarity_{at}.csv").write_text(
                            export.similarity_csv(grid), encoding="utf-8")
                summary.append({
                    "network": kind.value, "coupling": coupling.value, "initial": trace.initial,
                    "j_min": meta["j_min"], "t_max": trace.t_max,
                    "t_first": report.t_first, "node_first": report.node_first,
                    "t_max_peak": report.t_max_peak, "node_max": report.node_max,
                })
    keys = list(summary[0])
    rows = [keys] + [[s[k] for k in keys] for s in summary]
    (out_dir / "summary.csv").write_text(export._csv(rows), encoding="utf-8")
    return summary


def cmd_reproduce(args) -> int:
    if args.out is None:
        raise UsageError("reproduce needs --out <directory>")
    if args.samples < 2:
        raise UsageError(f"--samples must be at least 2, got {args.samples}")
    out = Path(args.out)
    summary = reproduce(out, samples=args.samples, fmt=args.format)
    print(f"wrote {len(summary)} cells to {out}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout; a directory for reproduce)")
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default: json for network/peaks, csv otherwise)")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                        help="time samples over [0, 1/J_min] (default %(default)s)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised runs")

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--network", default=Builtin.MAX_LENGTHS.value,
                     help="max-lengths | min-max | mid-lengths | chimera:RxC | file:<path>")
    sim.add_argument("--coupling", choices=[c.value for c in Coupling], default="constant")
    sim.add_argument("--j0", type=float, default=1.0, help="baseline coupling in (0, 1]")
    sim.add_argument("--initial", default="localized",
                     help="superposition | localized | localized:<label>")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--data", required=True, help="qubit parameter file (CSV or JSON)")
    data.add_argument("--data-format", choices=("csv", "json"), default=None)

    parser = argparse.ArgumentParser(
        prog="chimera-dynamics",
        description="Single-excitation dynamics and spatial correlations on Chimera spin networks.",
        epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("simulate", parents=[common, sim], help="write a fidelity trace")
    p.set_defaults(func=cmd_simulate)
    p = subs.add_parser("peaks", parents=[common, sim], help="first and maximum fidelity peaks")
    p.set_defaults(func=cmd_peaks)
    p = subs.add_parser("similarity", parents=[common, sim], help="edge similarity grid")
    p.add_argument("--at", default="first-peak", help="first-peak | max-peak | t=<value>")
    p.set_defaults(func=cmd_similarity)
    p = subs.add_parser("geary", parents=[common, data], help="Geary's C by coupler subset")
    p.add_argument("--network", default="chimera:16x16")
    p.add_argument("--param", choices=PARAMETERS, default=None)
    p.add_argument("--subset", choices=[s.value for s in Subset], default=None)
    p.set_defaults(func=cmd_geary)
    p = subs.add_parser("positions", parents=[common, data], help="statistics by unit-cell position")
    p.set_defaults(func=cmd_positions)
    p = subs.add_parser("network", parents=[common], help="emit a network as JSON or CSV")
    p.add_argument("--kind", default=None, help="same choices as --network")
    p.add_argument("--network", default=Builtin.MAX_LENGTHS.value)
    p.add_argument("--with-hamiltonian", action="store_true")
    p.add_argument("--coupling", choices=[c.value for c in Coupling], default="constant")
    p.add_argument("--j0", type=float, default=1.0)
    p.set_defaults(func=cmd_network)
    p = subs.add_parser("reproduce", parents=[common], help="run the full 3x2x2 experiment grid")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "json" if args.command in ("network", "peaks") else "csv"
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoPeakError as exc:
        print(f"error: no-peak: {exc}", file=sys.stderr)
    except ZeroVarianceError as exc:
        print(f"error: zero-variance: {exc}", file=sys.stderr)
    except NoUsableEdgesError as exc:
        print(f"error: no-usable-edges: {exc}", file=sys.stderr)
    except (DatasetError, MalformedNetworkError) as exc:
        print(f"error: malformed-file: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
    except (ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
