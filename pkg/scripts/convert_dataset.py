"""Convert an upstream per-qubit table into the loader's CSV schema.

Each ``--column`` maps one target field to a source column name, e.g.

    python scripts/convert_dataset.py raw.csv qasa.csv \\
        --column qubit_id=qubit --column beta=Beta --column b=h_bias \\
        --column gamma=Gamma --column eta=noise

Columns are mapped explicitly and never guessed.  Rows with an empty
qubit id are skipped; the result is re-read with the strict loader.
"""
import argparse
import csv
import sys

from chimera_dynamics.ingest import HEADER, DatasetError, load_dataset


def parse_mapping(items):
    mapping = {}
    for item in items:
        target, sep, source = item.partition("=")
        if not sep or target not in HEADER:
            raise SystemExit(f"bad --column {item!r}; expected one of {HEADER} as <field>=<source>")
        mapping[target] = source
    missing = [h for h in HEADER if h not in mapping]
    if missing:
        raise SystemExit(f"no --column given for {', '.join(missing)}")
    return mapping


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("src")
    p.add_argument("dst")
    p.add_argument("--column", action="append", default=[], metavar="FIELD=SOURCE")
    p.add_argument("--delimiter", default=",")
    args = p.parse_args()
    mapping = parse_mapping(args.column)

    with open(args.src, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, delimiter=args.delimiter)
        absent = [s for s in mapping.values() if s not in (reader.fieldnames or [])]
        if absent:
            raise SystemExit(f"source has no column(s) {absent}")
        rows = [[row[mapping[h]].strip() for h in HEADER] for row in reader
                if row[mapping["qubit_id"]].strip()]

    with open(args.dst, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        w.writerows(rows)
    try:
        data = load_dataset(args.dst, "csv")
    except DatasetError as exc:
        print(f"error: converted file does not load: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(data)} qubits to {args.dst}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
