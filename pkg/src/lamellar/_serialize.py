"""Output formatting: CSV with 17-significant-digit floats, ordered JSON.

All floating-point values in CSV output are printed with 17 significant
digits so that a reread double is bit-identical and repeated runs diff
cleanly.  JSON uses Python's shortest round-trip float representation.
"""

import json

CSV_COMMENT_PREFIX = "#"


def fmt(x) -> str:
    """17-significant-digit representation of a float (round-trip exact)."""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def csv_line(values) -> str:
    return ",".join(fmt(v) for v in values)


def write_csv(path, header_fields, rows, comment: str = "") -> None:
    """Write a CSV file: optional '#' comment line, header row, data rows."""
    lines = []
    if comment:
        lines.append(f"{CSV_COMMENT_PREFIX} {comment}")
    lines.append(",".join(header_fields))
    for row in rows:
        lines.append(csv_line(row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
