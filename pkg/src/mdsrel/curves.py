"""Curve container and the CSV conventions shared by the CLI and tests.

CSV contract: comma separated, UTF-8, '\\n' line endings, mandatory header
row, '.' decimal point, scientific notation permitted.  Cells are written
with repr(), i.e. the shortest decimal that round-trips the double; failed
evaluations appear as the literal 'nan'.  Trailing '# key=value' comment
lines carry run summaries and are skipped by readers.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class Curve:
    """A sampled quantity on a time grid."""

    xs: tuple
    values: tuple
    quantity: str
    units: str

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(float(v) for v in self.xs))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.xs) != len(self.values):
            raise ValueError("xs and values must have the same length")


def format_cell(value) -> str:
    return repr(float(value))


def write_csv(path, header, rows, comments=()):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_cell(v) for v in row) + "\n")
        for line in comments:
            fh.write(f"# {line}\n")


def read_csv(path):
    """Return (header, column-major float arrays); comment lines skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise ConfigError(f"cannot read CSV {path!r}: {exc}") from exc
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ConfigError(f"CSV {path!r} is empty or has no header row")
    header = lines[0].split(",")
    if len(header) < 2 or any(not h.strip() for h in header):
        raise ConfigError(f"CSV {path!r} has no usable header row")
    data = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise ConfigError(f"CSV {path!r}: ragged row {ln!r}")
        data.append([float(c) for c in cells])
    cols = np.array(data, dtype=np.float64).T if data else \
        np.empty((len(header), 0))
    return header, cols
