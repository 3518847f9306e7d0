"""CSV ingestion/egress and the bundled datasets."""
import csv
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import ArgumentError, ParseError, ShapeError
from .linalg import as_matrix, frozen

SAMPLES = "samples"
VARIABLES = "variables"
ORIENTATIONS = (SAMPLES, VARIABLES)


@dataclass(frozen=True)
class Dataset:
    """Named variables (rows) by samples (columns)."""

    variable_names: tuple
    data: np.ndarray
    source_label: str = ""

    def __post_init__(self):
        data = frozen(as_matrix(self.data, "dataset"))
        names = tuple(str(v) for v in self.variable_names)
        if len(names) != data.shape[0]:
            raise ShapeError(f"{len(names)} variable names for {data.shape[0]} variables")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "variable_names", names)

    @property
    def shape(self):
        return self.data.shape


def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def parse_csv(text, orientation=SAMPLES, source_label=""):
    """Parse CSV text into a Dataset.

    The first line is a header of labels if any of its cells is non-numeric.
    With ``orientation="samples"`` each CSV row is one sample and the file is
    transposed on load; header labels become variable names. With
    ``orientation="variables"`` each CSV row is one variable, a header (if
    present) is discarded, and variables are named ``var1..varm``.
    """
    if orientation not in ORIENTATIONS:
        raise ArgumentError(f"orientation must be one of {ORIENTATIONS}, got {orientation!r}")
    if text.startswith("\ufeff"):
        text = text[1:]
    rows = []
    header = None
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cells = [c.strip() for c in next(csv.reader([line]))]
        if header is None and not rows and not all(_is_number(c) for c in cells):
            header = cells
            width = len(cells)
            continue
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(f"line {lineno}: expected {width} fields, found {len(cells)}", line=lineno)
        values = []
        for col, cell in enumerate(cells, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(
                    f"line {lineno}, column {col}: non-numeric value {cell!r}", line=lineno, column=col
                ) from None
            if not np.isfinite(v):
                raise ParseError(f"line {lineno}, column {col}: non-finite value {cell!r}", line=lineno, column=col)
            values.append(v)
        rows.append(values)
    if not rows:
        raise ParseError("no numeric data rows found")

    table = np.array(rows, dtype=np.float64)
    if orientation == SAMPLES:
        data = table.T
        names = header if header is not None else [f"var{i + 1}" for i in range(data.shape[0])]
    else:
        data = table
        names = [f"var{i + 1}" for i in range(data.shape[0])]
    return Dataset(tuple(names), data, source_label)


def load_csv(path, orientation=SAMPLES):
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    try:
        return parse_csv(text, orientation, source_label=str(path))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}", line=exc.line, column=exc.column) from None


def _fmt(v):
    return format(float(v), ".17g")


def format_csv(rows, header=None):
    out = []
    if header is not None:
        out.append(",".join(header))
    for row in rows:
        out.append(",".join(_fmt(v) for v in row))
    return "\n".join(out) + "\n"


def save_csv(obj, path, header=None):
    """Write a Dataset or a matrix as CSV with 17 significant digits.

    A Dataset is written one sample per line under a header of variable
    names (reload with the default orientation). A bare matrix is written
    row by row (reload with ``orientation="variables"``), with an optional
    header line.
    """
    if isinstance(obj, Dataset):
        text = format_csv(obj.data.T, header=obj.variable_names)
    else:
        text = format_csv(as_matrix(obj), header=header)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


# Heights (in.) and weights (lbs.) for 30 young adults.
_HEIGHTS = (
    67.78, 73.52, 71.40, 70.22, 69.79, 70.70,
    71.80, 72.01, 69.90, 68.78, 68.49, 69.62,
    70.30, 69.12, 70.28, 73.09, 68.46, 70.65,
    73.23, 69.13, 69.83, 70.88, 65.48, 70.42,
    69.63, 69.21, 72.84, 69.49, 68.53, 67.44,
)
_WEIGHTS = (
    132.99, 176.49, 173.03, 162.34, 164.30, 143.30,
    161.49, 166.46, 142.37, 150.67, 147.45, 144.14,
    155.61, 142.46, 146.09, 175.00, 149.50, 162.97,
    177.90, 144.04, 161.28, 163.54, 126.90, 149.50,
    161.85, 149.72, 172.42, 151.55, 138.33, 133.89,
)


def embedded_height_weight():
    return Dataset(("Height", "Weight"), np.array([_HEIGHTS, _WEIGHTS]), "height/weight, 30 young adults")


def iris_csv_text():
    return resources.files("pcakit").joinpath("data/iris.csv").read_text(encoding="utf-8")


def embedded_iris():
    """Fisher's Iris measurements as a 4 x 150 Dataset (species column omitted)."""
    return parse_csv(iris_csv_text(), SAMPLES, source_label="Fisher iris")
