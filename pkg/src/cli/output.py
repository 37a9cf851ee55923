from pathlib import Path
from typing import List, Sequence

import numpy as np

from ..polyalg.impulse import ImpulseSeq
from ..utils.config import CSV_FLOAT_FORMAT, CSV_ZERO_FLOOR
from ..utils.logger import logger


def kernel_header(name: str, rows: int, cols: int) -> List[str]:
    return [f"{name}[{r}][{c}]" for r in range(rows) for c in range(cols)]


def write_csv(path: Path, columns: Sequence[str], values: np.ndarray) -> None:
    """CSV with an integer t column followed by float columns, LF line endings."""
    values = np.asarray(values, dtype=float).reshape(len(values), -1)
    table = np.column_stack([np.arange(len(values)), values])
    np.savetxt(path, table, fmt=["%d"] + [CSV_FLOAT_FORMAT] * values.shape[1], delimiter=",",
               header=",".join(["t"] + list(columns)), comments="", newline="\n")
    logger.info(f"Wrote {path}")


def write_kernel_csv(path: Path, name: str, kernel: ImpulseSeq) -> None:
    """One row per t with the matrix flattened row by row; rounding-level entries are written as 0."""
    rows, cols = kernel.shape
    terms = kernel.terms.reshape(len(kernel), -1)
    floor = CSV_ZERO_FLOOR * max(1.0, kernel.max_abs())
    write_csv(path, kernel_header(name, rows, cols), np.where(np.abs(terms) <= floor, 0.0, terms))


def write_vector_csv(path: Path, name: str, values: np.ndarray) -> None:
    values = np.atleast_2d(values)
    write_csv(path, [f"{name}[{i}]" for i in range(values.shape[1])], values)


def write_table_csv(path: Path, columns: Sequence[str], table: np.ndarray) -> None:
    """CSV of a float table without the t column."""
    np.savetxt(path, np.atleast_2d(table), fmt=CSV_FLOAT_FORMAT, delimiter=",",
               header=",".join(columns), comments="", newline="\n")
    logger.info(f"Wrote {path}")


def format_matrix(M: np.ndarray, precision: int = 7) -> str:
    """Right-aligned text table of a real or complex matrix."""
    M = np.atleast_2d(M)
    if np.iscomplexobj(M):
        cells = [[format_complex(v, precision) for v in row] for row in M]
    else:
        cells = [[f"{v:.{precision}f}" for v in row] for row in M]
    width = max((len(c) for row in cells for c in row), default=0)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


def format_complex(value: complex, precision: int = 7) -> str:
    if abs(value.imag) <= 10.0 ** -(precision + 1) * max(1.0, abs(value)):
        return f"{value.real:.{precision}f}"
    return f"{value.real:.{precision}f}{value.imag:+.{precision}f}i"
