"""Model files: bracketed sections of ``key = value`` lines.

Matrix literals list rows separated by ``;`` with whitespace-separated entries,
for example ``A = 0 0 -0.2083333 ; 0 0 -0.1041667 ; 0 0 0.4166667``.
``#`` starts a comment.
"""

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..model.structures import GeneralModel, InitCond, ModelCM, ShockSpec
from ..solver.general import GeneralFreeParams
from ..utils.config import DEFAULT_SEED
from ..utils.errors import ParseError
from ..utils.logger import logger

SECTION_PATTERN = re.compile(r"^\s*\[\s*([A-Za-z_]+)\s*\]\s*$")
ENTRY_PATTERN = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")
COEFF_PATTERN = re.compile(r"^A_(\d+)_(\d+)$")
FREE_PATTERN = re.compile(r"^F_(\d+)$")

SECTION_KEYS = {
    "matrices": {"A", "Ahat", "B", "R"},
    "general": {"h", "l", "B", "R"},
    "init": {"x_prev", "xhat_prev", "u_prev"},
    "shocks": {"seed", "cov"},
    "free": {"AhF"},
}


@dataclass(frozen=True)
class Entry:
    value: str
    line: int
    column: int  # 1-based column where the value starts


@dataclass(frozen=True, eq=False)
class ModelFile:
    model: Union[ModelCM, GeneralModel]
    init: Optional[InitCond] = None
    shocks: Optional[ShockSpec] = None
    free: Optional[GeneralFreeParams] = None
    path: Optional[Path] = None

    @property
    def is_general(self) -> bool:
        return isinstance(self.model, GeneralModel)

    def init_or_zeros(self) -> InitCond:
        return self.init if self.init is not None else InitCond.zeros(self.model.n, self.model.m)

    def shocks_or_default(self) -> ShockSpec:
        return self.shocks if self.shocks is not None else ShockSpec(np.eye(self.model.m), DEFAULT_SEED)


def parse_matrix_literal(text: str, line: Optional[int] = None, column: int = 1) -> np.ndarray:
    """Rows separated by ';' (or newlines), entries by whitespace."""
    rows: List[List[float]] = []
    offset = 0
    for chunk in re.split(r"[;\n]", text):
        start = offset
        offset += len(chunk) + 1
        if not chunk.strip():
            continue
        row = []
        for token in re.finditer(r"\S+", chunk):
            try:
                row.append(float(token.group()))
            except ValueError:
                raise ParseError(f"Not a number: {token.group()!r}", line, column + start + token.start()) from None
        rows.append(row)
    if not rows:
        raise ParseError("Empty matrix literal", line, column)
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParseError(f"Rows of unequal length {sorted(widths)}", line, column)
    return np.array(rows, dtype=float)


def _sections(text: str) -> Dict[str, Dict[str, Entry]]:
    sections: Dict[str, Dict[str, Entry]] = {}
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        header = SECTION_PATTERN.match(line)
        if header:
            current = header.group(1)
            if current not in SECTION_KEYS:
                raise ParseError(f"Unknown section [{current}]", number, line.index("[") + 1)
            if current in sections:
                raise ParseError(f"Duplicate section [{current}]", number, 1)
            sections[current] = {}
            continue
        entry = ENTRY_PATTERN.match(line)
        if not entry:
            raise ParseError("Expected 'key = value' or '[section]'", number, len(line) - len(line.lstrip()) + 1)
        if current is None:
            raise ParseError("Entry outside of any section", number, 1)
        key, value = entry.group(1), entry.group(2)
        if key in sections[current]:
            raise ParseError(f"Duplicate key {key!r} in [{current}]", number, entry.start(1) + 1)
        sections[current][key] = Entry(value, number, entry.start(2) + 1)
    return sections


def _matrix(entries: Dict[str, Entry], key: str) -> np.ndarray:
    entry = entries[key]
    return parse_matrix_literal(entry.value, entry.line, entry.column)


def _vector(entries: Dict[str, Entry], key: str) -> np.ndarray:
    return _matrix(entries, key).ravel()


def _integer(entries: Dict[str, Entry], key: str) -> int:
    entry = entries[key]
    try:
        return int(entry.value)
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {entry.value!r}", entry.line, entry.column) from None


def _require(section: str, entries: Dict[str, Entry], required) -> None:
    missing = sorted(set(required) - set(entries))
    if missing:
        raise ParseError(f"[{section}] is missing keys: {', '.join(missing)}")


def _reject_unknown(section: str, entries: Dict[str, Entry], allowed) -> None:
    for key, entry in entries.items():
        if key not in allowed:
            raise ParseError(f"Unknown key {key!r} in [{section}]", entry.line, 1)


def _parse_general(entries: Dict[str, Entry]) -> GeneralModel:
    _require("general", entries, SECTION_KEYS["general"])
    coeffs: Dict[Tuple[int, int], np.ndarray] = {}
    for key, entry in entries.items():
        match = COEFF_PATTERN.match(key)
        if match:
            coeffs[(int(match.group(1)), int(match.group(2)))] = _matrix(entries, key)
        elif key not in SECTION_KEYS["general"]:
            raise ParseError(f"Unknown key {key!r} in [general]", entry.line, 1)
    return GeneralModel(_integer(entries, "h"), _integer(entries, "l"), coeffs,
                        _matrix(entries, "B"), _matrix(entries, "R"))


def _parse_free(entries: Dict[str, Entry], model: GeneralModel) -> GeneralFreeParams:
    shape = (model.n, model.m)
    forecasts = [np.zeros(shape) for _ in range(model.h - 1)]
    lead = np.zeros(shape)
    for key, entry in entries.items():
        match = FREE_PATTERN.match(key)
        if key == "AhF":
            lead = _matrix(entries, key)
        elif match and 0 < int(match.group(1)) < model.h:
            forecasts[int(match.group(1)) - 1] = _matrix(entries, key)
        else:
            raise ParseError(f"Unknown key {key!r} in [free] (expected F_1..F_{model.h - 1} or AhF)", entry.line, 1)
    return GeneralFreeParams(forecasts, lead)


def _parse_shocks(entries: Dict[str, Entry], m: int) -> ShockSpec:
    _reject_unknown("shocks", entries, SECTION_KEYS["shocks"])
    seed = _integer(entries, "seed") if "seed" in entries else DEFAULT_SEED
    if "cov" not in entries:
        return ShockSpec(np.eye(m), seed)
    cov = _matrix(entries, "cov")
    if cov.shape == (1, m) and m > 1:
        cov = np.diag(cov.ravel())
    if cov.shape != (m, m):
        entry = entries["cov"]
        raise ParseError(f"cov must be a {m}-vector of variances or a {m}x{m} matrix, got {cov.shape}",
                         entry.line, entry.column)
    return ShockSpec(cov, seed)


def parse_model_text(text: str, path: Optional[Path] = None) -> ModelFile:
    sections = _sections(text)
    if ("matrices" in sections) == ("general" in sections):
        raise ParseError("Exactly one of [matrices] or [general] is required")

    init = free = None
    if "matrices" in sections:
        entries = sections["matrices"]
        _require("matrices", entries, SECTION_KEYS["matrices"])
        _reject_unknown("matrices", entries, SECTION_KEYS["matrices"])
        model = ModelCM(*(_matrix(entries, k) for k in ("A", "Ahat", "B", "R")))
        if "free" in sections:
            raise ParseError("[free] applies to [general] models only")
        if "init" in sections:
            entries = sections["init"]
            _reject_unknown("init", entries, SECTION_KEYS["init"])
            vectors = {k: _vector(entries, k) if k in entries else None for k in SECTION_KEYS["init"]}
            zeros = InitCond.zeros(model.n, model.m)
            init = InitCond(*(vectors[k] if vectors[k] is not None else getattr(zeros, k)
                              for k in ("x_prev", "xhat_prev", "u_prev")))
            init.check_dims(model)
    else:
        model = _parse_general(sections["general"])
        if "init" in sections:
            raise ParseError("[init] applies to [matrices] models only")
        if "free" in sections:
            free = _parse_free(sections["free"], model)
            free.check_dims(model)

    shocks = _parse_shocks(sections["shocks"], model.m) if "shocks" in sections else None
    logger.debug(f"Parsed {'general' if isinstance(model, GeneralModel) else 'one-step'} model with n={model.n}, m={model.m}")
    return ModelFile(model, init, shocks, free, path)


def parse_model(path: Path) -> ModelFile:
    """Read and validate a model file.

    Raises:
        ParseError: syntax errors (with line and column) or missing keys
        DimensionError: matrices whose shapes do not compose
        InvariantError: e.g. Ahat = 0 or A_0_0 != I
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError(f"Cannot read model file {path}: {e}") from e
    return parse_model_text(text, path)


def parse_matrix_file(path: Path) -> np.ndarray:
    """A file holding a single matrix literal (rows split by ';' or newlines)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError(f"Cannot read matrix file {path}: {e}") from e
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    return parse_matrix_literal(text)


def format_literal(M: np.ndarray) -> str:
    """Exact matrix literal: repr of every float, so parsing returns identical values."""
    M = np.atleast_2d(M)
    return " ; ".join(" ".join(repr(float(v)) for v in row) for row in M)


def emit_model(model_file: ModelFile) -> str:
    """Model file text that parses back to bit-identical matrices."""
    model = model_file.model
    lines = []
    if isinstance(model, ModelCM):
        lines.append("[matrices]")
        lines += [f"{k} = {format_literal(getattr(model, k))}" for k in ("A", "Ahat", "B", "R")]
        if model_file.init is not None:
            lines += ["", "[init]"]
            lines += [f"{k} = {format_literal(getattr(model_file.init, k))}"
                      for k in ("x_prev", "xhat_prev", "u_prev")]
    else:
        lines += ["[general]", f"h = {model.h}", f"l = {model.l}",
                  f"B = {format_literal(model.B)}", f"R = {format_literal(model.R)}"]
        lines += [f"A_{i}_{j} = {format_literal(M)}" for (i, j), M in sorted(model.coeffs.items())]
        if model_file.free is not None:
            lines += ["", "[free]"]
            lines += [f"F_{i} = {format_literal(F)}" for i, F in enumerate(model_file.free.initial_forecasts, start=1)]
            lines.append(f"AhF = {format_literal(model_file.free.lead_product)}")
    if model_file.shocks is not None:
        lines += ["", "[shocks]", f"seed = {model_file.shocks.seed}",
                  f"cov = {format_literal(model_file.shocks.covariance)}"]
    return "\n".join(lines) + "\n"


def write_model(model_file: ModelFile, path: Path) -> None:
    Path(path).write_text(emit_model(model_file), encoding="utf-8")
