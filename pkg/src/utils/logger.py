import json
import logging
from pathlib import Path
from typing import Dict, Any

import numpy as np

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    encoding='utf-8'
)
logger = logging.getLogger(__name__)


def set_log_level(level: str) -> None:
    """Set the package logger level from a name such as 'DEBUG'."""
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))


def _to_jsonable(value: Any) -> Any:
    """Convert numpy values (including complex) into JSON-friendly objects."""
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, np.generic):
        return value.item()
    return value


def save_report(report: Dict[str, Any], report_file: Path) -> None:
    """Save a run report to JSON file."""
    try:
        with open(report_file, 'w', encoding='utf-8') as f:
            json.dump(_to_jsonable(report), f, indent=2, ensure_ascii=False, sort_keys=True)
    except Exception as e:
        logger.error(f"Failed to save report to {report_file}: {e}")


def load_report(report_file: Path) -> Dict[str, Any]:
    """Load a run report from JSON file."""
    try:
        if report_file.exists():
            with open(report_file, 'r', encoding='utf-8') as f:
                return json.load(f)
    except Exception as e:
        logger.error(f"Failed to load report from {report_file}: {e}")
    return {}
