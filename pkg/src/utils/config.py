import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from dotenv import load_dotenv

# Base directories
BASE_DIR = Path(__file__).resolve().parent.parent.parent
load_dotenv(BASE_DIR / ".env")

DATA_DIR = BASE_DIR / "data"  # Shipped model files
RESULTS_DIR = Path(os.getenv("RATEXP_RESULTS_DIR", BASE_DIR / "results"))  # Default --out

# Model fixtures
NK_MODEL_FILE = DATA_DIR / "nk.model"
TAYLOR_MODEL_FILE = DATA_DIR / "taylor.model"

# Run defaults
DEFAULT_HORIZON = 50
DEFAULT_PATHS = 1000
DEFAULT_SEED = 0
MAX_WORKERS = int(os.getenv("RATEXP_MAX_WORKERS", "4"))  # gain sweep thread pool

# Output formatting
CSV_FLOAT_FORMAT = "%.9g"
CSV_ZERO_FLOOR = 1e-12  # kernel entries below this, relative to max(1, max |kernel|), are written as 0
REPORT_FILE_NAME = "report.json"


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances shared by every operation.

    Relative tolerances are relative to the largest singular value or the
    largest magnitude of the object being tested, unless stated otherwise.
    """
    det_floor: float = 1e-11  # determinant coefficients snapped to zero
    rank_rtol: float = 1e-10  # SVD rank of Ahat, range bases
    image_residual: float = 1e-9  # column-span membership
    null_rtol: float = 1e-8  # left null vectors
    sample_radius: float = 1e3  # first properness radius, times (1 + sigma)
    sample_angles: int = 8
    growth_exponent: float = 0.5
    negligible: float = 1e-7
    pole_collision: float = 1e-6
    collision_retries: int = 3
    infinite_eig: float = 1e-10  # |beta| / |alpha| below this is an infinite eigenvalue
    hankel_rtol: float = 1e-7
    consistency: float = 1e-8  # zero-input term 0 against xhat_prev
    unit_circle: float = 1e-8  # |lambda| > 1 + unit_circle is unstable
    boundary: float = 1e-6  # ||lambda| - 1| below this is a boundary case
    exist_rtol: float = 1e-7  # cancellation-system residual

    @classmethod
    def from_env(cls, prefix: str = "RATEXP_") -> "ToleranceConfig":
        """Build a config with overrides from RATEXP_<FIELD> variables."""
        overrides = {}
        for f in fields(cls):
            value = os.getenv(f"{prefix}{f.name.upper()}")
            if value is not None:
                overrides[f.name] = int(value) if f.type in (int, "int") else float(value)
        return replace(cls(), **overrides)


DEFAULT_TOLERANCES = ToleranceConfig.from_env()


def ensure_dir(directory: Path) -> Path:
    """Create directory (and parents) if needed and return it."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return directory
