import math
import os
from dataclasses import dataclass

from src.core.errors import ConfigError

## config.py configuration for the warp-drive compiler


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be a number, got {raw!r}") from exc


# --- Numerical tolerances ---
TOLERANCES = {
    "unitary": 1e-10,           # U†U = I, |det - 1| (Frobenius)
    "local": 1e-8,              # residual allowed when splitting a local gate
    "local_class": 1e-8,        # canonical coordinates agreement
    "pencil_collision": 1e-7,   # eigenvalue grouping in the two-stage fallback
    "pencil_residual": 1e-12,   # accepted off-diagonal residual of O^T m O
    "sign": 1e-12,              # coordinates closer to zero count as zero
    "snap": 1e-9,               # snapping displayed angles to exact fractions
    "grid": 1e-12,              # idle lengths this close to a 1/(8J) multiple become exact
    "zero_angle": 1e-12,        # rotations below this are dropped
}

# --- Joint diagonalization of the magic-basis pencil ---
DIAGONALIZATION = {
    "seed": 20050101,
    "attempts": 8,
}

# --- Default values ---
DEFAULTS = {
    "j_hz": 215.5,              # 13C-labelled chloroform, 1H-13C coupling
    "tolerance": 1e-9,
    "catalog": "six",
    "tie_break": "lowest-index",
    "output": "table",
    "warp": "none",
    "initial": "00",
}

CATALOG_CHOICES = ("six", "all24")
TIE_BREAK_CHOICES = ("lowest-index", "report-all")
OUTPUT_CHOICES = ("table", "structured")

# --- Readout model ---
# line position of the observed nucleus keyed by the partner qubit state
READOUT = {
    "observed_qubit": 2,
    "line_positions": {0: 79.20, 1: 77.49},
}

# Relaxation times of the sample (documentation only, no relaxation model)
RELAXATION = {
    "t1_s": 20.0,
    "t2_hydrogen_s": 7.5,
    "t2_carbon_s": 0.30,
}

# Hard-pulse metadata: a pi/2 pulse takes about 10 us on either channel
RF = {
    "pi_half_duration_s": 10e-6,
    "amplitude_rad_s": (math.pi / 2) / 10e-6,
}

EXIT_CODES = {
    "ok": 0,
    "parse": 2,
    "invalid_input": 3,
    "verification": 4,
}

# Program / spectrum document identifiers
DOCUMENTS = {
    "program_format": "warpdrive.pulse-program",
    "program_version": 1,
    "spectrum_format": "warpdrive.stick-spectrum",
    "spectrum_version": 1,
}

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"


@dataclass
class RunConfig:
    """Settings for one CLI run. Environment first, flags override."""

    j_hz: float = DEFAULTS["j_hz"]
    tolerance: float = DEFAULTS["tolerance"]
    catalog: str = DEFAULTS["catalog"]
    tie_break: str = DEFAULTS["tie_break"]
    output: str = DEFAULTS["output"]

    def __post_init__(self):
        if not self.j_hz > 0:
            raise ConfigError(f"j_hz must be positive, got {self.j_hz}")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.catalog not in CATALOG_CHOICES:
            raise ConfigError(f"catalog must be one of {CATALOG_CHOICES}, got {self.catalog!r}")
        if self.tie_break not in TIE_BREAK_CHOICES:
            raise ConfigError(f"tie_break must be one of {TIE_BREAK_CHOICES}, got {self.tie_break!r}")
        if self.output not in OUTPUT_CHOICES:
            raise ConfigError(f"output must be one of {OUTPUT_CHOICES}, got {self.output!r}")

    @classmethod
    def from_env(cls, **overrides) -> "RunConfig":
        values = {
            "j_hz": _env_float("WARPDRIVE_J_HZ", DEFAULTS["j_hz"]),
            "tolerance": _env_float("WARPDRIVE_TOLERANCE", DEFAULTS["tolerance"]),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
