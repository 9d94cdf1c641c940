"""
Configuration management for cstarnet
"""

import os
from typing import Dict, Any
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

METRIC_VARIANTS = ("verbatim", "decoupled")


class Config:
    """Configuration class for the cstarnet library and CLI"""

    # Randomness
    SEED = int(os.getenv("CSTARNET_SEED", "0"))

    # Numerical tolerances
    POSITIVITY_TOL = float(os.getenv("CSTARNET_POSITIVITY_TOL", "1e-9"))
    PROJECTION_TOL = float(os.getenv("CSTARNET_PROJECTION_TOL", "1e-12"))
    METRIC_TOL = float(os.getenv("CSTARNET_METRIC_TOL", "1e-9"))
    STATE_TOL = float(os.getenv("CSTARNET_STATE_TOL", "1e-12"))

    # Certifier defaults
    KAPPA_THRESHOLD = float(os.getenv("CSTARNET_KAPPA_THRESHOLD", "1e-6"))
    SPEC_BATTERY = int(os.getenv("CSTARNET_SPEC_BATTERY", "32"))
    BALL_SAMPLE = int(os.getenv("CSTARNET_BALL_SAMPLE", "256"))
    SYSTEM_SIZE = int(os.getenv("CSTARNET_SYSTEM_SIZE", "8"))
    WITNESS_DELTA = float(os.getenv("CSTARNET_WITNESS_DELTA", "0.5"))
    METRIC_VARIANT = os.getenv("CSTARNET_METRIC_VARIANT", "verbatim")
    WORKERS = int(os.getenv("CSTARNET_WORKERS", "1"))

    # Output
    OUTPUT_DIR = os.getenv("CSTARNET_OUTPUT_DIR", "reports")
    LOG_LEVEL = os.getenv("CSTARNET_LOG_LEVEL", "INFO")

    @classmethod
    def validate(cls):
        """Validate configuration values"""
        errors = []

        for name in ("POSITIVITY_TOL", "PROJECTION_TOL", "METRIC_TOL", "STATE_TOL", "KAPPA_THRESHOLD"):
            if getattr(cls, name) <= 0:
                errors.append(f"{name} must be positive")

        for name in ("SPEC_BATTERY", "BALL_SAMPLE", "SYSTEM_SIZE", "WORKERS"):
            if getattr(cls, name) < 1:
                errors.append(f"{name} must be at least 1")

        if cls.WITNESS_DELTA <= 0:
            errors.append("WITNESS_DELTA must be positive")

        if cls.METRIC_VARIANT not in METRIC_VARIANTS:
            errors.append(f"METRIC_VARIANT must be one of {', '.join(METRIC_VARIANTS)}")

        if errors:
            raise ValueError(f"Configuration errors: {', '.join(errors)}")

    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        """Snapshot of the effective settings, used in report provenance"""
        return {
            "seed": cls.SEED,
            "positivity_tol": cls.POSITIVITY_TOL,
            "projection_tol": cls.PROJECTION_TOL,
            "metric_tol": cls.METRIC_TOL,
            "state_tol": cls.STATE_TOL,
            "kappa_threshold": cls.KAPPA_THRESHOLD,
            "spec_battery": cls.SPEC_BATTERY,
            "ball_sample": cls.BALL_SAMPLE,
            "system_size": cls.SYSTEM_SIZE,
            "witness_delta": cls.WITNESS_DELTA,
            "metric_variant": cls.METRIC_VARIANT,
            "workers": cls.WORKERS,
        }
