import os
from contextlib import contextmanager
from dotenv import load_dotenv

from app.utils.logger import get_logger

load_dotenv()

logger = get_logger("config")


class Settings:
    # --- Tolerances ---
    DEFAULT_TOL: float = float(os.getenv("FERMAT_DEFAULT_TOL", "1e-9"))
    ZERO_TOL: float = DEFAULT_TOL    # coefficient dropping in Poly / ExpPoly
    CHECK_TOL: float = DEFAULT_TOL   # constraint check deviation
    NUMERIC_TOL: float = 1e-6        # relative numeric residual bound
    SINGULAR_TOL: float = 1e-12      # w² ∈ {0,1}, |αᵏ|, |cⱼ| in linear solves

    # --- Evaluation ---
    EXP_OVERFLOW_LIMIT: float = 700.0

    # --- Numeric sampling ---
    SAMPLE_POINTS: int = 100
    SAMPLE_RADIUS: float = 2.0
    SAMPLE_SHRINK_STEPS: int = 8
    DEFAULT_SEED: int = 0

    # --- Parameter sampling ---
    BRANCH_RANGE: int = 2

    # --- Logging ---
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")

    @classmethod
    def validate_settings(cls) -> bool:
        """Check that the tolerance knobs are usable."""
        ok = True
        for name in ("DEFAULT_TOL", "ZERO_TOL", "CHECK_TOL", "NUMERIC_TOL", "SINGULAR_TOL"):
            value = getattr(cls, name)
            if not (0.0 < value < 1.0):
                logger.error("invalid_setting", name=name, value=value)
                ok = False
        if cls.SAMPLE_POINTS < 1 or cls.SAMPLE_RADIUS <= 0:
            logger.error("invalid_sampling", points=cls.SAMPLE_POINTS, radius=cls.SAMPLE_RADIUS)
            ok = False
        return ok

    @classmethod
    def get_settings_info(cls) -> dict:
        return {
            "default_tol": cls.DEFAULT_TOL,
            "zero_tol": cls.ZERO_TOL,
            "check_tol": cls.CHECK_TOL,
            "numeric_tol": cls.NUMERIC_TOL,
            "singular_tol": cls.SINGULAR_TOL,
            "sample_points": cls.SAMPLE_POINTS,
            "sample_radius": cls.SAMPLE_RADIUS,
            "default_seed": cls.DEFAULT_SEED,
            "branch_range": cls.BRANCH_RANGE,
            "log_level": cls.LOG_LEVEL,
        }

    @contextmanager
    def override(self, **values):
        """Temporarily replace tolerance knobs on this instance."""
        previous = {name: self.__dict__.get(name) for name in values}
        for name, value in values.items():
            if value is not None:
                setattr(self, name, value)
        try:
            yield self
        finally:
            for name, value in previous.items():
                if value is None:
                    self.__dict__.pop(name, None)
                else:
                    setattr(self, name, value)


settings = Settings()
