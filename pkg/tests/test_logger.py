import math

import pytest
from structlog.testing import capture_logs

from app.core.families import PeriodicTerm, build_periodic
from app.core.polyalg import ShiftVector
from app.utils.logger import get_logger


@pytest.mark.unit
class TestLogger:

    def test_logger_carries_module_name(self):
        """Events of a module logger carry its name"""
        logger = get_logger("families")
        with capture_logs() as logs:
            logger.warning("shift_checked", dot="0")
        assert logs[0]["event"] == "shift_checked"
        assert logs[0]["logger_name"] == "families"
        assert logs[0]["log_level"] == "warning"

    def test_routine_events_stay_below_warning(self):
        """A recorded periodic violation is logged at info, so it only shows with --verbose"""
        c = ShiftVector((1j * math.pi, 1j * math.pi))
        with capture_logs() as logs:
            build_periodic(c, [PeriodicTerm((1, 1), (0, 1))], strict=False)
        events = [entry for entry in logs if entry["event"] == "periodic_violation"]
        assert events and all(entry["log_level"] == "info" for entry in events)

    def test_every_module_imports(self):
        """The package binds its module loggers at import time"""
        import app.main
        import app.frontend.runner
        import app.core.sampler
        assert app.frontend.runner.logger is not None
        assert callable(app.main.main)


@pytest.mark.integration
class TestCliSmoke:

    def test_audit_single_exponential(self, capsys):
        """The CLI runs an audit end to end and exits with 0"""
        from app.main import main
        assert main(["audit", "single-exponential", "--points", "20"]) == 0
        assert "Solution" in capsys.readouterr().out
