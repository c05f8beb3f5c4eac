import pytest
from unittest.mock import patch
from app.utils.metrics import MetricsCollector, get_metrics_data, metrics

class TestMetricsCollector:

    def setup_method(self):
        """Fresh collector per test"""
        self.metrics = MetricsCollector()

    def test_record_run(self):
        """Run counter"""
        with patch('app.utils.metrics.logger') as mock_logger:
            self.metrics.record_run("audit")
            mock_logger.debug.assert_called_once()
        assert self.metrics.data["runs"] == 1

    def test_record_failed_constraint(self):
        """A failing relation is counted and logged"""
        with patch('app.utils.metrics.logger') as mock_logger:
            self.metrics.record_constraint("exp(L(c))", True)
            self.metrics.record_constraint("exp(d1 - d2)", False)
            mock_logger.info.assert_called_once()
        assert self.metrics.data["constraints_checked"] == 2
        assert self.metrics.data["constraints_failed"] == 1

    def test_record_constraint_error(self):
        """An unformable relation target is a warning"""
        with patch('app.utils.metrics.logger') as mock_logger:
            self.metrics.record_constraint_error("zero_coefficient")
            mock_logger.warning.assert_called_once()
        assert self.metrics.data["constraint_errors"] == 1

    def test_record_shrink(self):
        """Each radius halving is counted and logged below the default level"""
        with patch('app.utils.metrics.logger') as mock_logger:
            self.metrics.record_shrink(2.0)
            self.metrics.record_shrink(1.0)
            assert mock_logger.info.call_count == 2
            mock_logger.warning.assert_not_called()
        assert self.metrics.data["radius_shrinks"] == 2

    def test_points_and_verdicts(self):
        """Evaluated and skipped points, verdict counts"""
        self.metrics.record_points(100)
        self.metrics.record_points(0, 50)
        self.metrics.record_verdict("Solution")
        self.metrics.record_verdict("Solution")
        self.metrics.record_verdict("NotASolution")
        assert self.metrics.data["points_evaluated"] == 100
        assert self.metrics.data["points_skipped"] == 50
        assert self.metrics.data["verdicts"] == {"Solution": 2, "NotASolution": 1}

    def test_snapshot_sorted_and_detached(self):
        """Snapshots sort verdicts and do not change with the collector"""
        self.metrics.record_verdict("Solution")
        self.metrics.record_verdict("ConstraintViolation")
        snap = self.metrics.snapshot()
        assert list(snap["verdicts"]) == ["ConstraintViolation", "Solution"]
        self.metrics.record_verdict("Solution")
        assert snap["verdicts"]["Solution"] == 1

    def test_merge(self):
        """Merging adds counters and verdicts"""
        other = MetricsCollector()
        other.record_run("sample")
        other.record_residual(4)
        other.record_verdict("Solution")
        self.metrics.record_verdict("Solution")
        self.metrics.merge(other)
        assert self.metrics.data["runs"] == 1
        assert self.metrics.data["residual_terms"] == 4
        assert self.metrics.data["verdicts"]["Solution"] == 2

    def test_metrics_data_format(self):
        """Process totals as key=value lines"""
        metrics.record_verdict("Solution")
        data = get_metrics_data()
        assert isinstance(data, str)
        assert "runs=" in data
        assert "verdict_Solution=" in data
