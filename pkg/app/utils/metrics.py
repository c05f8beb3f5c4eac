from app.utils.logger import get_logger

logger = get_logger("metrics")


class MetricsCollector:
    """Run counters; no timestamps, so reports stay byte-identical across runs"""

    def __init__(self):
        self.data = {
            "runs": 0,
            "constraints_checked": 0,
            "constraints_failed": 0,
            "constraint_errors": 0,
            "points_evaluated": 0,
            "points_skipped": 0,
            "radius_shrinks": 0,
            "residual_terms": 0,
            "verdicts": {},
        }

    def record_run(self, name: str):
        self.data["runs"] += 1
        logger.debug("run_recorded", name=name)

    def record_constraint(self, label: str, passed: bool):
        self.data["constraints_checked"] += 1
        if not passed:
            self.data["constraints_failed"] += 1
            logger.info("constraint_failed", label=label)

    def record_constraint_error(self, error_label: str):
        self.data["constraint_errors"] += 1
        logger.warning("constraint_error", error=error_label)

    def record_points(self, evaluated: int, skipped: int = 0):
        self.data["points_evaluated"] += evaluated
        self.data["points_skipped"] += skipped

    def record_shrink(self, radius: float):
        self.data["radius_shrinks"] += 1
        logger.info("sample_radius_shrunk", radius=radius)

    def record_residual(self, terms: int):
        self.data["residual_terms"] += terms

    def record_verdict(self, verdict: str):
        verdicts = self.data["verdicts"]
        verdicts[verdict] = verdicts.get(verdict, 0) + 1

    def merge(self, other: "MetricsCollector"):
        """Add another collector's counts into this one."""
        for key, value in other.data.items():
            if key == "verdicts":
                for verdict, count in value.items():
                    self.data["verdicts"][verdict] = self.data["verdicts"].get(verdict, 0) + count
            else:
                self.data[key] += value

    def snapshot(self) -> dict:
        data = dict(self.data)
        data["verdicts"] = dict(sorted(self.data["verdicts"].items()))
        return data


# Process-wide totals, logged by the CLI in verbose mode
metrics = MetricsCollector()


def get_metrics_data() -> str:
    """Totals as key=value lines"""
    data = metrics.snapshot()
    lines = [f"{key}={value}" for key, value in data.items() if key != "verdicts"]
    lines.extend(f"verdict_{name}={count}" for name, count in data["verdicts"].items())
    return "\n".join(lines)
