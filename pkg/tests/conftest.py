from hypothesis import HealthCheck, settings

# reproducible property runs; evaluation over 100 points is slow to generate
settings.register_profile(
    "fermat",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large, HealthCheck.large_base_example],
)
settings.load_profile("fermat")
