import os

from hypothesis import HealthCheck, settings

# reproducible CI runs: no deadline flakiness, derandomized example order
settings.register_profile(
    "ci",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures")
