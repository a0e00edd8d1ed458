import os

from hypothesis import HealthCheck, settings

# derandomized so the suite is reproducible; DNMOD_HYPOTHESIS=dev explores fresh examples
settings.register_profile("ci", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("dev", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("DNMOD_HYPOTHESIS", "ci"))
