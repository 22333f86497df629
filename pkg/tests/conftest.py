import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

# generators retry until a draw is invertible, so even the smallest example is "large"
settings.register_profile("default", suppress_health_check=[HealthCheck.large_base_example, HealthCheck.too_slow],
                          deadline=None)
settings.load_profile("default")
