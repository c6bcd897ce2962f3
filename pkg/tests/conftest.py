import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hypothesis import settings

settings.register_profile("repro", max_examples=60, derandomize=True,
                          deadline=None)
settings.load_profile("repro")
