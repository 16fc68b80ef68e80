import os
from pathlib import Path

import rgg_geometry._core


def pytest_configure(config):
    # Under ctest the module must come from the build tree, not an installed copy.
    build_dir = os.environ.get("RGG_PYTHON_BUILD_DIR")
    if build_dir and Path(build_dir).resolve() not in Path(rgg_geometry._core.__file__).resolve().parents:
        raise RuntimeError(f"rgg_geometry loaded from {rgg_geometry._core.__file__}, expected {build_dir}")
