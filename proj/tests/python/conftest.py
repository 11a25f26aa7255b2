import os
import shutil
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    """Path to the uwbcap executable: $UWBCAP_CLI, the in-tree build, or PATH."""
    env = os.environ.get("UWBCAP_CLI")
    if env:
        return env
    built = ROOT / "build" / "tools" / "uwbcap"
    if built.exists():
        return str(built)
    found = shutil.which("uwbcap")
    if not found:
        pytest.skip("uwbcap executable not found")
    return found
