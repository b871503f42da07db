import subprocess
import sys

import pytest


@pytest.fixture
def cli():
    """Run the installed CLI in a subprocess and return the completed process."""

    def run(*args, stdin: str | bytes | None = None, binary: bool = False):
        if binary and isinstance(stdin, str):
            stdin = stdin.encode()
        return subprocess.run(
            [sys.executable, "-m", "growcount", *args],
            input=stdin,
            capture_output=True,
            text=not binary,
            timeout=120,
        )

    return run
