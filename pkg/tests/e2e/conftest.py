import subprocess
import sys
from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def project_root() -> Path:
    """A fixture to provide the project root directory."""
    return Path(__file__).parent.parent.parent # Up three levels from tests/e2e/conftest.py


@pytest.fixture(scope="session")
def run_cli(project_root: Path):
    """
    A fixture returning a function that runs the kkltype command line in a subprocess
    from the project root and returns the completed process.
    """
    def _run(*args: str) -> subprocess.CompletedProcess:
        return subprocess.run(
            [sys.executable, "-m", "kkltype", *args],
            cwd=project_root,
            capture_output=True,
            text=True,
        )
    return _run


@pytest.fixture(scope="function")
def saved_function_path(request, tmp_path: Path, run_cli) -> Path:
    """
    A fixture that exports a zoo function to a function file and returns its path.
    `request.param` holds the zoo specification.
    """
    spec = request.param
    output_file = tmp_path / "function.json"

    result = run_cli("zoo", spec, "--save", str(output_file))
    assert result.returncode == 0, f"Exporting '{spec}' failed: {result.stderr}"
    assert output_file.exists(), f"Function file was not created at {output_file}"

    return output_file
