from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cascadesdp.synthetic import DEMO_SHAPES, write_corpus

settings.register_profile(
    "default",
    deadline=None,  # first numba-compiled call can be slow
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

REPO_ROOT = Path(__file__).resolve().parents[1]
DEFAULT_NASA_DIR = REPO_ROOT / "datasets" / "nasa"


def pytest_addoption(parser):
    parser.addoption(
        "--nasa-dir",
        default=None,
        help="directory with the cleaned NASA corpus files "
        "(CM1.arff ... PC5.arff or .csv); defaults to datasets/nasa/",
    )


@pytest.fixture(scope="session")
def nasa_dir(request) -> Path | None:
    """Path to the real corpus, or None when it is not available."""
    option = request.config.getoption("--nasa-dir")
    candidate = Path(option) if option else DEFAULT_NASA_DIR
    return candidate if candidate.is_dir() else None


@pytest.fixture(scope="session")
def demo_corpus(tmp_path_factory) -> Path:
    """Small synthetic three-dataset corpus written once per session."""
    directory = tmp_path_factory.mktemp("demo_corpus")
    write_corpus(directory, DEMO_SHAPES, seed=1)
    return directory
