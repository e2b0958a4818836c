"""Shared fixtures for the test suite."""

import pytest


def _logistic_intensities(n: int, x0: float = 0.37) -> list[int]:
    """Chaotic integer series in the laser file format (one count per line).

    The real laser recording is a measured artifact that is not bundled
    with the repository, so tests that only need a file of plausible
    intensity counts use a quantized logistic-map orbit instead.  Any
    property checked against it (parsing, splits, training mechanics)
    is independent of which chaotic series the file holds.
    """
    values = []
    x = x0
    for _ in range(n):
        values.append(round(255 * x))
        x = 4.0 * x * (1.0 - x)
    return values


@pytest.fixture(scope="session")
def laser_file(tmp_path_factory):
    """Path to a 1000-line intensity file in the laser text format."""
    path = tmp_path_factory.mktemp("laser") / "laser.txt"
    values = _logistic_intensities(1000)
    path.write_text("\n".join(str(v) for v in values) + "\n", encoding="utf-8")
    return path
