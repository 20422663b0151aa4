"""Guard against the committed CSV fixtures drifting from their generator."""

from pathlib import Path

import pytest

from make_fixtures import DATA_DIR, FIXTURE_FILES, fixture_bytes


@pytest.mark.parametrize("name", sorted(FIXTURE_FILES))
def test_committed_fixture_matches_generator(name):
    committed = (DATA_DIR / name).read_bytes()
    assert committed == fixture_bytes(name), (
        f"{name} is out of date; regenerate with: python tests/make_fixtures.py"
    )


def test_golden_export_exists():
    assert (Path(__file__).parent / "data" / "golden_i65_patching.csv").is_file()
