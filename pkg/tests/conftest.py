import os

import pytest


@pytest.fixture(scope="session", autouse=True)
def isolated_cache(tmp_path_factory):
    """Keep character-table caches inside the test run."""
    d = tmp_path_factory.mktemp("chartab-cache")
    old = os.environ.get("EDIMKIT_CACHE")
    os.environ["EDIMKIT_CACHE"] = str(d)
    yield
    if old is None:
        os.environ.pop("EDIMKIT_CACHE", None)
    else:
        os.environ["EDIMKIT_CACHE"] = old
