from __future__ import annotations

import os

import pytest

from hornpac.io import load_context, packaged_dataset_path, packaged_scaling_path


def pytest_collection_modifyitems(config, items):
    if os.environ.get("RUN_SLOW") == "1" or config.getoption("-m", default="") == "slow":
        return
    skip = pytest.mark.skip(reason="slow test; set RUN_SLOW=1 to enable")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def zoo_doc():
    return load_context(packaged_dataset_path("zoo"), packaged_scaling_path("zoo"))
