import pytest

import ncc


@pytest.fixture(scope="session", autouse=True)
def builtins_installed():
    ncc.install_builtins()
