"""Root conftest: puts the repository root on sys.path and registers markers."""


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: reproduces a full error table (runs by default)")
