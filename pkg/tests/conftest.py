import pytest

from krylov_exact import Context


@pytest.fixture(scope="session")
def ctx():
    """Exact rational context shared by the exact-mode tests."""
    return Context("exact")


@pytest.fixture(scope="session")
def bctx():
    """50-digit bigreal context shared by the numerical tests."""
    return Context("bigreal", 50)
