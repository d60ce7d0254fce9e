import pytest

from rbci import enumerate_cre
from rbci.simulate import dgp_example1

from support import EXAMPLE1_Z


@pytest.fixture(scope="session")
def example1():
    """(z, observed Y, exhaustive reference set) of the bundled experiment."""
    table = dgp_example1()
    z = EXAMPLE1_Z.copy()
    return z, table.observed(z), enumerate_cre(8, 4)
