import pytest

from lavaurs import fatou, maps, parabolic, circlemap
from lavaurs.cfrac import GOLDEN_MEAN


@pytest.fixture(scope="session")
def atlas12():
    return fatou.build_atlas(parabolic.ParabolicPolynomial(1, 2))


@pytest.fixture(scope="session")
def solved12(atlas12):
    """LavaursSystem at the sigma solved for the golden mean, upper end."""
    return maps.solve_sigma(atlas12, GOLDEN_MEAN, "UPPER")


@pytest.fixture(scope="session")
def tuned_golden():
    return circlemap.tune_rotation(GOLDEN_MEAN, tol=1e-8)


@pytest.fixture(scope="session")
def tower_golden(tuned_golden):
    return circlemap.partition_tower(tuned_golden, 10)
