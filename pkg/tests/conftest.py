import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from cosserat_shell import geometry
from cosserat_shell.energy import MaterialParams

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

BASE_MATERIAL = MaterialParams(mu=1.0, lam=1.0, muc=0.3, Lc=0.1, b1=1.0, b2=1.0, b3=1.0)


def chart_zoo():
    return {
        "plane": geometry.plane(),
        "cylinder": geometry.cylinder(2.0),
        "sphere": geometry.sphere(1.0),
        "saddle": geometry.saddle(0.5),
        "graph": geometry.graph(poly=((2, 0, 0.3), (1, 1, 0.2)), trig=((0.1, 2.0, 1.0, 0.3),)),
    }


@pytest.fixture
def material():
    return BASE_MATERIAL


@pytest.fixture(params=list(chart_zoo()))
def chart(request):
    return chart_zoo()[request.param]


def random_points(chart, n, rng):
    (a, b), (c, d) = chart.domain
    return np.column_stack([rng.uniform(a, b, n), rng.uniform(c, d, n)])


def random_material(rng):
    mu = rng.uniform(0.2, 3.0)
    lam = rng.uniform(-0.45 * mu, 3.0)
    return MaterialParams(mu=mu, lam=lam, muc=rng.uniform(0.01, 2.0), Lc=rng.uniform(0.05, 1.0),
                          b1=rng.uniform(0.2, 3.0), b2=rng.uniform(0.2, 3.0),
                          b3=rng.uniform(0.2, 3.0))


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def matrices(shape=(3, 3)):
    n = int(np.prod(shape))
    return st.lists(finite, min_size=n, max_size=n).map(lambda v: np.array(v).reshape(shape))


@st.composite
def materials(draw):
    mu = draw(st.floats(0.1, 5.0))
    lam = draw(st.floats(-0.45 * mu, 5.0))
    return MaterialParams(mu=mu, lam=lam, muc=draw(st.floats(0.0, 3.0)),
                          Lc=draw(st.floats(0.05, 2.0)), b1=draw(st.floats(0.1, 3.0)),
                          b2=draw(st.floats(0.1, 3.0)), b3=draw(st.floats(0.1, 3.0)))


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
