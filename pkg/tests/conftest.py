import os
import sys

import pytest
from hypothesis import settings

from crsym.jobs import build_spec, parse_job
from crsym.segre import complexify, derive_pde_system

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

JOBS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "jobs")


def make_spec(kind, phi, order=12, m=1):
    job = parse_job(f"kind = {kind}\nm = {m}\nphi = {phi}\norder = {order}\n")
    return build_spec(job, order)


def make_system(kind, phi, order=12, m=1):
    spec = make_spec(kind, phi, order, m)
    eq = complexify(spec)
    return spec, eq, derive_pde_system(eq)


@pytest.fixture(scope="session")
def sextic_tube():
    return make_system("tube", "y^2 + y^6 + y^9", 14)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
