import numpy as np
from hypothesis import settings, strategies as st

from qlra import generate, random_instance

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def distributions(draw, n=3):
    w = draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    w = np.asarray(w)
    return w / w.sum()


@st.composite
def quantum_data(draw):
    inst = random_instance(draw(seeds))
    return inst, generate(inst)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.format_results():
        terminalreporter.write_line(line)
