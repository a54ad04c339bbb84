import sys
from pathlib import Path

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "repo", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


def letters(max_gen=4, max_size=12):
    """Signed letter lists over generators 1..max_gen."""
    letter = st.integers(1, max_gen).flatmap(lambda g: st.sampled_from((g, -g)))
    return st.lists(letter, max_size=max_size)


def braid_words(strands, max_size=10):
    step = st.tuples(st.integers(1, strands - 1), st.sampled_from((1, -1, 2, -2)))
    return st.lists(step, max_size=max_size)


def random_letters(rng, max_gen=4, max_size=12):
    return [rng.choice((1, -1)) * rng.randint(1, max_gen) for _ in range(rng.randint(0, max_size))]


def random_braid_word(rng, strands, max_size=10):
    return [(rng.randint(1, strands - 1), rng.choice((1, -1, 2, -2)))
            for _ in range(rng.randint(0, max_size))]


ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> bool:
    """Remember one PASS/FAIL line per acceptance criterion and echo it."""
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE_LINES[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
