import pytest

from buchloop.catalog import groups_up_to, random_loop, smallest_nonassociative
from buchloop.construction import build_q1024, build_q64
from buchloop.substructure import quotient


@pytest.fixture(scope="session")
def q1024():
    return build_q1024()


@pytest.fixture(scope="session")
def q64(q1024):
    return build_q64(q1024).table


@pytest.fixture(scope="session")
def groups16():
    return groups_up_to(16)


@pytest.fixture(scope="session")
def small_buchsteiner(q64):
    """Non-associative Buchsteiner loop of order 32: Q64 modulo its center."""
    return quotient(q64, [0, 6]).table.with_label("Q64/Z")


@pytest.fixture(scope="session")
def corpus(groups16, q64, small_buchsteiner):
    """Tables used for cross-checks: groups, non-associative and random loops, Buchsteiner loops."""
    tables = list(groups16)
    tables.append(smallest_nonassociative())
    tables += [random_loop(n, seed) for n in (5, 6, 7, 8) for seed in (0, 1)]
    tables += [small_buchsteiner, q64]
    return tables


@pytest.fixture(scope="session")
def corpus_small(corpus):
    return [t for t in corpus if t.order <= 8]


def brute_first_failure(t, fn, arity):
    """Lexicographically first tuple where ``fn`` is False, by plain iteration."""
    import itertools

    for tup in itertools.product(range(t.order), repeat=arity):
        if not fn(*tup):
            return tup
    return None




def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
