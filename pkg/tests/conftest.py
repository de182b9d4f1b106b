"""Brute-force reference implementations shared by the test modules."""

import itertools
import time

import pytest


def _sq(x, y):
    return x * x + y * y


def _lo(x, y):
    return x * x + x * y + y * y


def _q3(x, y):
    return x * x + 3 * x * y + 3 * y * y


def _scaled(form, scale, *conditions):
    def check(d):
        if d % scale:
            return False
        v = d // scale
        return any(
            form(x, y) == v and all(cond(x, y) for cond in conditions)
            for x in range(v + 1)
            for y in range(v + 1)
            if x * x <= v and y * y <= v
        )

    return check


def _diff_parity(x, y):
    return (x - y) % 2 == 1


def _not_both_even(x, y):
    return x % 2 or y % 2


def _incongruent3(x, y):
    return (x - y) % 3 != 0


def _multiple(m):
    return lambda d: d % m == 0


# (case, family) -> realizability of degree d, by exhaustive search over x, y.
CRITERIA = {
    (1, 1): _scaled(_sq, 1, _diff_parity),
    (1, 2): _scaled(_sq, 2, _diff_parity),
    (1, 3): _scaled(_sq, 4),
    (2, 1): _scaled(_lo, 1, _not_both_even, _incongruent3),
    (2, 2): _scaled(_q3, 3, _not_both_even),
    (2, 3): _scaled(_lo, 4, _incongruent3),
    (2, 4): _scaled(_q3, 12),
    (3, 1): _scaled(_lo, 1, _incongruent3),
    (3, 2): _scaled(_q3, 3),
    (4, 1): lambda d: True,
    (4, 2): lambda d: True,
    (4, 3): _multiple(4),
    (5, 1): _scaled(_q3, 6),
    (5, 2): _scaled(_lo, 2, _incongruent3),
    (5, 3): lambda d: False,
    (5, 4): _scaled(_q3, 6),
    (6, 1): lambda d: True,
    (6, 2): lambda d: True,
    (6, 3): lambda d: True,
    (6, 4): lambda d: True,
    (6, 5): lambda d: False,
    (6, 6): _multiple(8),
    (7, 1): lambda d: True,
    (7, 2): lambda d: True,
    (7, 3): lambda d: True,
    (7, 4): lambda d: False,
    (7, 5): _multiple(12),
}


def _cycle_type(p):
    seen, lengths = set(), []
    for s in range(len(p)):
        if s in seen:
            continue
        n, x = 0, s
        while x not in seen:
            seen.add(x)
            x = p[x]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def _transitive(perms, d):
    reach, frontier = {0}, [0]
    while frontier:
        x = frontier.pop()
        for p in perms:
            if p[x] not in reach:
                reach.add(p[x])
                frontier.append(p[x])
    return len(reach) == d


def brute_realizable(types, d):
    """Is there a transitive tuple with these cycle types and product one?  Full search over S_d."""
    perms = list(itertools.permutations(range(d)))
    by_type = {}
    for p in perms:
        by_type.setdefault(_cycle_type(p), []).append(p)
    *head, last = [tuple(t) for t in types]
    for combo in itertools.product(*(by_type.get(t, []) for t in head)):
        total = tuple(range(d))
        for p in combo:
            total = tuple(p[total[x]] for x in range(d))
        closing = [0] * d
        for x in range(d):
            closing[total[x]] = x
        closing = tuple(closing)
        if _cycle_type(closing) == last and _transitive(combo + (closing,), d):
            return True
    return False


@pytest.fixture(scope="session")
def criteria():
    return CRITERIA


@pytest.fixture(scope="session")
def brute():
    return brute_realizable


# ---------------------------------------------------------------------------
# acceptance reporting: one PASS/FAIL line per criterion in the terminal summary

_CRITERIA_LINES = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        item.call_report = report


@pytest.fixture
def timed(request):
    """Stopwatch for a test marked ``criterion``; records its outcome for the summary."""
    marker = request.node.get_closest_marker("criterion")
    start = time.perf_counter()
    yield lambda: time.perf_counter() - start
    elapsed = time.perf_counter() - start
    report = getattr(request.node, "call_report", None)
    status = "PASS" if report is not None and report.passed else "FAIL"
    number, title = marker.args
    _CRITERIA_LINES.append((number, f"criterion {number:>2} {status} {elapsed:8.2f}s  {title}"))


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_CRITERIA_LINES):
            terminalreporter.write_line(line)
