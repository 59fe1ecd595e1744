"""Shared fixtures: bundled algebras and cached searches.

Enumerations over the larger examples take tens of seconds, so each algebra's
exceptional / tilting / witness / conclusions results are computed once per
session and shared by every test module.
"""

from __future__ import annotations

import functools
from importlib import resources

import pytest

from tiltkit.algebra import parse_algebra
from tiltkit.search import (SearchBounds, conclusions_report, enumerate_exceptional, enumerate_tilting,
                            recollement_witness_search)

CORPUS = ("ex211", "ex45", "ex47", "kronecker", "a2", "local3")


def corpus_text(name: str) -> str:
    return (resources.files("tiltkit") / "corpus" / f"{name}.alg").read_text(encoding="utf-8")


@functools.lru_cache(maxsize=None)
def load(name: str):
    return parse_algebra(corpus_text(name), name=name)


class SearchCache:
    """Lazily computed search results keyed by algebra name and bounds."""

    def __init__(self):
        self._store = {}

    def _get(self, key, compute):
        if key not in self._store:
            self._store[key] = compute()
        return self._store[key]

    def bounds(self, **kw) -> SearchBounds:
        return SearchBounds(**kw)

    def exceptional(self, name: str, **kw):
        key = ("exc", name, tuple(sorted(kw.items())))
        return self._get(key, lambda: enumerate_exceptional(load(name), SearchBounds(**kw)))

    def tilting(self, name: str, **kw):
        key = ("til", name, tuple(sorted(kw.items())))
        return self._get(key, lambda: enumerate_tilting(load(name), SearchBounds(**kw),
                                                        exceptional=self.exceptional(name, **kw)))

    def witnesses(self, name: str, **kw):
        key = ("wit", name, tuple(sorted(kw.items())))
        return self._get(key, lambda: recollement_witness_search(load(name), SearchBounds(**kw),
                                                                 self.exceptional(name, **kw),
                                                                 self.tilting(name, **kw)))

    def conclusions(self, name: str, **kw):
        key = ("con", name, tuple(sorted(kw.items())))
        return self._get(key, lambda: conclusions_report(load(name), SearchBounds(**kw),
                                                         self.exceptional(name, **kw),
                                                         self.tilting(name, **kw)))


@pytest.fixture(scope="session")
def searches() -> SearchCache:
    return SearchCache()


@pytest.fixture(scope="session")
def algebras():
    return {name: load(name) for name in CORPUS}


# -- acceptance summary ---------------------------------------------------------------
# Tests carrying ``@pytest.mark.criterion(n)`` are aggregated into one pass/fail line
# per acceptance criterion, printed at the end of the run.

_CRITERIA: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): test belongs to acceptance criterion n")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marks = getattr(report, "criterion_numbers", ())
    for n in marks:
        _CRITERIA.setdefault(n, []).append((report.nodeid, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.criterion_numbers = tuple(m.args[0] for m in item.iter_markers(name="criterion"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        failed = [nodeid for nodeid, outcome in results if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        tr.write_line(f"criterion {n:2d}: {status} ({len(results) - len(failed)}/{len(results)} checks)")
        for nodeid in failed:
            tr.write_line(f"    failing: {nodeid}")
