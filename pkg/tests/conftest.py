from importlib import resources

import numpy as np
import pytest

from reduced_google import oracle
from reduced_google.graph import GoogleOperator, SubsetSelection, parse_edge_list, parse_subset

DATA = resources.files("reduced_google") / "data"


def data_path(name):
    return str(DATA / name)


@pytest.fixture(scope="session")
def fixture40():
    graph = parse_edge_list(
        (DATA / "fixture40_edges.txt").read_text(), (DATA / "fixture40_labels.tsv").read_text()
    )
    subset = parse_subset((DATA / "fixture40_subset.txt").read_text(), graph)
    return graph, subset


@pytest.fixture(scope="session")
def fixture30():
    graph = parse_edge_list((DATA / "fixture30_edges.txt").read_text())
    subset = parse_subset((DATA / "fixture30_subset.txt").read_text(), graph)
    return graph, subset


def random_instance(seed, n_range=(20, 200), nr_range=(2, 20)):
    """Random graph with a random subset; reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    n_r = int(rng.integers(nr_range[0], min(nr_range[1], n - 1) + 1))
    g = oracle.random_graph(n, mean_degree=float(rng.uniform(1.5, 6.0)), seed=seed)
    subset = SubsetSelection.from_graph(g, rng.choice(n, n_r, replace=False))
    return g, subset


class DenseBlocks:
    """Block operators backed by explicit matrices, for hand-made G_ss cases."""

    def __init__(self, Grr, Grs, Gsr, Gss, subset=None):
        self.G_rr = np.atleast_2d(np.asarray(Grr, dtype=float))
        self.Grs = np.atleast_2d(np.asarray(Grs, dtype=float))
        self.Gsr = np.atleast_2d(np.asarray(Gsr, dtype=float))
        self.Gss = np.atleast_2d(np.asarray(Gss, dtype=float))
        self.subset = subset or SubsetSelection(tuple(range(len(self.G_rr))))

    n_r = property(lambda self: self.G_rr.shape[0])
    n_s = property(lambda self: self.Gss.shape[0])

    def apply_rs(self, x):
        return self.Grs @ x

    def apply_sr(self, x):
        return self.Gsr @ x

    def apply_ss(self, x):
        return self.Gss @ x

    def rapply_ss(self, u):
        return self.Gss.T @ u

    def rapply_sr(self, u):
        return self.Gsr.T @ u


def google(graph, alpha=0.85):
    return GoogleOperator(graph, alpha)


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line[1])


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number, name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {name} {detail}".rstrip()
        request.config._acceptance_lines.append((number, line))
        print(line)
        assert ok, line

    return record
