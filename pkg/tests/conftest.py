import numpy as np
import pytest

from ecwsa.data import Dataset, load_bundled, min_max_normalize


def make_dataset(X, y, name="synthetic") -> Dataset:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    ds = Dataset(
        name=name,
        X=X,
        y=y,
        classes=tuple(str(c) for c in range(int(y.max()) + 1)),
        feature_names=tuple(f"f{i}" for i in range(X.shape[1])),
        col_min=X.min(axis=0),
        col_max=X.max(axis=0),
    )
    return min_max_normalize(ds)


@pytest.fixture
def synthetic():
    """Feature 0 carries the class, the rest are noise."""
    rng = np.random.default_rng(7)
    y = np.repeat([0, 1], 30)
    X = np.column_stack([y + 0.05 * rng.random(60), rng.random((60, 5))])
    return make_dataset(X, y)


@pytest.fixture(scope="session")
def breastcancer():
    return load_bundled("breastcancer")


@pytest.fixture(scope="session")
def zoo():
    return load_bundled("zoo")


@pytest.fixture(scope="session")
def wine():
    return load_bundled("wine")


VERDICTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[VERDICTS] = {}


@pytest.fixture
def verdict(request):
    """Record one pass/fail line for an acceptance criterion and return the flag."""
    lines = request.config.stash[VERDICTS]

    def record(n, ok, detail):
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines[n] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(VERDICTS, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
