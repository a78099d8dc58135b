import numpy as np
import pytest
from hypothesis import settings

from xspec import autodiff as ad

settings.register_profile("xspec", deadline=None, max_examples=50, derandomize=True)
settings.load_profile("xspec")


def numeric_grad(f, arrays, h=1e-6):
    """Central differences of scalar f(*tensors) in double precision."""
    grads = []
    with ad.precision(np.float64):
        for k, a in enumerate(arrays):
            g = np.zeros_like(a, dtype=np.float64)
            for i in np.ndindex(a.shape):
                up = [np.array(x, dtype=np.float64) for x in arrays]
                dn = [np.array(x, dtype=np.float64) for x in arrays]
                up[k][i] += h
                dn[k][i] -= h
                fu = f(*[ad.Tensor(x) for x in up]).item()
                fd = f(*[ad.Tensor(x) for x in dn]).item()
                g[i] = (fu - fd) / (2 * h)
            grads.append(g)
    return grads


def analytic_grad(f, arrays):
    with ad.precision(np.float64):
        ts = [ad.Tensor(np.array(a, dtype=np.float64), requires_grad=True) for a in arrays]
        f(*ts).backward()
        return [t.dense_grad() if t.grad is not None else np.zeros(t.shape) for t in ts]


def assert_grads_match(f, arrays, rtol=1e-3, atol=1e-5, h=1e-6):
    ana = analytic_grad(f, arrays)
    num = numeric_grad(f, arrays, h)
    for a, n in zip(ana, num):
        err = np.abs(a - n)
        bad = err > atol + rtol * np.abs(n)
        assert not bad.any(), f"max abs err {err.max():.3g}; analytic {a[bad][:3]} vs numeric {n[bad][:3]}"


def max_rel_error(f, arrays, h=1e-6, floor=1e-5):
    ana = analytic_grad(f, arrays)
    num = numeric_grad(f, arrays, h)
    return max(float(np.max(np.abs(a - n) / np.maximum(np.abs(n), floor))) if a.size else 0.0 for a, n in zip(ana, num))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# -- acceptance report ----------------------------------------------------------------
CRITERIA: dict = {}


def record_criterion(number: int, title: str, passed: bool, detail: str) -> bool:
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}: {title} ({detail})"
    CRITERIA[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
