import itertools

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# Independent reference implementations: explicit index loops only.


def loop_partial_trace(mat, dims, keep):
    """Reduced matrix on ``keep`` (1-based) by summing matrix elements."""
    n = len(dims)
    keep = sorted(keep)
    drop = [k for k in range(1, n + 1) if k not in keep]
    multi = list(itertools.product(*[range(d) for d in dims]))
    flat = {m: i for i, m in enumerate(multi)}
    kd = [dims[k - 1] for k in keep]
    kept = list(itertools.product(*[range(d) for d in kd]))
    traced = list(itertools.product(*[range(dims[k - 1]) for k in drop]))
    out = np.zeros((len(kept), len(kept)), dtype=complex)

    def full(a, t):
        m = [0] * n
        for k, v in zip(keep, a):
            m[k - 1] = v
        for k, v in zip(drop, t):
            m[k - 1] = v
        return flat[tuple(m)]

    for r, a in enumerate(kept):
        for c, b in enumerate(kept):
            out[r, c] = sum(mat[full(a, t), full(b, t)] for t in traced)
    return out


def loop_partial_transpose_first(mat, d1, d2):
    out = np.zeros_like(mat)
    for i, j, k, l in itertools.product(range(d1), range(d1), range(d2), range(d2)):
        out[i * d2 + k, j * d2 + l] = mat[j * d2 + k, i * d2 + l]
    return out


def loop_realign(mat, d1, d2):
    out = np.zeros((d1 * d1, d2 * d2), dtype=complex)
    for i, j, k, l in itertools.product(range(d1), range(d1), range(d2), range(d2)):
        out[i * d1 + j, k * d2 + l] = mat[i * d2 + k, j * d2 + l]
    return out


def perm_matrix(dims, order):
    """Unitary moving subsystem ``order[k]`` (0-based) to position k."""
    multi = list(itertools.product(*[range(d) for d in dims]))
    new_dims = [dims[o] for o in order]
    new_flat = {m: i for i, m in enumerate(itertools.product(*[range(d) for d in new_dims]))}
    p = np.zeros((len(multi), len(multi)))
    for i, m in enumerate(multi):
        p[new_flat[tuple(m[o] for o in order)], i] = 1
    return p


def pure_tau_oracle(psi_amp, dims):
    """tau_N of a pure state as prefactor * sum |psi^T S psi|^2 (no eigenvalues)."""
    n = len(dims)
    d = dims[0]
    total = 0.0
    for size in range(1, n):
        for block in itertools.combinations(range(n), size):
            if 0 not in block:
                continue
            order = list(block) + [k for k in range(n) if k not in block]
            v = perm_matrix(dims, order) @ psi_amp
            d1 = d ** len(block)
            d2 = d ** (n - len(block))
            for a, a2 in itertools.combinations(range(d1), 2):
                la = np.zeros((d1, d1))
                la[a, a2], la[a2, a] = 1, -1
                for b, b2 in itertools.combinations(range(d2), 2):
                    lb = np.zeros((d2, d2))
                    lb[b, b2], lb[b2, b] = 1, -1
                    total += abs(v @ np.kron(la, lb) @ v) ** 2
    m = 2 ** (n - 1) - 1
    return d / (2 * m * (d - 1)) * total


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
