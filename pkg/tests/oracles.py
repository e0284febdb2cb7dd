"""Independent reference computations used only by the tests."""

import itertools

import mpmath
import numpy as np


def grid_pnorm(A, p, res=15, rounds=8, keep=8):
    """max ||Ax||_p / ||x||_p over zooming grids, brute force.

    For each pivot j the vector has x_j = 1 and every other entry on a grid of
    the complex square |Re|, |Im| <= 1; this covers the sphere up to phase and
    scaling with a smooth parametrization. The best ``keep`` points per pivot
    are refined on local grids whose spacing halves each round.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if n == 1:
        return float(abs(A[0, 0]))
    m = 2 * (n - 1)

    def ratio(Y, j):
        X = np.insert(Y[:, 0::2] + 1j * Y[:, 1::2], j, 1.0, axis=1)
        num = (np.abs(X @ A.T) ** p).sum(axis=1) ** (1.0 / p)
        den = (np.abs(X) ** p).sum(axis=1) ** (1.0 / p)
        return num / den

    axis = np.linspace(-1, 1, res)
    Y0 = np.array(list(itertools.product(axis, repeat=m)))
    local = np.array(list(itertools.product([-1.0, -0.5, 0.0, 0.5, 1.0], repeat=m)))
    best = 0.0
    for j in range(n):
        v = ratio(Y0, j)
        order = np.argsort(v)[::-1][:keep]
        cands = [Y0[i] for i in order]
        h = 2.0 / (res - 1)
        for _ in range(rounds):
            nxt = []
            for y in cands:
                Yc = np.clip(y[None] + h * local, -1, 1)
                vc = ratio(Yc, j)
                nxt.append(Yc[int(np.argmax(vc))])
            cands = nxt
            h /= 2
        best = max(best, float(ratio(np.array(cands), j).max()), float(v.max()))
    return best


def mp_expm(A, dps=40):
    """Matrix exponential in high precision via mpmath."""
    with mpmath.workdps(dps):
        M = mpmath.matrix([[mpmath.mpc(complex(z)) for z in row] for row in np.asarray(A)])
        E = mpmath.expm(M)
        return np.array([[complex(E[i, j]) for j in range(E.cols)] for i in range(E.rows)])
