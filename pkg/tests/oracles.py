"""Independent reference computations used by the tests.

Nothing here imports the package: these are naive loops written straight
from the definitions, so agreement with the vectorised code means something.
"""

import itertools
import math

import numpy as np


def brute_gap(dist):
    """min over ordered pairwise-distinct (x, y, z) of d(x,y) + d(y,z) - d(x,z)."""
    n = len(dist)
    best = math.inf
    for x, y, z in itertools.permutations(range(n), 3):
        best = min(best, dist[x][y] + dist[y][z] - dist[x][z])
    return best


def brute_triangle_violations(dist, tol=0.0):
    n = len(dist)
    out = []
    for i, j, k in itertools.permutations(range(n), 3):
        if i < k and dist[i][k] > dist[i][j] + dist[j][k] + tol:
            out.append((i, j, k))
    return sorted(out)


def sup_norm(v):
    return max(abs(x) for x in v)


def perturbed_rows(dist, eps):
    """eps: dict {(m, n): value} with m > n (0-based)."""
    n = len(dist)
    rows = []
    for a in range(n):
        row = []
        for k in range(n):
            e = eps.get((a, k), 0.0) if k < a else 0.0
            row.append(dist[a][k] - dist[0][k] + e)
        rows.append(row)
    return rows


def naive_phi(dist, norm, eps):
    """The correction map, evaluated with explicit loops."""
    rows = perturbed_rows(dist, eps)
    out = {}
    n = len(dist)
    for m in range(n):
        for a in range(m):
            diff = [rows[a][k] - rows[m][k] for k in range(n)]
            out[(m, a)] = dist[a][m] + eps.get((m, a), 0.0) - norm(diff)
    return out


def grid_refine_fixed_point(phi, dim, upper, points=11, levels=9):
    """Fixed point of ``phi`` on ``[0, upper]^dim`` by grid search with zooming.

    At each level the residual ``max|phi(e) - e|`` is evaluated on a regular
    grid over the current box; the minimiser (ties broken towards the
    smallest sup-norm, then lexicographically) becomes the centre of a box
    one grid step wide on each side. Returns ``(point, residual)``.
    """
    lo = np.zeros(dim)
    hi = np.full(dim, float(upper))
    best = None
    for _ in range(levels):
        axes = [np.linspace(lo[i], hi[i], points) for i in range(dim)]
        step = (hi - lo) / (points - 1)
        candidates = []
        for point in itertools.product(*axes):
            e = np.array(point)
            r = np.abs(np.asarray(phi(e)) - e).max()
            candidates.append((r, np.abs(e).max(), tuple(e)))
        candidates.sort()
        r, _, best = candidates[0]
        best = np.array(best)
        lo = np.maximum(best - step, 0.0)
        hi = np.minimum(best + step, upper)
    return best, r


def sampled_distortion(norm, dim, samples, rng):
    """Dense-sampling estimate of (lower, upper) frames against the sup norm."""
    ratios = []
    for _ in range(samples):
        v = rng.standard_normal(dim)
        # mix in sparse and constant-magnitude directions, where extremes sit
        kind = rng.integers(3)
        if kind == 1:
            v = np.zeros(dim)
            v[rng.integers(dim)] = 1.0
        elif kind == 2:
            v = rng.choice([-1.0, 1.0], size=dim)
        ratios.append(norm(v) / sup_norm(v))
    return min(ratios), max(ratios)


def random_point_metric(rng, n, dim=3, p=2):
    """Distance matrix of ``n`` random points in R^dim under the l_p norm."""
    pts = rng.uniform(-1.0, 1.0, size=(n, dim))
    diff = pts[:, None, :] - pts[None, :, :]
    if p == np.inf:
        return np.abs(diff).max(axis=-1)
    return (np.abs(diff) ** p).sum(axis=-1) ** (1.0 / p)


def random_graph_metric(rng, n):
    """Shortest-path metric of a random complete weighted graph (Floyd-Warshall)."""
    w = rng.uniform(0.1, 2.0, size=(n, n))
    d = np.triu(w, 1)
    d = d + d.T
    for k in range(n):
        d = np.minimum(d, d[:, k][:, None] + d[k, :][None, :])
    return d


def fuzzed_metric(rng, n):
    kind = rng.integers(4)
    if kind == 0:
        return random_point_metric(rng, n, dim=int(rng.integers(1, 5)), p=2)
    if kind == 1:
        return random_point_metric(rng, n, dim=int(rng.integers(1, 5)), p=1)
    if kind == 2:
        return random_point_metric(rng, n, dim=int(rng.integers(1, 5)), p=np.inf)
    return random_graph_metric(rng, n)
