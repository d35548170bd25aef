"""Exact boundary approximants and empirical dimension estimators.

Level-k attractor approximations live in M^k-scaled integer coordinates, so
set membership is exact integer hashing; the only floating step anywhere is
the final mapping back to real coordinates for ball tests, box counting and
rendering. Cardinality growth of the boundary approximant and box counts of
its point cloud provide dimension estimates that are independent of the
spectral pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import intmat
from .errors import BudgetExceededError
from .intmat import Vector
from .pair import StandardPair

DEFAULT_BUDGET = 10**8
_COORD_LIMIT = 2**62


@dataclass(frozen=True)
class Ball:
    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    def contains(self, coords: np.ndarray) -> np.ndarray:
        """Mask of rows inside the ball; ties within 1e-12 relative distance
        count as inside."""
        d2 = np.sum((coords - np.asarray(self.center)) ** 2, axis=1)
        return d2 <= (self.radius**2) * (1.0 + 1e-12)


@dataclass(frozen=True, eq=False)
class ScaledPointSet:
    """Attractor approximation at level k, scaled by M^k.

    ``points`` is an (N, n) int64 array of distinct rows in lexicographic
    order; dividing by M^k (see ``real_coordinates``) recovers the actual
    approximant.
    """

    pair: StandardPair
    k: int
    points: np.ndarray

    def __len__(self) -> int:
        return len(self.points)

    def real_coordinates(self) -> np.ndarray:
        return real_coordinates(self.pair, self.k, self.points)


@dataclass(frozen=True, eq=False)
class BoundaryPointSet(ScaledPointSet):
    """Subset of a level-k approximant that witnesses a nearby translate.

    ``witness_i``/``witness_j`` hold, per point, one pair from the contact
    set (as indices into ``contact``) satisfying the defining condition.
    """

    contact: tuple[Vector, ...] = field(default=())
    witness_i: np.ndarray = field(default=None)
    witness_j: np.ndarray = field(default=None)

    def witness_for(self, point) -> tuple[Vector, Vector]:
        idx = _find_row(self.points, np.asarray(point, np.int64))
        if idx is None:
            raise KeyError(f"{point} is not a boundary point")
        return (
            self.contact[self.witness_i[idx]],
            self.contact[self.witness_j[idx]],
        )


def _find_row(points, row):
    lo, hi = 0, len(points)
    key = tuple(row)
    while lo < hi:
        mid = (lo + hi) // 2
        probe = tuple(points[mid])
        if probe == key:
            return mid
        if probe < key:
            lo = mid + 1
        else:
            hi = mid
    return None


def inverse_power_float(pair: StandardPair, k: int) -> np.ndarray:
    """M^-k as a float matrix, computed from the exact rational inverse."""
    n = pair.n
    d = intmat.det(pair.M) ** k
    adjk = intmat.adjugate(intmat.mat_pow(pair.M, k))
    return np.array(
        [[float(Fraction(adjk[i][j], d)) for j in range(n)] for i in range(n)]
    )


def real_coordinates(pair: StandardPair, k: int, points: np.ndarray) -> np.ndarray:
    """Map scaled integer points through the exact M^-k, then to floats."""
    return points @ inverse_power_float(pair, k).T


def gamma_k(pair: StandardPair, k: int, budget: int = DEFAULT_BUDGET) -> ScaledPointSet:
    """Level-k attractor approximant as exact scaled integer points."""
    if k < 1:
        raise ValueError("level must be at least 1")
    _check_budget(pair, k, budget)
    M = np.asarray(pair.M, np.int64)
    R = np.asarray(pair.digits, np.int64)
    pts = np.zeros((1, pair.n), np.int64)
    for level in range(k):
        _check_coords(pts, M, R, level)
        pts = (pts @ M.T)[:, None, :] + R[None, :, :]
        pts = np.unique(pts.reshape(-1, pair.n), axis=0)
    return ScaledPointSet(pair=pair, k=k, points=pts)


def _check_budget(pair: StandardPair, k: int, budget: int):
    if pair.m**k > budget:
        limit = int(math.log(budget) / math.log(pair.m)) if pair.m > 1 else 0
        raise BudgetExceededError(
            f"level {k} needs up to {pair.m**k} points, over budget {budget}; "
            f"largest affordable level is k={limit}"
        )


def _check_coords(pts, M, R, level):
    if len(pts) == 0:
        return
    bound = int(np.abs(pts).max()) if pts.size else 0
    norm = int(np.abs(M).sum(axis=1).max())
    digit = int(np.abs(R).max()) if R.size else 0
    if bound * norm + digit >= _COORD_LIMIT:
        raise BudgetExceededError(
            f"coordinates would overflow 64-bit range at level {level + 1}"
        )


def _pack_keys(points, lo, dims):
    key = np.zeros(len(points), np.int64)
    for c in range(points.shape[1]):
        key = key * int(dims[c]) + (points[:, c] - int(lo[c]))
    return key


class _Membership:
    """Sorted packed-key index for exact point membership queries."""

    def __init__(self, points: np.ndarray):
        self.lo = points.min(axis=0)
        self.hi = points.max(axis=0)
        self.dims = self.hi - self.lo + 1
        if int(np.prod(self.dims.astype(object))) >= _COORD_LIMIT:
            raise BudgetExceededError("point bounding box too large to index")
        self.keys = np.sort(_pack_keys(points, self.lo, self.dims))

    def contains(self, queries: np.ndarray) -> np.ndarray:
        inbox = np.all((queries >= self.lo) & (queries <= self.hi), axis=1)
        out = np.zeros(len(queries), bool)
        if inbox.any():
            sub = _pack_keys(queries[inbox], self.lo, self.dims)
            pos = np.searchsorted(self.keys, sub)
            pos[pos >= len(self.keys)] = len(self.keys) - 1
            out[np.flatnonzero(inbox)] = self.keys[pos] == sub
        return out


def _scaled_shifts(pair: StandardPair, contact, k: int):
    """All (idx_i, idx_j, M^k i + j) for nonzero contact vectors, in order."""
    Mk = intmat.mat_pow(pair.M, k)
    zero = tuple([0] * pair.n)
    out = []
    for a, i in enumerate(contact):
        if i == zero:
            continue
        Mki = intmat.mat_vec(Mk, i)
        for b, j in enumerate(contact):
            if j == zero:
                continue
            shift = intmat.vec_add(Mki, j)
            if max(abs(c) for c in shift) >= _COORD_LIMIT:
                raise BudgetExceededError("contact shift overflows 64-bit range")
            out.append((a, b, np.asarray(shift, np.int64)))
    return out


def delta_k(pair: StandardPair, contact, k: int,
            budget: int = DEFAULT_BUDGET) -> BoundaryPointSet:
    """Boundary approximant: points of the level-k approximant that sit a
    contact vector (plus an M^-k correction) away from another one.

    One witnessing pair per point is recorded, the first in the scan order
    of the sorted contact set.
    """
    gam = gamma_k(pair, k, budget)
    member = _Membership(gam.points)
    n_pts = len(gam.points)
    mask = np.zeros(n_pts, bool)
    wit_i = np.full(n_pts, -1, np.int64)
    wit_j = np.full(n_pts, -1, np.int64)
    for a, b, shift in _scaled_shifts(pair, contact, k):
        hit = member.contains(gam.points + shift)
        fresh = hit & ~mask
        wit_i[fresh] = a
        wit_j[fresh] = b
        mask |= hit
    return BoundaryPointSet(
        pair=pair,
        k=k,
        points=gam.points[mask],
        contact=tuple(contact),
        witness_i=wit_i[mask],
        witness_j=wit_j[mask],
    )


def contact_matrix_empirical(pair: StandardPair, contact, k: int, ball: Ball,
                             budget: int = DEFAULT_BUDGET):
    """Count basepoints per contact pair, restricted to a ball.

    Entry (i, j) counts approximant points x with x + i + M^-k j also in the
    approximant and either endpoint inside the ball; the origin row and
    column stay zero.
    """
    gam = gamma_k(pair, k, budget)
    member = _Membership(gam.points)
    inv = inverse_power_float(pair, k)
    coords = gam.points @ inv.T
    in_ball = ball.contains(coords)
    size = len(contact)
    pos = {v: idx for idx, v in enumerate(contact)}
    T = [[0] * size for _ in range(size)]
    for a, b, shift in _scaled_shifts(pair, contact, k):
        hit = member.contains(gam.points + shift)
        if not hit.any():
            continue
        target_coords = coords[hit] + (inv @ shift.astype(float))
        count = int(np.sum(in_ball[hit] | ball.contains(target_coords)))
        T[a][b] = count
    return tuple(tuple(row) for row in T), pos


@dataclass(frozen=True)
class GrowthFit:
    rate: float
    levels: tuple[int, ...]
    counts: tuple[int, ...]
    residual: float
    saturated_levels: tuple[int, ...]
    dropped_level: int | None


def growth_rate_estimate(pair: StandardPair, contact, levels, ball: Ball | None = None,
                         budget: int = DEFAULT_BUDGET) -> GrowthFit:
    """Exponential growth rate of boundary-approximant counts.

    exp(slope) of the least-squares line through ln(count) vs level, after
    two principled trims: leading levels where every approximant point is
    flagged (a fully saturated level carries no boundary signal, its count
    is forced to the full approximant size), and then the smallest remaining
    level once, when its residual dominates the fit.
    """
    levels = list(levels)
    if len(levels) < 3 or any(b - a != 1 for a, b in zip(levels, levels[1:])):
        raise ValueError("need at least three consecutive levels")
    counts, totals = [], []
    for k in levels:
        dset = delta_k(pair, contact, k, budget)
        if ball is None:
            counts.append(len(dset))
            totals.append(pair.m**k)
        else:
            sel = ball.contains(dset.real_coordinates())
            counts.append(int(sel.sum()))
            gam = gamma_k(pair, k, budget)
            totals.append(int(ball.contains(gam.real_coordinates()).sum()))
    if any(c == 0 for c in counts):
        k_bad = levels[counts.index(0)]
        raise ValueError(f"no boundary points at level {k_bad}; ball misses the boundary")

    saturated = []
    while len(counts) > 2 and counts[0] == totals[0]:
        saturated.append(levels.pop(0))
        counts.pop(0)
        totals.pop(0)

    def fit(ls, cs):
        x = np.asarray(ls, float)
        y = np.log(cs)
        A = np.vstack([x, np.ones(len(x))]).T
        sol, *_ = np.linalg.lstsq(A, y, rcond=None)
        resid = y - A @ sol
        return float(sol[0]), resid

    slope, resid = fit(levels, counts)
    dropped = None
    if len(levels) >= 4:
        first = abs(resid[0])
        rest = np.abs(resid[1:]).mean()
        if rest > 0 and first > 1.5 * rest:
            dropped = levels[0]
            slope, resid = fit(levels[1:], counts[1:])
            levels, counts = levels[1:], counts[1:]
    return GrowthFit(
        rate=float(np.exp(slope)),
        levels=tuple(levels),
        counts=tuple(counts),
        residual=float(np.sqrt(np.mean(resid**2))) if len(resid) else 0.0,
        saturated_levels=tuple(saturated),
        dropped_level=dropped,
    )


@dataclass(frozen=True)
class BoxCountFit:
    dimension: float
    octaves: tuple[int, ...]
    counts: tuple[int, ...]
    residual: float


def box_counting_estimate(points: ScaledPointSet, pair: StandardPair) -> BoxCountFit:
    """Box-counting dimension of a planar point cloud.

    Dyadic cell sizes diameter/2^t starting at t=2; the ladder stops once the
    occupied-cell count exceeds a third of the points (from there the count
    saturates toward counting points, not structure). At least five ladder
    levels (four octaves) are required.
    """
    if pair.n != 2:
        raise ValueError("box counting is implemented for the plane only")
    if len(points) < 1000:
        raise ValueError("need at least 1000 points for a box-count estimate")
    coords = real_coordinates(pair, points.k, points.points)
    lo = coords.min(axis=0)
    diam = float((coords.max(axis=0) - lo).max())
    if diam <= 0:
        raise ValueError("point cloud is degenerate")
    octs, counts = [], []
    for t in range(2, 40):
        eps = diam / 2.0**t
        cells = np.unique(np.floor((coords - lo) / eps).astype(np.int64), axis=0)
        if len(cells) > len(points) / 3:
            break
        octs.append(t)
        counts.append(len(cells))
    if len(octs) < 5:
        raise ValueError("fewer than four usable octaves; increase the level")
    x = np.asarray(octs, float) * math.log(2.0)
    y = np.log(counts)
    A = np.vstack([x, np.ones(len(x))]).T
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ sol
    return BoxCountFit(
        dimension=float(sol[0]),
        octaves=tuple(octs),
        counts=tuple(counts),
        residual=float(np.sqrt(np.mean(resid**2))),
    )


def export_points(ps: ScaledPointSet, stream) -> None:
    """Write the scaled cloud: header line, then one point per line."""
    stream.write(f"k={ps.k} n={ps.pair.n} scaled=1\n")
    for row in ps.points:
        stream.write(" ".join(str(int(c)) for c in row) + "\n")
