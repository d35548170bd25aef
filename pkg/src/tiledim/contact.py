"""Contact set S, transition matrix T and their negation-symmetric quotient.

S collects the integer vectors realizable as differences of two attractor
points. A vector belongs to S exactly when it starts an infinite walk in the
finite graph x -> Mx - d over digit differences d, which is decided by cycle
reachability on that graph.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import intmat, pair as pair_mod
from .errors import InternalInvariantError
from .intmat import Vector
from .pair import StandardPair


@dataclass(frozen=True)
class ContactSystem:
    """Contact set with its transition matrix and folded quotient.

    ``S`` is sorted lexicographically; ``splus`` keeps the origin first and
    then the lexicographically larger member of each {x, -x} pair, sorted.
    Rows/columns of ``T`` and ``tplus`` follow those orders.
    """

    pair: StandardPair
    S: tuple[Vector, ...]
    T: tuple[tuple[int, ...], ...]
    splus: tuple[Vector, ...]
    tplus: tuple[tuple[int, ...], ...]


def candidate_ball(pair: StandardPair) -> list[Vector]:
    """Integer points z with |z|^2 <= ceil((2 rho)^2), rho the attractor
    radius bound; comparisons stay exact."""
    rho = intmat.attractor_radius(pair.M, pair.digits)
    r2 = 4 * rho * rho
    r2int = math.ceil(r2) if isinstance(r2, Fraction) else int(r2)
    bound = math.isqrt(r2int)
    out = []

    def rec(prefix, budget):
        if len(prefix) == pair.n:
            out.append(tuple(prefix))
            return
        c = math.isqrt(budget)
        for v in range(-c, c + 1):
            rec(prefix + [v], budget - v * v)

    rec([], r2int)
    if bound >= 0 and not out:
        raise InternalInvariantError("empty candidate ball")
    return out


def compute_S(p: StandardPair) -> tuple[Vector, ...]:
    """Exact contact set, lexicographically sorted.

    Builds the digit-difference walk graph on the candidate ball and keeps
    the vertices from which some infinite walk exists: those reaching a
    cycle. Cycles are found with an iterative Tarjan SCC pass; a component
    is cyclic when it has more than one vertex or a self-loop.
    """
    diffs = pair_mod.difference_multiset(p).support()
    cands = candidate_ball(p)
    index = {v: i for i, v in enumerate(cands)}
    succ: list[list[int]] = []
    for v in cands:
        Mv = intmat.mat_vec(p.M, v)
        row = []
        for d in diffs:
            t = index.get(intmat.vec_sub(Mv, d))
            if t is not None:
                row.append(t)
        succ.append(row)

    cyclic = _cycle_vertices(succ)
    keep = _reaches(succ, cyclic)
    S = sorted(cands[i] for i in range(len(cands)) if keep[i])
    sset = set(S)
    zero = tuple([0] * p.n)
    if zero not in sset or any(intmat.vec_neg(x) not in sset for x in S):
        raise InternalInvariantError("contact set lost its symmetry")
    return tuple(S)


def _cycle_vertices(succ) -> list[bool]:
    """Vertices lying on some cycle (Tarjan, iterative)."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    cyclic = [False] * n
    counter = itertools.count()

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = next(counter)
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for k in range(pi, len(succ[v])):
                w = succ[v][k]
                if index[w] == -1:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) > 1 or v in succ[v]:
                    for w in comp:
                        cyclic[w] = True
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return cyclic


def _reaches(succ, targets: list[bool]) -> list[bool]:
    """Vertices with a path into the target set (reverse BFS)."""
    n = len(succ)
    pred: list[list[int]] = [[] for _ in range(n)]
    for v, row in enumerate(succ):
        for w in row:
            pred[w].append(v)
    seen = list(targets)
    queue = [v for v in range(n) if targets[v]]
    while queue:
        v = queue.pop()
        for u in pred[v]:
            if not seen[u]:
                seen[u] = True
                queue.append(u)
    return seen


def transition_matrix(p: StandardPair, S) -> tuple[tuple[int, ...], ...]:
    """T[i][j] = multiplicity of i - Mj among digit differences."""
    mu = pair_mod.difference_multiset(p)
    rows = []
    for i in S:
        rows.append(
            tuple(mu[intmat.vec_sub(i, intmat.mat_vec(p.M, j))] for j in S)
        )
    return tuple(rows)


def symmetric_quotient(T, S):
    """Fold T onto negation-symmetric coordinates.

    Returns (splus, tplus) with the origin first; entry (i, j) is
    T[i][j] + T[i][-j] for j != 0 and T[i][0] in the origin column.
    """
    S = list(S)
    pos = {v: k for k, v in enumerate(S)}
    zero = tuple([0] * len(S[0]))
    for i in S:
        for j in S:
            ni, nj = pos.get(intmat.vec_neg(i)), pos.get(intmat.vec_neg(j))
            if ni is None or nj is None or T[pos[i]][pos[j]] != T[ni][nj]:
                raise InternalInvariantError("transition matrix is not symmetric")
    splus = [zero] + sorted(v for v in S if v > intmat.vec_neg(v))
    tplus = []
    for i in splus:
        row = []
        for j in splus:
            v = T[pos[i]][pos[j]]
            if j != zero:
                v += T[pos[i]][pos[intmat.vec_neg(j)]]
            row.append(v)
        tplus.append(tuple(row))
    return tuple(splus), tuple(tplus)


def contact_system(p: StandardPair) -> ContactSystem:
    S = compute_S(p)
    T = transition_matrix(p, S)
    splus, tplus = symmetric_quotient(T, S)
    return ContactSystem(pair=p, S=S, T=T, splus=splus, tplus=tplus)
