"""Exact integer linear algebra kernel.

Determinants, adjugates, characteristic polynomials, Hermite normal form,
image-membership tests and an exact expansion (all eigenvalues outside the
unit circle) test. Everything runs on Python's arbitrary-precision integers,
with Fractions where inverses appear; no floating point is used for any
decision made here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalInvariantError

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]  # row-major
IntPolynomial = tuple[int, ...]  # coefficients, ascending degree


def _as_int(c) -> int:
    i = int(c)
    if i != c:
        raise ValueError(f"non-integer entry {c!r}")
    return i


def as_vector(v) -> Vector:
    return tuple(_as_int(c) for c in v)


def as_matrix(rows) -> Matrix:
    M = tuple(tuple(_as_int(c) for c in row) for row in rows)
    n = len(M)
    if n == 0 or any(len(row) != n for row in M):
        raise ValueError("matrix must be square and non-empty")
    return M


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_vec(M: Matrix, v: Vector) -> Vector:
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M)))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    Bt = tuple(zip(*B))
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A
    )


def mat_pow(M: Matrix, k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative power of an integer matrix")
    R = identity(len(M))
    for _ in range(k):
        R = mat_mul(R, M)
    return R


def vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vec_neg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def det(M: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    a = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def adjugate(M: Matrix) -> Matrix:
    """Adjugate A with M @ A == det(M) * I, exactly."""
    n = len(M)
    if n == 1:
        return ((1,),)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(
                tuple(M[r][c] for c in range(n) if c != j)
                for r in range(n)
                if r != i
            )
            cof[i][j] = (-1) ** (i + j) * det(minor)
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))  # transpose


def char_poly(M: Matrix) -> IntPolynomial:
    """Monic characteristic polynomial det(xI - M), ascending coefficients.

    Faddeev-LeVerrier recursion; every division is exact over the integers.
    """
    n = len(M)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    Mk = identity(n)
    for k in range(1, n + 1):
        Mk = mat_mul(M, Mk)
        tr = sum(Mk[i][i] for i in range(n))
        if tr % k != 0:
            raise InternalInvariantError("non-exact division in char_poly")
        c = -tr // k
        coeffs[n - k] = c
        Mk = tuple(
            tuple(Mk[i][j] + (c if i == j else 0) for j in range(n)) for i in range(n)
        )
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# polynomial helpers (integer coefficients, ascending order)


def poly_trim(p) -> tuple:
    p = tuple(p)
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def poly_eval(p, x):
    acc = 0 * x if not isinstance(x, (int, Fraction)) else 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_derivative(p):
    if len(p) <= 1:
        return (0,)
    return tuple(i * c for i, c in enumerate(p))[1:]


def poly_deflate(p: IntPolynomial, root: int) -> tuple[IntPolynomial, int]:
    """Synthetic division by (x - root); returns (quotient, remainder)."""
    q = []
    acc = 0
    for c in reversed(p):
        acc = acc * root + c
        q.append(acc)
    rem = q.pop()
    q = [v for v in reversed(q)]
    return poly_trim(q) if q else (0,), rem


# ---------------------------------------------------------------------------
# Hermite normal form


@dataclass(frozen=True)
class Lattice:
    """Integer lattice given by a canonical basis.

    ``basis`` holds the basis vectors as columns of an upper-triangular-shaped
    matrix: pivot rows strictly increase from left to right, each pivot is
    positive, entries in a pivot's row to its right are reduced modulo the
    pivot, and entries below a pivot are zero. Two Lattice values describe the
    same lattice exactly when they are equal.
    """

    n: int
    basis: tuple[Vector, ...]  # columns

    @property
    def rank(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> Matrix:
        """Square basis matrix (columns = basis); full rank only."""
        if self.rank != self.n:
            raise ValueError("lattice is not full rank")
        return tuple(tuple(col[i] for col in self.basis) for i in range(self.n))

    def is_standard(self) -> bool:
        return self.rank == self.n and all(
            col[i] == (1 if i == j else 0)
            for j, col in enumerate(self.basis)
            for i in range(self.n)
        )


def _pivot_row(col) -> int:
    for i in range(len(col) - 1, -1, -1):
        if col[i] != 0:
            return i
    return -1


def hnf(generators) -> Lattice:
    """Canonical Hermite-form basis of the integer span of ``generators``.

    Works by unimodular column operations: rows are cleared from the bottom
    up, so each surviving column keeps its lowest nonzero entry as the pivot;
    a final reduction pass makes every entry to the right of a pivot lie in
    [0, pivot). Order of the input vectors never affects the result.
    """
    gens = [list(as_vector(g)) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise ValueError("generators must share one ambient dimension")

    active = [g for g in gens if any(g)]
    finished: list[tuple[int, list[int]]] = []  # (pivot_row, column)
    for row in range(n - 1, -1, -1):
        carriers = [c for c in active if c[row] != 0]
        if not carriers:
            continue
        acc = carriers[0]
        for other in carriers[1:]:
            g, u, v = _xgcd(acc[row], other[row])
            a_r, o_r = acc[row], other[row]
            new_acc = [u * a + v * b for a, b in zip(acc, other)]
            new_other = [
                (a_r // g) * b - (o_r // g) * a for a, b in zip(acc, other)
            ]
            acc[:], other[:] = new_acc, new_other
        if acc[row] < 0:
            acc[:] = [-x for x in acc]
        active.remove(acc)
        active = [c for c in active if any(c)]
        finished.append((row, acc))

    finished.sort(key=lambda rc: rc[0])
    # reduce rightward entries against each pivot, lowest pivot row last
    for idx in range(len(finished) - 1, -1, -1):
        row, col = finished[idx]
        p = col[row]
        for jdx in range(idx + 1, len(finished)):
            other = finished[jdx][1]
            q = other[row] // p
            if q:
                for i in range(n):
                    other[i] -= q * col[i]
    return Lattice(n=n, basis=tuple(tuple(col) for _, col in finished))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with u*a + v*b == g == gcd(a, b), g >= 0 for a,b not both 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def in_image(v: Vector, M: Matrix) -> bool:
    """Exact test for v in M Z^n via adj(M) v == 0 (mod det M)."""
    d = det(M)
    if d == 0:
        raise ValueError("matrix is singular")
    w = mat_vec(adjugate(M), as_vector(v))
    d = abs(d)
    return all(c % d == 0 for c in w)


# ---------------------------------------------------------------------------
# expansion test


def is_expanding(M: Matrix) -> bool:
    """True iff every eigenvalue of M lies strictly outside the unit circle.

    Decided exactly: the reversed characteristic polynomial must be Schur
    stable, which is checked through the bilinear map z -> (1+w)/(1-w) and a
    strict Routh-Hurwitz test over the rationals. Any root on the unit circle
    is rejected deterministically.
    """
    p = char_poly(M)
    n = len(M)
    if abs(p[0]) <= 1:  # |det M| <= 1 cannot be expanding
        return False
    rev = tuple(reversed(p))
    if poly_eval(rev, 1) == 0 or poly_eval(rev, -1) == 0:
        return False
    # Q(w) = sum_j rev[j] (1+w)^j (1-w)^(n-j)
    q = [0] * (n + 1)
    for j, c in enumerate(rev):
        if c == 0:
            continue
        term = poly_mul(_binom_pow(1, j), _binom_pow(-1, n - j))
        for i, t in enumerate(term):
            q[i] += c * t
    q = list(poly_trim(q))
    if len(q) != n + 1:
        return False  # degree drop: root at z = -1
    if q[-1] < 0:
        q = [-c for c in q]
    if any(c <= 0 for c in q):
        return False
    return _routh_strict(q)


def _binom_pow(sign: int, k: int) -> tuple:
    """(1 + sign*w)^k as ascending integer coefficients."""
    out = [math.comb(k, i) * (sign**i) for i in range(k + 1)]
    return tuple(out)


def _routh_strict(asc: list) -> bool:
    """Strict Routh-Hurwitz test; expects ascending positive coefficients."""
    desc = [Fraction(c) for c in reversed(asc)]
    row0 = desc[0::2]
    row1 = desc[1::2]
    while len(row0) > 1 or row1:
        if not row1 or row1[0] <= 0:
            return False
        width = len(row0) - 1
        nxt = []
        for k in range(width):
            a = row0[k + 1] if k + 1 < len(row0) else Fraction(0)
            b = row1[k + 1] if k + 1 < len(row1) else Fraction(0)
            nxt.append((row1[0] * a - row0[0] * b) / row1[0])
        if not nxt:
            break
        row0, row1 = row1, nxt
    return row0[0] > 0


# ---------------------------------------------------------------------------
# attractor radius bound


def sqrt_upper(f: Fraction, scale: int = 10**12) -> Fraction:
    """Rational upper bound on sqrt(f), tight to about 1/scale."""
    if f < 0:
        raise ValueError("negative radicand")
    num = math.isqrt(f.numerator * f.denominator * scale * scale) + 1
    return Fraction(num, f.denominator * scale)


def attractor_radius(M: Matrix, digits) -> Fraction:
    """Upper bound on sup |x| over the attractor generated by (M, digits).

    Sums operator-norm bounds (via Frobenius norms of the exact rational
    inverse powers) against the largest digit length, closing with a
    geometric tail once the inverse power has norm at most 1/2.
    """
    if not is_expanding(M):
        raise ValueError("matrix is not expanding")
    digits = [as_vector(r) for r in digits]
    maxr2 = max((sum(c * c for c in r) for r in digits), default=0)
    if maxr2 == 0:
        return Fraction(0)
    n = len(M)
    d = det(M)
    adj = adjugate(M)
    Minv = tuple(tuple(Fraction(adj[i][j], d) for j in range(n)) for i in range(n))

    power = Minv
    partial = Fraction(0)
    q = None
    for _ in range(512):
        fro2 = sum(e * e for row in power for e in row)
        fro_up = sqrt_upper(fro2)
        partial += fro_up
        if fro2 <= Fraction(1, 4):
            q = fro_up
            break
        power = tuple(
            tuple(sum(power[i][k] * Minv[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )
    if q is None:
        raise InternalInvariantError("inverse powers failed to contract")
    maxr_up = sqrt_upper(Fraction(maxr2))
    return maxr_up * partial / (1 - q)
