"""Eigenstructure of the transition quotient and of the base matrix.

Strategy: characteristic polynomials are exact; integer roots are split off
exactly (square-free decomposition plus verified deflation) and only the
irrational remainder goes to a numeric root finder, whose output is polished
by Newton steps against the exact coefficients. Interval decisions about
special eigenvalues therefore compare integers exactly and floats within an
explicit tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import intmat
from .contact import ContactSystem
from .errors import InternalInvariantError
from .intmat import IntPolynomial, Matrix
from .pair import StandardPair

SPECIAL_TOL = 1e-9
ROOT_TOL = 1e-12
RANK_TOL = 1e-8


@dataclass(frozen=True)
class Eigen:
    value: complex
    multiplicity: int
    exact: int | None = None  # set when the eigenvalue is a known integer

    @property
    def is_real(self) -> bool:
        return self.exact is not None or abs(self.value.imag) <= SPECIAL_TOL


@dataclass
class SpectralReport:
    tplus_char_poly: IntPolynomial
    eigenvalues: list[Eigen]
    m_minus: float
    equal_modulus: bool
    special: list[float]
    special_boundary: list[bool]
    lambda_p: float | None
    d_M: int
    d_lambda_p: int | None
    m_simple: bool
    status: str = "ok"  # or "no_special_eigenvalue"
    warnings: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# polynomial factor machinery (Fractions internally, integer results)


def _fpoly(p) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in p)


def _ftrim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def _fdivmod(a, b):
    a = list(a)
    b = _ftrim(b)
    if b == (Fraction(0),) or all(c == 0 for c in b):
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / b[-1]
        q[k] = c
        if c:
            for i, bc in enumerate(b):
                a[k + i] -= c * bc
    return _ftrim(q), _ftrim(a)


def _fgcd_monic(a, b):
    a, b = _ftrim(a), _ftrim(b)
    while any(c != 0 for c in b):
        _, r = _fdivmod(a, b)
        a, b = b, r
    lead = a[-1]
    if lead == 0:
        return (Fraction(1),)
    return tuple(c / lead for c in a)


def _to_int_poly(p) -> IntPolynomial:
    out = []
    for c in p:
        f = Fraction(c)
        if f.denominator != 1:
            raise InternalInvariantError("expected integer polynomial")
        out.append(f.numerator)
    return intmat.poly_trim(out)


def square_free_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun decomposition: returns [(factor, exponent)] with square-free monic
    integer factors whose powers multiply back to the monic input."""
    f = _fpoly(p)
    lead = f[-1]
    f = tuple(c / lead for c in f)
    if len(f) <= 1:
        return []
    df = _ftrim(tuple((i + 1) * c for i, c in enumerate(f[1:])))
    g = _fgcd_monic(f, df)
    w, _ = _fdivmod(f, g)
    y, _ = _fdivmod(df, g)
    dw = _ftrim(tuple((i + 1) * c for i, c in enumerate(w[1:]))) if len(w) > 1 else (Fraction(0),)
    z = _ftrim(tuple(a - b for a, b in _zip_pad(y, dw)))
    out = []
    i = 1
    while len(w) > 1:
        gi = _fgcd_monic(w, z)
        if len(gi) > 1:
            out.append((_to_int_poly(gi), i))
        w, _ = _fdivmod(w, gi)
        y, _ = _fdivmod(z, gi)
        dw = _ftrim(tuple((k + 1) * c for k, c in enumerate(w[1:]))) if len(w) > 1 else (Fraction(0),)
        z = _ftrim(tuple(a - b for a, b in _zip_pad(y, dw)))
        i += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (Fraction(0),) * (n - len(a))
    b = tuple(b) + (Fraction(0),) * (n - len(b))
    return zip(a, b)


def _newton_polish(p: IntPolynomial, z: complex, steps: int = 60) -> complex:
    dp = intmat.poly_derivative(p)
    for _ in range(steps):
        fz = intmat.poly_eval(p, z)
        dz = intmat.poly_eval(dp, z)
        if dz == 0:
            break
        step = fz / dz
        z = z - step
        if abs(step) < 1e-16 * max(1.0, abs(z)):
            break
    return z


def poly_roots(p: IntPolynomial) -> list[Eigen]:
    """All roots of a monic integer polynomial with multiplicities.

    Multiplicity structure comes from the exact square-free decomposition;
    integer roots are confirmed by exact evaluation, the rest numerically to
    about 1e-12 absolute.
    """
    p = intmat.poly_trim(p)
    roots: list[Eigen] = []
    for factor, mult in square_free_decomposition(p):
        q = factor
        # split off exact integer roots, guided by numeric guesses
        while len(q) > 1:
            guesses = np.roots([float(c) for c in reversed(q)]) if len(q) > 1 else []
            hit = None
            for g in guesses:
                if abs(g.imag) < 1e-6:
                    k = round(g.real)
                    if intmat.poly_eval(q, int(k)) == 0:
                        hit = int(k)
                        break
            if hit is None:
                break
            roots.append(Eigen(complex(hit), mult, exact=hit))
            q, rem = intmat.poly_deflate(q, hit)
            if rem != 0:
                raise InternalInvariantError("exact deflation failed")
        if len(q) > 1:
            for g in np.roots([float(c) for c in reversed(q)]):
                z = _newton_polish(q, complex(g))
                roots.append(Eigen(z, mult))
    roots.sort(key=lambda e: (-round(e.value.real, 9), -round(e.value.imag, 9)))
    total = sum(e.multiplicity for e in roots)
    if total != len(p) - 1:
        raise InternalInvariantError("lost roots during factorization")
    return roots


def eigenvalues(A) -> list[Eigen]:
    """Eigenvalues with algebraic multiplicities of an integer matrix."""
    return poly_roots(intmat.char_poly(intmat.as_matrix(A)))


def m_minus(M: Matrix) -> tuple[float, bool]:
    """Smallest eigenvalue modulus of M and the equal-modulus flag.

    In the equal-modulus case the value is reported as |det M|^(1/n), which
    is exact up to floating evaluation of the root.
    """
    eigs = eigenvalues(M)
    mods = [abs(e.value) for e in eigs]
    lo, hi = min(mods), max(mods)
    equal = hi / lo < 1 + SPECIAL_TOL
    if equal:
        n = len(M)
        return float(abs(intmat.det(M))) ** (1.0 / n), True
    return lo, False


def special_eigenvalues(
    tplus_eigs: list[Eigen], mminus: float, n: int, m: int, tol: float = SPECIAL_TOL
) -> tuple[list[float], list[bool]]:
    """Real eigenvalues of the quotient lying in [m_-^(n-1), m).

    Integer eigenvalues are compared against the integer endpoint m exactly;
    everything else uses the tolerance. The parallel boolean list flags
    values within tolerance of either endpoint.
    """
    lo = mminus ** (n - 1)
    chosen: list[float] = []
    boundary: list[bool] = []
    for e in tplus_eigs:
        if not e.is_real:
            continue
        if e.exact is not None:
            lam = float(e.exact)
            inside = (lam >= lo - tol) and (e.exact < m)
        else:
            lam = e.value.real
            inside = (lam >= lo - tol) and (lam < m - tol)
        if inside:
            chosen.append(lam)
            boundary.append(abs(lam - lo) <= tol or abs(lam - m) <= tol)
    order = sorted(range(len(chosen)), key=lambda i: -chosen[i])
    return [chosen[i] for i in order], [boundary[i] for i in order]


# ---------------------------------------------------------------------------
# minimal polynomial and Jordan data


def minimal_polynomial(A) -> IntPolynomial:
    """Exact minimal polynomial: per-basis-vector Krylov annihilators,
    combined by polynomial lcm over the rationals."""
    A = intmat.as_matrix(A)
    n = len(A)
    result = (Fraction(1),)
    for i in range(n):
        e = [Fraction(int(j == i)) for j in range(n)]
        if _apply_poly_vec(result, A, e) == [0] * n:
            continue
        p_i = _krylov_annihilator(A, e)
        g = _fgcd_monic(result, p_i)
        quot, _ = _fdivmod(p_i, g)
        result = _ftrim(_fmul(result, quot))
    return _to_int_poly(result)


def _fmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _apply_poly_vec(p, A, v):
    acc = [Fraction(0)] * len(v)
    for c in reversed(p):
        acc = [sum(A[i][j] * acc[j] for j in range(len(v))) + c * v[i] for i in range(len(v))]
    return [x for x in acc] if any(acc) else [0] * len(v)


def _krylov_annihilator(A, v):
    """Smallest monic p with p(A)v = 0, by incremental echelon reduction."""
    n = len(v)
    basis: list[tuple[list[Fraction], list[Fraction]]] = []  # (vector, coeffs)
    cur = list(v)
    coeffs = [Fraction(1)]
    while True:
        vec = list(cur)
        rep = list(coeffs) + [Fraction(0)] * (n + 1 - len(coeffs))
        for bvec, brep in basis:
            piv = next((k for k, c in enumerate(bvec) if c != 0), None)
            if piv is not None and vec[piv] != 0:
                f = vec[piv] / bvec[piv]
                vec = [a - f * b for a, b in zip(vec, bvec)]
                rep = [a - f * b for a, b in zip(rep, brep)]
        if all(c == 0 for c in vec):
            poly = _ftrim(rep)
            lead = poly[-1]
            return tuple(c / lead for c in poly)
        basis.append((vec, rep))
        cur = [sum(A[i][j] * cur[j] for j in range(n)) for i in range(n)]
        coeffs = [Fraction(0)] + coeffs
        if len(coeffs) > n + 1:
            raise InternalInvariantError("Krylov chain exceeded dimension")


def jordan_block_size(A, lam, rank_tol: float = RANK_TOL) -> int:
    """Largest Jordan block size of A at the eigenvalue lam.

    Integer lam: exponent of (x - lam) in the exact minimal polynomial.
    Otherwise: first k at which rank((A - lam I)^k) stabilizes, with ranks
    from singular values thresholded at rank_tol * ||A||.
    """
    A = intmat.as_matrix(A)
    n = len(A)
    if isinstance(lam, int) or (isinstance(lam, float) and lam == int(lam)):
        lam_i = int(lam)
        mp = minimal_polynomial(A)
        if intmat.poly_eval(mp, lam_i) != 0:
            raise ValueError(f"{lam} is not an eigenvalue")
        d = 0
        while True:
            q, rem = intmat.poly_deflate(mp, lam_i)
            if rem != 0:
                break
            mp = q
            d += 1
        return d
    Af = np.array(A, dtype=float)
    B = Af - complex(lam) * np.eye(n)
    thresh = rank_tol * max(1.0, float(np.linalg.norm(Af, 2)))

    def rank(X):
        sv = np.linalg.svd(X, compute_uv=False)
        return int(np.sum(sv > thresh))

    prev = rank(B)
    if prev == n:
        raise ValueError(f"{lam} is not an eigenvalue")
    P = B
    for k in range(1, n + 1):
        P = P @ B
        r = rank(P)
        if r == prev:
            return k
        prev = r
    return n


def largest_jordan_block_at_modulus(M: Matrix, modulus: float) -> int:
    """Max Jordan block size over eigenvalues of M with |lam| ~ modulus."""
    best = 1
    seen_exact = set()
    for e in eigenvalues(M):
        if abs(abs(e.value) - modulus) > SPECIAL_TOL * max(1.0, modulus):
            continue
        if e.multiplicity == 1:
            continue  # simple eigenvalue, block size 1
        if e.exact is not None:
            if e.exact in seen_exact:
                continue
            seen_exact.add(e.exact)
            best = max(best, jordan_block_size(M, e.exact))
        elif e.value.imag >= 0:  # one of each conjugate pair
            best = max(best, jordan_block_size(M, e.value))
    return best


def m_simple(T, m: int, tol: float = SPECIAL_TOL) -> bool:
    """Tile diagnostic: m is a simple eigenvalue of T and strictly dominant."""
    p = intmat.char_poly(intmat.as_matrix(T))
    q, rem = intmat.poly_deflate(p, m)
    if rem != 0:
        return False
    if intmat.poly_eval(q, m) == 0:
        return False
    others = poly_roots(q)
    return all(abs(e.value) < m - tol for e in others)


# ---------------------------------------------------------------------------


def spectral_report(cs: ContactSystem, rank_tol: float = RANK_TOL,
                    tol: float = SPECIAL_TOL) -> SpectralReport:
    p: StandardPair = cs.pair
    tplus_poly = intmat.char_poly(cs.tplus)
    eigs = poly_roots(tplus_poly)
    mm, equal = m_minus(p.M)
    special, boundary = special_eigenvalues(eigs, mm, p.n, p.m, tol)
    warnings = []
    if any(boundary):
        warnings.append("boundary_case: a special eigenvalue sits within "
                        "tolerance of an interval endpoint")
    d_M = largest_jordan_block_at_modulus(p.M, mm)
    lambda_p = special[0] if special else None
    d_lp = None
    if lambda_p is not None:
        exact = next(
            (e.exact for e in eigs
             if e.exact is not None and float(e.exact) == lambda_p),
            None,
        )
        lam_mult = next(
            (e.multiplicity for e in eigs
             if abs(e.value - lambda_p) <= 10 * tol and e.is_real),
            1,
        )
        if lam_mult == 1:
            d_lp = 1
        elif exact is not None:
            d_lp = jordan_block_size(cs.tplus, exact)
        else:
            d_lp = jordan_block_size(cs.tplus, complex(lambda_p), rank_tol)
    return SpectralReport(
        tplus_char_poly=tplus_poly,
        eigenvalues=eigs,
        m_minus=mm,
        equal_modulus=equal,
        special=special,
        special_boundary=boundary,
        lambda_p=lambda_p,
        d_M=d_M,
        d_lambda_p=d_lp,
        m_simple=m_simple(cs.T, p.m, tol),
        status="ok" if special else "no_special_eigenvalue",
        warnings=warnings,
    )
