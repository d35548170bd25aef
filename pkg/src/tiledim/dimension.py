"""Boundary-dimension statements derived from spectral data.

The two-sided bound n + (ln l - ln m)/ln m_- <= dim <= ln l / ln m_- holds
for the leading special eigenvalue l; when every eigenvalue of the base
matrix shares one modulus the bounds coincide and the value n ln l / ln m is
exact. Jordan block sizes then classify the Hausdorff measure at that
dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .spectrum import SpectralReport

EQ_TOL = 1e-9


@dataclass(frozen=True)
class LocalDimension:
    eigenvalue: float
    lower: float
    upper: float
    exact: float | None


@dataclass(frozen=True)
class MeasureClassification:
    verdict: str  # finite | positive | infinite | positive_and_finite | inconclusive
    lhs: float  # d_lambda_p - 1
    rhs: float  # (n - beta) (d_M - 1)
    condition_simple: bool
    condition_geq: bool
    condition_strict: bool


@dataclass
class DimensionReport:
    lower: float | None
    upper: float | None
    exact: float | None
    beta_lower: float | None
    beta_upper: float | None
    clamped: bool
    local_dimensions: list[LocalDimension]
    measure: MeasureClassification | None
    tile_diagnostic: bool
    status: str = "ok"
    notes: list[str] = field(default_factory=list)


def dimension_bounds(lambda_p: float, m: int, m_minus: float, n: int):
    """(lower, upper, clamped) for the boundary dimension.

    Values drifting outside [n-1, n] are clamped (the boundary of a tile of
    positive measure cannot do better), with the flag reporting it.
    """
    if lambda_p < 1 - EQ_TOL or lambda_p >= m:
        raise ValueError(f"special eigenvalue {lambda_p} outside [1, {m})")
    if m_minus <= 1:
        raise ValueError("m_minus must exceed 1 for an expanding matrix")
    upper = math.log(lambda_p) / math.log(m_minus)
    lower = n + (math.log(lambda_p) - math.log(m)) / math.log(m_minus)
    clamped = False
    if lower < n - 1:
        lower, clamped = float(n - 1), True
    if upper > n:
        upper, clamped = float(n), True
    if lower > upper:  # only by float dust when bounds coincide
        lower = upper = (lower + upper) / 2.0
    return lower, upper, clamped


def exact_dimension_if_equal_modulus(lambda_p: float, m: int, n: int) -> float:
    return n * math.log(lambda_p) / math.log(m)


def local_dimension_set(specials, m: int, m_minus: float, n: int,
                        equal_modulus: bool) -> list[LocalDimension]:
    """Per-eigenvalue dimension bounds; which one a given ball sees is an
    empirical question, so all of them are reported."""
    out = []
    for lam in specials:
        lo, hi, _ = dimension_bounds(lam, m, m_minus, n)
        exact = exact_dimension_if_equal_modulus(lam, m, n) if equal_modulus else None
        out.append(LocalDimension(eigenvalue=lam, lower=lo, upper=hi, exact=exact))
    return out


def measure_classification(d_M: int, d_lambda_p: int, n: int, beta: float,
                           tol: float = EQ_TOL) -> MeasureClassification:
    """Hausdorff-measure verdict at dimension beta (equal-modulus case only).

    d_M = d_lambda_p = 1 gives a positive and finite measure (an s-set);
    d_lambda_p - 1 >= (n - beta)(d_M - 1) with equality leaves it positive
    with finiteness open; a strict inequality forces infinite measure.
    """
    lhs = float(d_lambda_p - 1)
    rhs = (n - beta) * (d_M - 1)
    simple = d_M == 1 and d_lambda_p == 1
    geq = lhs >= rhs - tol
    strict = lhs > rhs + tol
    if simple:
        verdict = "positive_and_finite"
    elif strict:
        verdict = "infinite"
    elif geq:
        verdict = "positive"
    else:
        verdict = "inconclusive"
    return MeasureClassification(
        verdict=verdict,
        lhs=lhs,
        rhs=rhs,
        condition_simple=simple,
        condition_geq=geq,
        condition_strict=strict,
    )


def dimension_report(spectral: SpectralReport, n: int, m: int) -> DimensionReport:
    if not spectral.special:
        return DimensionReport(
            lower=None, upper=None, exact=None, beta_lower=None, beta_upper=None,
            clamped=False, local_dimensions=[], measure=None,
            tile_diagnostic=spectral.m_simple, status="no_special_eigenvalue",
            notes=["no quotient eigenvalue lies in the special interval"],
        )
    lam = spectral.lambda_p
    lower, upper, clamped = dimension_bounds(lam, m, spectral.m_minus, n)
    exact = None
    measure = None
    notes = []
    if spectral.equal_modulus:
        exact = exact_dimension_if_equal_modulus(lam, m, n)
        measure = measure_classification(
            spectral.d_M, spectral.d_lambda_p, n, exact
        )
        if measure.verdict == "positive":
            notes.append("measure is positive; finiteness is not decided")
    else:
        notes.append("bounds only: base-matrix eigenvalues differ in modulus")
    return DimensionReport(
        lower=lower,
        upper=upper,
        exact=exact,
        beta_lower=lower,
        beta_upper=upper,
        clamped=clamped,
        local_dimensions=local_dimension_set(
            spectral.special, m, spectral.m_minus, n, spectral.equal_modulus
        ),
        measure=measure,
        tile_diagnostic=spectral.m_simple,
        notes=notes,
    )
