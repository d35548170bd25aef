"""Matrix/digit-set pairs: validation, difference multisets, digit lattices
and reduction to a primitive pair."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import intmat
from .errors import InternalInvariantError, PairValidationError
from .intmat import Lattice, Matrix, Vector


@dataclass(frozen=True)
class StandardPair:
    """An expanding integer matrix together with a full digit set.

    Digits are stored sorted lexicographically and always contain the origin
    (a recorded translation normalizes them when needed), which pins down a
    unique representation for reports and fixtures.
    """

    M: Matrix
    digits: tuple[Vector, ...]
    name: str | None = None
    translation: Vector | None = None  # shift applied so that 0 is a digit

    @property
    def n(self) -> int:
        return len(self.M)

    @property
    def m(self) -> int:
        return abs(intmat.det(self.M))


@dataclass(frozen=True)
class DifferenceMultiset:
    """All ordered digit differences with their multiplicities."""

    counts: dict[Vector, int]

    def __getitem__(self, d) -> int:
        return self.counts.get(intmat.as_vector(d), 0)

    def support(self) -> tuple[Vector, ...]:
        return tuple(sorted(self.counts))

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass
class ValidationReport:
    integer_matrix: bool = True
    expanding: bool = False
    cardinality_match: bool = False
    coset_complete: bool = False
    primitive: bool = False
    reducible: bool = False  # standard relative to the digit lattice
    zero_digit: bool = False
    translation: Vector | None = None
    witnesses: dict = field(default_factory=dict)

    @property
    def standard(self) -> bool:
        """The four defining conditions of a standard pair."""
        return (
            self.integer_matrix
            and self.expanding
            and self.cardinality_match
            and self.coset_complete
        )

    @property
    def passed(self) -> bool:
        return self.standard and self.primitive


def normalize_digits(digits) -> tuple[tuple[Vector, ...], Vector | None]:
    """Sort digits; translate by the lexicographically smallest one if the
    origin is missing. Returns (digits, translation or None)."""
    digits = sorted(intmat.as_vector(r) for r in digits)
    zero = tuple([0] * len(digits[0]))
    translation = None
    if zero not in digits:
        base = digits[0]
        translation = tuple(-c for c in base)
        digits = sorted(tuple(c - b for c, b in zip(r, base)) for r in digits)
    return tuple(digits), translation


def make_pair(matrix, digits, name=None, require_valid=True) -> StandardPair:
    """Build a normalized StandardPair, validating unless told not to."""
    M = intmat.as_matrix(matrix)
    digs, translation = normalize_digits(digits)
    pair = StandardPair(M=M, digits=digs, name=name, translation=translation)
    if require_valid:
        report = validate(M, digs)
        if not report.standard:
            raise PairValidationError(
                "not a standard pair: " + _failure_summary(report), report
            )
    return pair


def _failure_summary(report: ValidationReport) -> str:
    bad = []
    if not report.expanding:
        bad.append("matrix is not expanding")
    if not report.cardinality_match:
        bad.append("digit count differs from |det M|")
    if not report.coset_complete:
        w = report.witnesses.get("congruent_digits")
        bad.append(f"digits are not a complete residue system (e.g. {w})")
    return "; ".join(bad) or "unknown"


def validate(M, digits) -> ValidationReport:
    """Check the defining conditions of a standard pair, exactly.

    Failures are reported with witnesses rather than raised; primitivity is
    also recorded so callers can tell whether reduction will be a no-op.
    """
    M = intmat.as_matrix(M)
    digs, translation = normalize_digits(digits)
    report = ValidationReport(translation=translation)
    report.zero_digit = True  # after normalization
    report.expanding = intmat.is_expanding(M)
    if not report.expanding:
        return report
    m = abs(intmat.det(M))
    report.cardinality_match = len(digs) == m and len(set(digs)) == m
    if not report.cardinality_match:
        report.witnesses["digit_count"] = (len(digs), m)
    report.coset_complete = True
    for i in range(len(digs)):
        for j in range(i + 1, len(digs)):
            if intmat.in_image(intmat.vec_sub(digs[i], digs[j]), M):
                report.coset_complete = False
                report.witnesses["congruent_digits"] = (digs[i], digs[j])
                break
        if not report.coset_complete:
            break
    if report.cardinality_match:
        pair = StandardPair(M=M, digits=digs)
        lattice = invariant_sublattice(pair)
        if report.standard:
            report.primitive = lattice.is_standard()
        # a pair whose digits form a full residue system of its own digit
        # lattice reduces to a standard pair even when the strict check fails
        if lattice.rank == len(M):
            ML = intmat.mat_mul(M, lattice.basis_matrix())
            report.reducible = not any(
                intmat.in_image(intmat.vec_sub(digs[i], digs[j]), ML)
                for i in range(len(digs))
                for j in range(i + 1, len(digs))
            )
    return report


def difference_multiset(pair: StandardPair) -> DifferenceMultiset:
    counts: dict[Vector, int] = {}
    for r1 in pair.digits:
        for r2 in pair.digits:
            d = intmat.vec_sub(r1, r2)
            counts[d] = counts.get(d, 0) + 1
    return DifferenceMultiset(counts)


def invariant_sublattice(pair: StandardPair) -> Lattice:
    """Smallest M-invariant lattice containing every digit difference.

    Iterates L -> hnf(L U M L) from the difference span; the index over the
    starting lattice can only shrink, so the chain stabilizes quickly.
    """
    diffs = [
        intmat.vec_sub(r1, r2)
        for r1 in pair.digits
        for r2 in pair.digits
        if r1 != r2
    ]
    if not diffs:
        return intmat.hnf([tuple([0] * pair.n)])
    lattice = intmat.hnf(diffs)
    for _ in range(64):
        extended = list(lattice.basis) + [
            intmat.mat_vec(pair.M, b) for b in lattice.basis
        ]
        nxt = intmat.hnf(extended)
        if nxt == lattice:
            return lattice
        lattice = nxt
    raise InternalInvariantError("digit lattice failed to stabilize")


def primitivize(pair: StandardPair) -> tuple[StandardPair, Matrix]:
    """Conjugate (M, R) to a primitive pair (B^-1 M B, B^-1 R).

    B is the canonical basis matrix of the digit lattice; the conjugated data
    is integral whenever the input is a standard pair. Identity transform
    (and the same pair object) when already primitive.
    """
    lattice = invariant_sublattice(pair)
    if lattice.rank != pair.n:
        raise PairValidationError("digit differences do not span full rank")
    B = lattice.basis_matrix()
    if lattice.is_standard():
        return pair, B
    detB = intmat.det(B)
    adjB = intmat.adjugate(B)

    def conj_vec(v):
        w = intmat.mat_vec(adjB, v)
        if any(c % detB for c in w):
            raise InternalInvariantError("conjugated digit is not integral")
        return tuple(c // detB for c in w)

    MB = intmat.mat_mul(pair.M, B)
    rows = [conj_vec(tuple(MB[i][j] for i in range(pair.n))) for j in range(pair.n)]
    M2 = tuple(tuple(rows[j][i] for j in range(pair.n)) for i in range(pair.n))
    digs2 = [conj_vec(r) for r in pair.digits]
    try:
        reduced = make_pair(M2, digs2, name=pair.name)
    except PairValidationError as exc:
        raise InternalInvariantError(f"reduced pair failed validation: {exc}")
    if not validate(reduced.M, reduced.digits).primitive:
        raise InternalInvariantError("reduction did not produce a primitive pair")
    return reduced, B
