"""Command-line front end.

Subcommands parse a JSON pair file, run the pipeline (validate, reduce to a
primitive pair, contact system, spectrum, dimension) and emit reports that
are byte-stable for a fixed input: keys are sorted and every float is
rounded to 12 significant digits at serialization time. Exit codes: 0 ok,
2 malformed input file, 3 validation failure, 4 point budget exceeded,
5 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import contact, dimension, geometry, pair as pair_mod, render, spectrum
from .errors import (
    BudgetExceededError,
    InternalInvariantError,
    PairValidationError,
    SpecFileError,
    TiledimError,
)
from .geometry import Ball
from .pair import StandardPair

SCHEMA = "tiledim-report-v1"


# ---------------------------------------------------------------------------
# input files


def _load_spec(path) -> tuple[StandardPair, list[str]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SpecFileError(f"{path}: {exc}")
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
    if not isinstance(raw, dict):
        raise SpecFileError(f"{path}: top level must be an object")
    for key in ("n", "matrix", "digits"):
        if key not in raw:
            raise SpecFileError(f"{path}: missing field '{key}'")
    n = raw["n"]
    if not isinstance(n, int) or n < 1:
        raise SpecFileError(f"{path}: field 'n' must be a positive integer")
    matrix = raw["matrix"]
    if (
        not isinstance(matrix, list)
        or len(matrix) != n
        or any(not isinstance(row, list) or len(row) != n for row in matrix)
        or any(not isinstance(c, int) for row in matrix for c in row)
    ):
        raise SpecFileError(f"{path}: field 'matrix' must be {n} rows of {n} integers")
    digits = raw["digits"]
    if (
        not isinstance(digits, list)
        or not digits
        or any(not isinstance(d, list) or len(d) != n for d in digits)
        or any(not isinstance(c, int) for d in digits for c in d)
    ):
        raise SpecFileError(f"{path}: field 'digits' must be integer {n}-vectors")
    warnings = []
    seen, unique = set(), []
    for d in digits:
        t = tuple(d)
        if t in seen:
            warnings.append(f"duplicate digit {t} ignored")
        else:
            seen.add(t)
            unique.append(t)
    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        raise SpecFileError(f"{path}: field 'name' must be a string")
    p = pair_mod.make_pair(matrix, unique, name=name)
    return p, warnings


def parse_spec(path) -> StandardPair:
    """Parse and validate a pair file; raises on any defect."""
    return _load_spec(path)[0]


def parse_ball(text: str, n: int) -> Ball:
    parts = text.split(",")
    if len(parts) != n + 1:
        raise SpecFileError(
            f"--ball needs {n + 1} comma-separated numbers (center then radius)"
        )
    try:
        values = [float(v) for v in parts]
    except ValueError as exc:
        raise SpecFileError(f"--ball: {exc}")
    if values[-1] <= 0:
        raise SpecFileError("--ball radius must be positive")
    return Ball(center=tuple(values[:-1]), radius=values[-1])


# ---------------------------------------------------------------------------
# serialization


def _f12(v: float) -> float:
    return float(f"{float(v):.12g}")


def approx(v, tol) -> dict:
    return {"approx": _f12(v), "tol": tol}


def _eigen_json(e: spectrum.Eigen) -> dict:
    if e.exact is not None:
        return {"value": e.exact, "multiplicity": e.multiplicity, "exact": True}
    return {
        "re": approx(e.value.real, spectrum.ROOT_TOL),
        "im": approx(e.value.imag, spectrum.ROOT_TOL),
        "multiplicity": e.multiplicity,
        "exact": False,
    }


def validation_json(report: pair_mod.ValidationReport) -> dict:
    return {
        "integer_matrix": report.integer_matrix,
        "expanding": report.expanding,
        "cardinality_match": report.cardinality_match,
        "coset_complete": report.coset_complete,
        "primitive": report.primitive,
        "reducible": report.reducible,
        "standard": report.standard,
        "passed": report.passed,
        "zero_digit": report.zero_digit,
        "translation": list(report.translation) if report.translation else None,
        "witnesses": {k: repr(v) for k, v in report.witnesses.items()},
    }


def spectral_json(rep: spectrum.SpectralReport) -> dict:
    lam = rep.lambda_p
    return {
        "char_poly_tplus": list(rep.tplus_char_poly),
        "eigenvalues": [_eigen_json(e) for e in rep.eigenvalues],
        "m_minus": approx(rep.m_minus, spectrum.ROOT_TOL),
        "equal_modulus": rep.equal_modulus,
        "special": [approx(v, spectrum.SPECIAL_TOL) for v in rep.special],
        "special_boundary_flags": list(rep.special_boundary),
        "lambda_p": approx(lam, spectrum.SPECIAL_TOL) if lam is not None else None,
        "d_M": rep.d_M,
        "d_lambda_p": rep.d_lambda_p,
        "m_simple_tile_diagnostic": rep.m_simple,
        "status": rep.status,
        "warnings": rep.warnings,
    }


def dimension_json(rep: dimension.DimensionReport) -> dict:
    out = {
        "lower": approx(rep.lower, 1e-9) if rep.lower is not None else None,
        "upper": approx(rep.upper, 1e-9) if rep.upper is not None else None,
        "exact": approx(rep.exact, 1e-9) if rep.exact is not None else None,
        "clamped": rep.clamped,
        "local_dimensions": [
            {
                "eigenvalue": approx(ld.eigenvalue, spectrum.SPECIAL_TOL),
                "lower": approx(ld.lower, 1e-9),
                "upper": approx(ld.upper, 1e-9),
                "exact": approx(ld.exact, 1e-9) if ld.exact is not None else None,
            }
            for ld in rep.local_dimensions
        ],
        "measure": None,
        "tile_diagnostic": rep.tile_diagnostic,
        "status": rep.status,
        "notes": rep.notes,
    }
    if rep.measure is not None:
        out["measure"] = {
            "verdict": rep.measure.verdict,
            "lhs_d_lambda_p_minus_1": _f12(rep.measure.lhs),
            "rhs_codim_times_d_M_minus_1": _f12(rep.measure.rhs),
            "condition_simple": rep.measure.condition_simple,
            "condition_geq": rep.measure.condition_geq,
            "condition_strict": rep.measure.condition_strict,
        }
    return out


def contact_json(cs: contact.ContactSystem) -> dict:
    return {
        "s_size": len(cs.S),
        "s_plus": [list(v) for v in cs.splus],
        "t_plus": [list(row) for row in cs.tplus],
        "row_sum": cs.pair.m,
    }


def input_json(p: StandardPair, warnings) -> dict:
    return {
        "name": p.name,
        "n": p.n,
        "m": p.m,
        "matrix": [list(r) for r in p.M],
        "digits": [list(d) for d in p.digits],
        "translation": list(p.translation) if p.translation else None,
        "warnings": warnings,
    }


def growth_json(fit: geometry.GrowthFit) -> dict:
    return {
        "rate": {"approx": _f12(fit.rate), "residual": _f12(fit.residual)},
        "levels": list(fit.levels),
        "counts": list(fit.counts),
        "saturated_levels": list(fit.saturated_levels),
        "dropped_level": fit.dropped_level,
    }


def boxcount_json(fit: geometry.BoxCountFit) -> dict:
    return {
        "dimension": {"approx": _f12(fit.dimension), "residual": _f12(fit.residual)},
        "octaves": list(fit.octaves),
        "cell_counts": list(fit.counts),
    }


def dump_report(report: dict, stream) -> None:
    stream.write(json.dumps(report, sort_keys=True, indent=2))
    stream.write("\n")


# ---------------------------------------------------------------------------
# pipeline


def analyze(p: StandardPair, warnings=None, tol: float = spectrum.SPECIAL_TOL) -> dict:
    """Full spectral report for a pair: validation, reduction, contact
    system, eigen data and dimension statements."""
    validation = pair_mod.validate(p.M, p.digits)
    reduced, basis = pair_mod.primitivize(p)
    cs = contact.contact_system(reduced)
    srep = spectrum.spectral_report(cs, tol=tol)
    drep = dimension.dimension_report(srep, reduced.n, reduced.m)
    return {
        "schema": SCHEMA,
        "input": input_json(p, warnings or []),
        "validation": validation_json(validation),
        "primitivization": {
            "applied": reduced is not p,
            "basis": [list(r) for r in basis],
            "matrix": [list(r) for r in reduced.M],
            "digits": [list(d) for d in reduced.digits],
        },
        "contact": contact_json(cs),
        "spectrum": spectral_json(srep),
        "dimension": dimension_json(drep),
    }


def _print_text_summary(report: dict, stream) -> None:
    dim = report["dimension"]
    spec = report["spectrum"]
    name = report["input"]["name"] or "(unnamed pair)"
    stream.write(f"pair: {name}  n={report['input']['n']} m={report['input']['m']}\n")
    stream.write(f"contact set size: {report['contact']['s_size']}\n")
    specials = [s["approx"] for s in spec["special"]]
    stream.write(f"special eigenvalues: {specials}\n")
    if dim["exact"] is not None:
        stream.write(f"boundary dimension: {dim['exact']['approx']}\n")
    elif dim["lower"] is not None:
        stream.write(
            f"boundary dimension in [{dim['lower']['approx']}, {dim['upper']['approx']}]\n"
        )
    else:
        stream.write("boundary dimension: no special eigenvalue found\n")
    stream.write(f"tile diagnostic (leading eigenvalue simple): {spec['m_simple_tile_diagnostic']}\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    p, warnings = _load_and_validate(args.pairfile, allow_invalid=True)
    report = {
        "schema": SCHEMA,
        "input": input_json(p, warnings),
        "validation": validation_json(pair_mod.validate(p.M, p.digits)),
    }
    _emit(args, report)
    return 0 if report["validation"]["standard"] else 3


def _load_and_validate(path, allow_invalid=False):
    if allow_invalid:
        try:
            return _load_spec(path)
        except PairValidationError as exc:
            # rebuild without validation so the report can show the failure
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
            digits = list(dict.fromkeys(tuple(d) for d in raw["digits"]))
            p = pair_mod.make_pair(
                raw["matrix"], digits, name=raw.get("name"), require_valid=False
            )
            return p, [str(exc)]
    return _load_spec(path)


def cmd_dimension(args) -> int:
    p, warnings = _load_spec(args.pairfile)
    tol = args.tol if args.tol is not None else spectrum.SPECIAL_TOL
    report = analyze(p, warnings, tol=tol)
    _emit(args, report, text=_print_text_summary)
    return 0


def cmd_spectrum(args) -> int:
    p, warnings = _load_spec(args.pairfile)
    reduced, _ = pair_mod.primitivize(p)
    cs = contact.contact_system(reduced)
    srep = spectrum.spectral_report(cs)
    report = {
        "schema": SCHEMA,
        "input": input_json(p, warnings),
        "contact": contact_json(cs),
        "spectrum": spectral_json(srep),
    }
    _emit(args, report)
    return 0


def cmd_boundary(args) -> int:
    p, _ = _load_spec(args.pairfile)
    reduced, _ = pair_mod.primitivize(p)
    S = contact.compute_S(reduced)
    dset = geometry.delta_k(reduced, S, args.k, args.budget)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            geometry.export_points(dset, fh)
    else:
        geometry.export_points(dset, sys.stdout)
    return 0


def cmd_render(args) -> int:
    p, _ = _load_spec(args.pairfile)
    reduced, _ = pair_mod.primitivize(p)
    S = contact.compute_S(reduced)
    gam = geometry.gamma_k(reduced, args.k, args.budget)
    dset = geometry.delta_k(reduced, S, args.k, args.budget)
    image = render.rasterize(gam, args.width, args.height, overlay=dset)
    render.write_pnm(image, args.out)
    return 0


def cmd_estimate(args) -> int:
    p, warnings = _load_spec(args.pairfile)
    reduced, _ = pair_mod.primitivize(p)
    S = contact.compute_S(reduced)
    ball = parse_ball(args.ball, reduced.n) if args.ball else None
    k_max = args.k_max
    if k_max is None:
        k_max = max(args.k_min + 2, _auto_level(reduced, min(args.budget, 200_000)))
    levels = range(args.k_min, k_max + 1)
    fit = geometry.growth_rate_estimate(reduced, S, levels, ball, args.budget)
    report = {
        "schema": SCHEMA,
        "input": input_json(p, warnings),
        "ball": (
            {"center": list(ball.center), "radius": ball.radius} if ball else None
        ),
        "growth": growth_json(fit),
        "box_count": None,
    }
    box_fit = None
    if reduced.n == 2:
        k_box = args.k if args.k else _auto_level(reduced, min(args.budget, 250_000))
        try:
            dset = geometry.delta_k(reduced, S, k_box, args.budget)
            box_fit = geometry.box_counting_estimate(dset, reduced)
            report["box_count"] = boxcount_json(box_fit)
            report["box_count"]["level"] = k_box
        except (ValueError, BudgetExceededError) as exc:
            report["box_count"] = {"skipped": str(exc)}
    _emit(args, report)
    if args.plot:
        _plot_estimates(args.plot, fit, box_fit)
    return 0


def _auto_level(p: StandardPair, point_cap: int) -> int:
    k = 1
    while p.m ** (k + 1) <= point_cap:
        k += 1
    return k


def _plot_estimates(path, growth_fit, box_fit) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    ncols = 2 if box_fit is not None else 1
    fig, axes = plt.subplots(1, ncols, figsize=(5 * ncols, 4))
    axes = [axes] if ncols == 1 else list(axes)
    ax = axes[0]
    ks = np.asarray(growth_fit.levels, float)
    ax.semilogy(ks, growth_fit.counts, "o", label="boundary point counts")
    line = growth_fit.counts[0] * growth_fit.rate ** (ks - ks[0])
    ax.semilogy(ks, line, "-", label=f"rate {growth_fit.rate:.4g}")
    ax.set_xlabel("level k")
    ax.set_ylabel("count")
    ax.legend()
    if box_fit is not None:
        ax2 = axes[1]
        t = np.asarray(box_fit.octaves, float)
        ax2.semilogy(t, box_fit.counts, "s", label="occupied cells")
        line2 = box_fit.counts[0] * 2.0 ** (box_fit.dimension * (t - t[0]))
        ax2.semilogy(t, line2, "-", label=f"dimension {box_fit.dimension:.4g}")
        ax2.set_xlabel("octave (cell size diam/2^t)")
        ax2.set_ylabel("N(cell)")
        ax2.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _emit(args, report, text=None) -> None:
    out = getattr(args, "format", "json")
    if out == "text" and text is not None:
        text(report, sys.stdout)
    elif out == "text":
        for key, value in sorted(report.items()):
            if key != "schema":
                sys.stdout.write(f"{key}: {json.dumps(value, sort_keys=True)}\n")
    else:
        dump_report(report, sys.stdout)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tiledim",
        description="Boundary dimension of self-affine tiles from a matrix "
        "and digit set, with exact point-cloud cross-checks.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True, budget=False):
        sp.add_argument("pairfile", help="JSON pair specification")
        if fmt:
            sp.add_argument("--format", choices=("json", "text"), default="json")
        if budget:
            sp.add_argument("--budget", type=int, default=geometry.DEFAULT_BUDGET,
                            help="maximum points per level")

    sp = sub.add_parser("validate", help="check the standard-pair conditions")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("dimension", help="full spectral dimension report")
    common(sp)
    sp.add_argument("--tol", type=float, default=None,
                    help="tolerance for special-eigenvalue interval tests")
    sp.set_defaults(func=cmd_dimension)

    sp = sub.add_parser("spectrum", help="contact system and eigen data only")
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("boundary", help="export the level-k boundary cloud")
    common(sp, fmt=False, budget=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--out", default=None, help="output path (default stdout)")
    sp.set_defaults(func=cmd_boundary)

    sp = sub.add_parser("render", help="PPM image of the approximant with "
                        "its boundary overlay")
    common(sp, fmt=False, budget=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--width", type=int, default=720)
    sp.add_argument("--height", type=int, default=720)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("estimate", help="empirical growth-rate and "
                        "box-count estimates")
    common(sp, budget=True)
    sp.add_argument("--k-min", type=int, default=2)
    sp.add_argument("--k-max", type=int, default=None)
    sp.add_argument("--k", type=int, default=None,
                    help="level for the box-count cloud")
    sp.add_argument("--ball", default=None,
                    help="cx,...,r: restrict counts to this ball")
    sp.add_argument("--plot", default=None,
                    help="write a matplotlib figure of the fits here")
    sp.set_defaults(func=cmd_estimate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PairValidationError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 3
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 4
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 5
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TiledimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
