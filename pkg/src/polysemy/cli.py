"""Command-line front end.

Exit statuses: 0 success, 2 usage error, 3 data/parse error, 4 model
infeasibility, 5 numerical failure. P values never affect the status.
"""

import argparse
import json
import sys

from . import report as rpt
from .errors import DataError, InfeasibleError, ParseError, PolysemyError, UsageError
from .gof import MergePolicy, run_test
from .lstar import LstarConfig, apply_exclusion, fit_lstar
from .model import DictionaryTotals, PolysemySpectrum, meanings_total, predicted_spectrum, solve_parameters
from .simulate import SimConfig, calibrate_pvalues, replicate_summary, sample_spectrum

DELIMITERS = (",", "\t", ";")


def _int_field(text, what, line):
    try:
        value = int(text.strip())
    except ValueError:
        raise ParseError(f"{what} {text.strip()!r} is not an integer", line) from None
    return value


def _check_row(k, n, line, seen):
    if k < 1:
        raise ParseError(f"degree must be >= 1, got {k}", line)
    if n < 0:
        raise ParseError(f"count must be >= 0, got {n}", line)
    if k in seen:
        raise ParseError(f"duplicate degree {k}", line)
    seen[k] = n


def _reject_duplicate_keys(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ParseError(f"duplicate degree {key}")
        out[key] = value
    return out


def _parse_json(text):
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("spectrum"), dict):
        raise ParseError('JSON spectrum files need the form {"spectrum": {"1": 100, ...}}')
    counts = {}
    for key, value in doc["spectrum"].items():
        k = _int_field(key, "degree", None)
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(f"count for degree {key} must be an integer, got {value!r}")
        _check_row(k, value, None, counts)
    return counts


def _parse_delimited(text):
    lines = [(i, raw) for i, raw in enumerate(text.splitlines(), start=1) if raw.strip()]
    if not lines:
        raise ParseError("spectrum file is empty")
    first = lines[0][1]
    delimiter = max(DELIMITERS, key=first.count)
    if first.count(delimiter) == 0:
        raise ParseError("no comma, tab or semicolon delimiter found", lines[0][0])
    head = first.split(delimiter)[0].strip()
    if not head.lstrip("+-").isdigit():
        lines = lines[1:]
    counts = {}
    for lineno, raw in lines:
        fields = raw.split(delimiter)
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, found {len(fields)}", lineno)
        k = _int_field(fields[0], "degree", lineno)
        n = _int_field(fields[1], "count", lineno)
        _check_row(k, n, lineno, counts)
    return counts


def parse_spectrum(path):
    """Read an empirical spectrum from a delimited or JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    if not text.strip():
        raise ParseError("spectrum file is empty")
    if text.lstrip().startswith("{"):
        counts = _parse_json(text)
    else:
        counts = _parse_delimited(text)
    if not any(n > 0 for n in counts.values()):
        raise ParseError("spectrum has no row with a positive count")
    return PolysemySpectrum.empirical(counts)


def policy_from_args(args, exclude_monosemous=False):
    exclude = set()
    for item in args.exclude_k or ():
        exclude.update(item)
    if exclude_monosemous:
        exclude.add(1)
    return MergePolicy(
        min_class_size=args.merge_min,
        explicit_joins=tuple(args.join or ()),
        exclude_degrees=frozenset(exclude),
        exclude_above=args.exclude_k_above,
        merge_by=args.merge_by,
    )


def cmd_predict(words, meanings, k_max=None):
    totals = DictionaryTotals(words, meanings)
    fit = solve_parameters(totals)
    expected = predicted_spectrum(fit, k_max)
    return {
        "command": "predict",
        "totals": rpt.totals_dict(totals),
        "fit": rpt.fit_dict(fit),
        "k_max": expected.k_max,
        "tail_mass": expected.tail_mass,
        "spectrum": rpt.spectrum_rows(expected),
    }


def cmd_test(observed, policy, fitted_param_count=0):
    result = run_test(observed, policy, fitted_param_count)
    return {
        "command": "test",
        "totals": rpt.totals_dict(result.fit.totals),
        "fit": rpt.fit_dict(result.fit),
        "k_max": result.expected.k_max,
        "tail_mass": result.expected.tail_mass,
        "spectrum": rpt.spectrum_rows(result.expected, result.observed),
        "gof": rpt.gof_dict(result),
    }


def cmd_fit_lstar(observed, config):
    if config.policy.exclude_above is not None:
        observed = apply_exclusion(observed, config.policy.exclude_above)
    fit = fit_lstar(observed, config)
    result = fit.report
    bounds = (config.search_lo, config.search_hi)
    return {
        "command": "fit-lstar",
        "totals": rpt.totals_dict(result.fit.totals),
        "fit": rpt.fit_dict(result.fit),
        "k_max": result.expected.k_max,
        "tail_mass": result.expected.tail_mass,
        "spectrum": rpt.spectrum_rows(result.expected, result.observed),
        "gof": rpt.gof_dict(result),
        "lstar": {
            "l_star": fit.l_star,
            "observed_totals": rpt.totals_dict(observed.totals()),
            "modified_totals": rpt.totals_dict(fit.modified_totals),
            "search_range": list(bounds),
            "objective": config.objective,
            "at_boundary": fit.at_boundary,
            "trace": [
                {"l_star": c, "value": rpt._num(v), "boundary": c in bounds}
                for c, v in fit.objective_trace
            ],
        },
    }


def cmd_simulate(words, seed, reps, meanings=None, gamma=None, policy=None, calibrate=False):
    if (meanings is None) == (gamma is None):
        raise UsageError("give exactly one of --meanings or --gamma")
    if reps < 1:
        raise UsageError("--reps must be >= 1")
    if not 0 <= seed < 2**64:
        raise UsageError("--seed must be an unsigned 64-bit integer")
    if meanings is None:
        if not gamma > 0:
            raise UsageError("--gamma must be positive")
        meanings = meanings_total(words, gamma)
    totals = DictionaryTotals(words, meanings)
    fit = solve_parameters(totals)
    config = SimConfig(seed=seed, replicates=reps, fit=fit)
    spectra = sample_spectrum(config)
    mean, se = replicate_summary(spectra)
    expected = predicted_spectrum(fit, max(len(mean), 1))
    sim = {
        "seed": seed,
        "replicates": reps,
        "degrees": [
            {"k": k, "mean": float(mean[k - 1]), "se": rpt._num(se[k - 1]), "expected": expected.get(k)}
            for k in range(1, len(mean) + 1)
        ],
    }
    if calibrate:
        sim["p_values"] = calibrate_pvalues(config, policy)
    return {
        "command": "simulate",
        "totals": rpt.totals_dict(totals),
        "fit": rpt.fit_dict(fit),
        "simulation": sim,
    }


def _degree_list(text):
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated degrees, got {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"degrees must be positive integers, got {text!r}")
    return values


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _add_output_flags(p):
    p.add_argument("--pretty", action="store_true", help="print a text table instead of JSON")
    p.add_argument("--emit-csv", metavar="PATH", help="write the per-degree table as CSV")


def _add_policy_flags(p):
    g = p.add_argument_group("chi-square classes")
    g.add_argument("--merge-min", type=float, default=10.0,
                   help="minimum class size when merging adjacent degrees (default 10)")
    g.add_argument("--merge-by", choices=("expected", "observed"), default="expected",
                   help="which counts the class size threshold applies to")
    g.add_argument("--join", type=_degree_list, action="append", metavar="K,K",
                   help="force degrees into one class, e.g. --join 8,9 (repeatable)")
    g.add_argument("--exclude-k", type=_degree_list, action="append", metavar="K,K",
                   help="drop degrees from the comparison only (repeatable)")
    g.add_argument("--exclude-k-above", type=_positive_int, metavar="K",
                   help="remove words with more than K meanings before fitting")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="polysemy",
        description="Parameter-free rank polysemy model: predict, test, fit L*, simulate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="predicted spectrum from word and meaning totals")
    p.add_argument("--words", type=_positive_int, required=True, help="number of words L")
    p.add_argument("--meanings", type=float, required=True, help="number of meanings M")
    p.add_argument("--k-max", type=_positive_int, help="highest degree to report (default: auto)")
    _add_output_flags(p)

    p = sub.add_parser("test", help="chi-square test of an empirical spectrum")
    p.add_argument("spectrum", help="spectrum file (delimited k,count rows or JSON)")
    p.add_argument("--fitted-params", type=int, choices=(0, 1), default=0,
                   help="parameters counted against the degrees of freedom")
    _add_policy_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("fit-lstar", help="fit the modified dictionary size L*")
    p.add_argument("spectrum", help="spectrum file (delimited k,count rows or JSON)")
    p.add_argument("--search-lo", type=_positive_int, help="smallest L* candidate")
    p.add_argument("--search-hi", type=_positive_int, help="largest L* candidate")
    p.add_argument("--objective", choices=("max_p_value", "min_chi_square"), default="max_p_value")
    p.add_argument("--drop-monosemous", action="store_true",
                   help="leave degree 1 out of the chi-square comparison")
    _add_policy_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("simulate", help="Monte Carlo spectra drawn from the model")
    p.add_argument("--words", type=_positive_int, required=True, help="number of words L")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--meanings", type=float, help="number of meanings M")
    src.add_argument("--gamma", type=float, help="Zipf exponent; M follows from it")
    p.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed (default 0)")
    p.add_argument("--reps", type=_positive_int, default=100, help="replicates (default 100)")
    p.add_argument("--calibrate", action="store_true",
                   help="also report chi-square P for every replicate")
    _add_policy_flags(p)
    _add_output_flags(p)
    return parser


def _default_range(observed, policy):
    if policy.exclude_above is not None:
        observed = apply_exclusion(observed, policy.exclude_above)
    n_words = observed.total_words()
    polysemous = n_words - observed.get(1)
    return max(polysemous + 1, n_words // 2), 2 * n_words


def _dispatch(args):
    if args.command == "predict":
        report = cmd_predict(args.words, args.meanings, args.k_max)
        csv_rows, csv_cols = report["spectrum"], ["k", "expected"]
    elif args.command == "test":
        report = cmd_test(parse_spectrum(args.spectrum), policy_from_args(args), args.fitted_params)
        csv_rows, csv_cols = report["spectrum"], ["k", "observed", "expected"]
    elif args.command == "fit-lstar":
        policy = policy_from_args(args, exclude_monosemous=args.drop_monosemous)
        observed = parse_spectrum(args.spectrum)
        lo, hi = _default_range(observed, policy)
        lo = args.search_lo if args.search_lo is not None else lo
        hi = args.search_hi if args.search_hi is not None else hi
        report = cmd_fit_lstar(observed, LstarConfig(lo, hi, policy, args.objective))
        csv_rows, csv_cols = report["spectrum"], ["k", "observed", "expected"]
    else:
        report = cmd_simulate(
            args.words, args.seed, args.reps, meanings=args.meanings, gamma=args.gamma,
            policy=policy_from_args(args), calibrate=args.calibrate,
        )
        csv_rows, csv_cols = report["simulation"]["degrees"], ["k", "mean", "se", "expected"]
    if args.emit_csv:
        rpt.write_csv(args.emit_csv, csv_rows, csv_cols)
    return report


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _dispatch(args)
    except PolysemyError as exc:
        message = str(exc)
        if isinstance(exc, InfeasibleError):
            message += "; the model needs more meanings than words (M > L)"
        print(f"polysemy: error: {message}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"polysemy: error: {exc}", file=sys.stderr)
        return DataError.exit_code
    sys.stdout.write(rpt.pretty(report) if args.pretty else rpt.dumps(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
