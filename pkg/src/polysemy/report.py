"""Report assembly: JSON-ready dicts, aligned text tables and CSV rows."""

import csv
import io
import json
import math

PRETTY_MIN_EXPECTED = 0.01


def _num(x):
    """JSON-safe float: NaN and infinities become null."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def totals_dict(totals):
    return {"words": totals.word_count, "meanings": _num(totals.meaning_count)}


def fit_dict(fit):
    return {
        "gamma": _num(fit.gamma),
        "k_const": _num(fit.k_const),
        "residual": _num(fit.residual),
        "iterations": fit.iterations,
    }


def spectrum_rows(expected, observed=None):
    k_top = expected.k_max or expected.max_degree()
    if observed is not None:
        k_top = max(k_top, observed.max_degree())
    rows = []
    for k in range(1, k_top + 1):
        row = {"k": k}
        if observed is not None:
            row["observed"] = observed.get(k)
        row["expected"] = _num(expected.get(k))
        rows.append(row)
    return rows


def classes_list(classes):
    return [
        {"degrees": list(c.degrees), "observed": _num(c.observed), "expected": _num(c.expected)}
        for c in classes
    ]


def gof_dict(report):
    return {
        "classes": classes_list(report.classes),
        "residual_below_threshold": report.classes.residual_below_threshold,
        "chi_square": _num(report.chi_square),
        "dof": report.dof,
        "p_value": _num(report.p_value),
        "fitted_param_count": report.fitted_param_count,
        "policy": report.policy.as_dict(),
    }


def dumps(report):
    # repr-based float output round-trips every double exactly
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _cell(v):
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else v


def write_csv(path, rows, columns):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(c)) for c in columns])


def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list):
        if len(v) > 2 and v == list(range(v[0], v[-1] + 1)):
            return f"{v[0]}-{v[-1]}"
        return ",".join(str(x) for x in v)
    return str(v)


def table(rows, columns):
    cells = [[_fmt(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    out = io.StringIO()
    out.write("  ".join(c.rjust(w) for c, w in zip(columns, widths)) + "\n")
    out.write("  ".join("-" * w for w in widths) + "\n")
    for row in cells:
        out.write("  ".join(v.rjust(w) for v, w in zip(row, widths)) + "\n")
    return out.getvalue()


def pretty(report):
    """Human-readable rendering of a report dict."""
    out = io.StringIO()
    out.write(f"command: {report['command']}\n")
    if "totals" in report:
        t = report["totals"]
        out.write(f"words L = {t['words']}, meanings M = {_fmt(t['meanings'])}\n")
    if "fit" in report:
        f = report["fit"]
        out.write(
            f"gamma = {f['gamma']:.10g}, K = {f['k_const']:.10g}, "
            f"residual = {f['residual']:.3g}, iterations = {f['iterations']}\n"
        )
    if "lstar" in report:
        ls = report["lstar"]
        flag = " (search boundary)" if ls["at_boundary"] else ""
        out.write(f"L* = {ls['l_star']}{flag}; modified M* = {_fmt(ls['modified_totals']['meanings'])}\n")
    if "spectrum" in report:
        rows = report["spectrum"]
        cols = [c for c in ("k", "observed", "expected") if c in rows[0]]
        keep = [r for r in rows if r.get("observed") or (r["expected"] or 0.0) >= PRETTY_MIN_EXPECTED]
        out.write("\n" + table(keep, cols))
        if len(keep) < len(rows):
            out.write(f"({len(rows) - len(keep)} tail rows with expected < {PRETTY_MIN_EXPECTED} omitted)\n")
    if "gof" in report:
        g = report["gof"]
        out.write("\n" + table(g["classes"], ["degrees", "observed", "expected"]))
        out.write(f"\nchi-square = {g['chi_square']:.6g}, dof = {g['dof']}, P = {g['p_value']:.6g}\n")
    if "simulation" in report:
        sim = report["simulation"]
        out.write(f"\nseed = {sim['seed']}, replicates = {sim['replicates']}\n")
        out.write(table(sim["degrees"], ["k", "mean", "se", "expected"]))
        if "p_values" in sim:
            ps = sim["p_values"]
            out.write(f"calibration p-values: n = {len(ps)}, mean = {sum(ps) / len(ps):.4g}\n")
    if "lstar" in report:
        out.write("\n" + table(report["lstar"]["trace"], ["l_star", "value", "boundary"]))
    return out.getvalue()
