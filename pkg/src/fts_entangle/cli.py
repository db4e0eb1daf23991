"""``fts-entangle`` command line.

Amplitude order everywhere is a000, a001, a010, a011, a100, a101, a110, a111
(index 4A + 2B + C). Input is a JSON array of StateRecords, a CSV file with
columns ``id, re0, im0, ..., re7, im7`` (optional header row starting with
``id``), or ``--amplitudes`` with eight comma-separated entries ``re`` or
``re:im``.

Exit codes: 0 success, 1 I/O or parse error, 2 tolerance ambiguity or
marginal state, 3 internal inconsistency (including classifier mismatch).
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import click
import numpy as np

from . import classifier as clf
from . import invariants as inv
from . import slocc
from .scalars import GaussianRational, exact_array, format_rational, rational

EXIT_OK, EXIT_PARSE, EXIT_AMBIGUOUS, EXIT_INCONSISTENT = 0, 1, 2, 3
DEFAULT_SEED = 0

CLASSIFY_CSV_COLUMNS = (
    "id", "class", "rank", "conventional_class", "q_re", "q_im",
    "norm_sq", "S_A", "S_B", "S_C", "kempe", "tangle", "hyperdet_re", "hyperdet_im",
    "flags", "real_orbit",
)
INVARIANTS_CSV_COLUMNS = (
    "id", "norm_sq", "S_A", "S_B", "S_C", "kempe", "tangle", "hyperdet_re", "hyperdet_im", "q_re", "q_im",
    "entropy_gamma_residual", "entropy_gamma_residual_printed",
    "t_norm_sq", "t_kempe_rhs_printed", "t_kempe_rhs_measured",
)


class ParseError(click.ClickException):
    exit_code = EXIT_PARSE


@dataclass
class StateRecord:
    id: str
    amplitudes: np.ndarray
    exact: bool


# --- input ---------------------------------------------------------------------------------


def _parse_scalar(value, exact: bool):
    if exact:
        try:
            return rational(value if not isinstance(value, float) else Fraction(str(value)))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad rational {value!r}: {exc}") from exc
    try:
        return float(Fraction(value)) if isinstance(value, str) else float(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad number {value!r}") from exc


def _build(rid: str, pairs, exact: bool) -> StateRecord:
    if len(pairs) != 8:
        raise ParseError(f"record {rid!r}: expected 8 amplitudes, got {len(pairs)}")
    if exact:
        amps = exact_array([GaussianRational(_parse_scalar(re, True), _parse_scalar(im, True)) for re, im in pairs])
    else:
        amps = np.array([complex(_parse_scalar(re, False), _parse_scalar(im, False)) for re, im in pairs])
    return StateRecord(rid, amps, exact)


def parse_json(text: str, exact: bool = False) -> list[StateRecord]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise ParseError("JSON input must be a StateRecord or an array of them")
    out = []
    for n, item in enumerate(data):
        if not isinstance(item, dict) or "amplitudes" not in item:
            raise ParseError(f"record {n}: missing 'amplitudes'")
        pairs = item["amplitudes"]
        if not isinstance(pairs, list) or any(not isinstance(p, list) or len(p) != 2 for p in pairs):
            raise ParseError(f"record {n}: amplitudes must be [re, im] pairs")
        out.append(_build(str(item.get("id", n)), pairs, exact or bool(item.get("exact", False))))
    return out


def parse_csv(text: str, exact: bool = False) -> list[StateRecord]:
    out = []
    for n, row in enumerate(csv.reader(io.StringIO(text))):
        if not row or (n == 0 and row[0].strip().lower() == "id"):
            continue
        if len(row) != 17:
            raise ParseError(f"CSV row {n + 1}: expected 17 columns, got {len(row)}")
        vals = row[1:]
        out.append(_build(row[0], list(zip(vals[0::2], vals[1::2])), exact))
    return out


def parse_inline(text: str, exact: bool = False) -> list[StateRecord]:
    entries = [e.strip() for e in text.split(",") if e.strip()]
    pairs = [tuple(e.split(":", 1)) if ":" in e else (e, "0") for e in entries]
    return [_build("inline", pairs, exact)]


def read_records(path: str | None, amplitudes: str | None, exact: bool) -> list[StateRecord]:
    if amplitudes is not None:
        return parse_inline(amplitudes, exact)
    if path is None:
        raise ParseError("give an input file (or '-') or --amplitudes")
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if path.lower().endswith(".csv") or not text.lstrip().startswith(("[", "{")):
        return parse_csv(text, exact)
    return parse_json(text, exact)


# --- serialisation -------------------------------------------------------------------------


def _real_out(x):
    if isinstance(x, GaussianRational):
        return format_rational(x.re)
    if hasattr(x, "numerator") and not isinstance(x, (int, float)):
        return format_rational(x)
    return float(np.real(x))


def _complex_out(x):
    if isinstance(x, GaussianRational):
        return [format_rational(x.re), format_rational(x.im)]
    z = complex(x)
    return [z.real + 0.0, z.imag + 0.0]


def _invariants_out(rep: inv.InvariantReport) -> dict:
    return {
        "norm_sq": _real_out(rep.norm_sq),
        "S_A": _real_out(rep.s_a),
        "S_B": _real_out(rep.s_b),
        "S_C": _real_out(rep.s_c),
        "kempe": _real_out(rep.kempe),
        "tangle": float(rep.tangle),
        "hyperdet": _complex_out(rep.hyperdet),
    }


def classify_record(rec: StateRecord, tol: clf.ToleranceConfig, real: bool) -> tuple[dict, int]:
    """JSON-ready classification record and its exit status."""
    tol = clf.ToleranceConfig(tol.epsilon, tol.null_floor, tol.exact or rec.exact)
    s = rec.amplitudes
    flags: list[str] = []
    status = EXIT_OK
    cls = rank = conv = None
    tag = None
    q = inv.quartic_norm(s)
    try:
        result = clf.classify(s, tol, real=real)
        cls, rank, tag = result.cls.value, result.rank.value, result.real_tag
        flags += result.flags
        if result.marginal:
            status = EXIT_AMBIGUOUS
    except clf.ToleranceAmbiguityError:
        flags.append("tolerance-ambiguity")
        status = EXIT_AMBIGUOUS
    except clf.InconsistencyError:
        flags.append("inconsistent")
        status = EXIT_INCONSISTENT
    try:
        conv = clf.classify_conventional(s, tol).value
    except clf.InconsistencyError:
        flags.append("inconsistent")
        status = EXIT_INCONSISTENT
    if cls is not None and conv is not None and cls != conv:
        flags.append("classifier-mismatch")
        status = EXIT_INCONSISTENT
    record = {
        "id": rec.id,
        "class": cls,
        "rank": rank,
        "conventional_class": conv,
        "q": _complex_out(q),
        "invariants": _invariants_out(inv.invariant_report(s)),
        "flags": sorted(set(flags)),
        "real_orbit": None
        if tag is None
        else {"q_sign": tag.q_sign, "gamma_signatures": list(tag.gamma_signatures), "orbit_label": tag.orbit_label},
        "exact": bool(tol.exact),
    }
    return record, status


def invariants_record(rec: StateRecord) -> dict:
    s = rec.amplitudes
    rel = inv.entropy_gamma_relations(s)
    tk = inv.t_kempe_relation(s)
    return {
        "id": rec.id,
        "invariants": _invariants_out(inv.invariant_report(s)),
        "q": _complex_out(inv.quartic_norm(s)),
        "diagnostics": {
            "entropy_gamma_residual": max(abs(complex(v)) for v in rel["residual"].values()),
            "entropy_gamma_residual_printed": max(abs(complex(v)) for v in rel["residual_printed"].values()),
            "t_norm_sq": float(complex(tk.t_norm_sq).real),
            "t_kempe_rhs_printed": float(complex(tk.rhs_printed).real),
            "t_kempe_rhs_measured": float(complex(tk.rhs_measured).real),
        },
        "exact": rec.exact,
    }


def _csv_classify_row(r: dict) -> list:
    i = r["invariants"]
    return [
        r["id"], r["class"] or "", r["rank"] or "", r["conventional_class"] or "", *r["q"],
        i["norm_sq"], i["S_A"], i["S_B"], i["S_C"], i["kempe"], i["tangle"], *i["hyperdet"],
        ";".join(r["flags"]), r["real_orbit"]["orbit_label"] if r["real_orbit"] else "",
    ]


def _csv_invariants_row(r: dict) -> list:
    i, d = r["invariants"], r["diagnostics"]
    return [
        r["id"], i["norm_sq"], i["S_A"], i["S_B"], i["S_C"], i["kempe"], i["tangle"], *i["hyperdet"], *r["q"],
        d["entropy_gamma_residual"], d["entropy_gamma_residual_printed"],
        d["t_norm_sq"], d["t_kempe_rhs_printed"], d["t_kempe_rhs_measured"],
    ]


def _emit(records: list[dict], fmt: str, columns, row_fn):
    if fmt == "json":
        click.echo(json.dumps(records, indent=2))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in records:
        w.writerow(row_fn(r))
    click.echo(buf.getvalue(), nl=False)


# --- commands ------------------------------------------------------------------------------

_input_arg = click.argument("input_path", required=False, metavar="INPUT")
_amps_opt = click.option("--amplitudes", help="Inline state: 8 comma-separated entries 're' or 're:im'.")
_eps_opt = click.option("--epsilon", type=float, default=None, help="Zero-test tolerance (default 1e-9 or $FTS_ENTANGLE_EPSILON).")
_exact_opt = click.option("--exact", is_flag=True, help="Parse amplitudes as rationals and test exactly.")
_fmt_opt = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)


def _tolerance(epsilon, exact) -> clf.ToleranceConfig:
    if epsilon is not None:
        return clf.ToleranceConfig(epsilon=epsilon, exact=exact)
    return clf.ToleranceConfig.from_env(exact=exact)


@click.group()
def main():
    """Three-qubit SLOCC classification via Freudenthal triple system rank."""


@main.command()
@_input_arg
@_amps_opt
@_eps_opt
@_exact_opt
@click.option("--real", is_flag=True, help="Require real amplitudes and report the real GHZ orbit tag.")
@_fmt_opt
def classify(input_path, amplitudes, epsilon, exact, real, fmt):
    """Classify each state by FTS rank, cross-checked against the entropy table."""
    tol = _tolerance(epsilon, exact)
    records = read_records(input_path, amplitudes, exact)
    out, status = [], EXIT_OK
    for rec in records:
        if real and any(complex(a).imag != 0 for a in rec.amplitudes):
            raise ParseError(f"record {rec.id!r}: --real needs zero imaginary parts")
        r, st = classify_record(rec, tol, real)
        out.append(r)
        status = max(status, st)
    _emit(out, fmt, CLASSIFY_CSV_COLUMNS, _csv_classify_row)
    sys.exit(status)


@main.command()
@_input_arg
@_amps_opt
@_exact_opt
@_fmt_opt
def invariants(input_path, amplitudes, exact, fmt):
    """Local-unitary invariants with relation residual diagnostics."""
    records = read_records(input_path, amplitudes, exact)
    _emit([invariants_record(r) for r in records], fmt, INVARIANTS_CSV_COLUMNS, _csv_invariants_row)


@main.command()
@click.option("--class", "cls", type=click.Choice([c.value for c in clf.EntanglementClass]), required=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None)
@click.option("--samples", type=click.IntRange(0), default=1000, show_default=True)
@click.option("--spread", type=float, default=1.0, show_default=True)
@_eps_opt
def fuzz(cls, seed, samples, spread, epsilon):
    """Classify random SLOCC images of a class representative both ways."""
    if seed is None:
        click.echo(f"warning: no --seed given, using default seed {DEFAULT_SEED}", err=True)
        seed = DEFAULT_SEED
    if not spread > 0:
        raise click.BadParameter("spread must be positive", param_hint="--spread")
    tol = _tolerance(epsilon, False)
    summary = fuzz_summary(cls, seed, samples, spread, tol)
    click.echo(json.dumps(summary, indent=2))
    sys.exit(EXIT_INCONSISTENT if summary["mismatches"] or summary["wrong_class"] else EXIT_OK)


def fuzz_summary(cls: str, seed: int, samples: int, spread: float, tol: clf.ToleranceConfig) -> dict:
    expected = list(clf.EntanglementClass).index(clf.EntanglementClass(cls))
    summary = {
        "class": cls, "seed": seed, "samples": samples, "spread": spread, "epsilon": tol.epsilon,
        "mismatches": 0, "wrong_class": 0, "marginal": 0, "max_q_drift": 0.0, "max_hyperdet_drift": 0.0,
    }
    if samples == 0:
        return summary
    rep = inv.representative(cls)
    ops = slocc.random_slocc_batch(seed, samples, spread=spread)
    imgs = slocc.apply_slocc_batch(ops, np.broadcast_to(rep, (samples, 8)))
    res = clf.classify_fts_batch(imgs, tol)
    conv = clf.classify_conventional_batch(imgs, tol)
    n4 = inv.norm_sq(imgs) ** 2
    summary["mismatches"] = int(np.sum(res.codes != conv))
    summary["wrong_class"] = int(np.sum(res.codes != expected))
    summary["marginal"] = int(np.sum(res.marginal))
    summary["max_q_drift"] = float(np.max(np.abs(inv.quartic_norm(imgs) - inv.quartic_norm(rep)) / n4))
    summary["max_hyperdet_drift"] = float(np.max(np.abs(inv.hyperdet_oracle(imgs) - inv.hyperdet(rep)) / n4))
    return summary


def _real_ket(signs: dict[str, int]) -> np.ndarray:
    s = np.zeros(8)
    for label, v in signs.items():
        s[int(label, 2)] = v
    return s


ORBIT_ROWS = (
    ("A-B-C", inv.representative("A-B-C"), 4, 3),
    ("A-BC", inv.representative("A-BC"), 5, 4),
    ("W", inv.representative("W"), 7, 6),
    ("GHZ", inv.representative("GHZ"), 7, 7),
)
REAL_ORBIT_ROWS = (
    ("A-B-C", inv.representative("A-B-C").real, 4),
    ("A-BC", inv.representative("A-BC").real, 5),
    ("W", inv.representative("W").real, 7),
    ("GHZ q<0", inv.representative("GHZ").real, 7),
    ("GHZ q>0 [-++]", _real_ket({"000": 1, "011": -1, "101": 1, "110": 1}), 7),
    ("GHZ q>0 [---]", _real_ket({"000": 1, "011": -1, "101": -1, "110": -1}), 7),
)


def orbit_table(projective: bool = False, real: bool = False) -> list[dict]:
    rows = []
    if real:
        for name, s, expected in REAL_ORBIT_ROWS:
            r = slocc.real_orbit_rank(s)
            rows.append({"class": name, "computed": r.rank, "expected": expected, "gap": r.gap})
        return rows
    for name, s, dim, pdim in ORBIT_ROWS:
        if projective:
            r = slocc.projective_orbit_rank(s)
            rows.append({"class": name, "computed": r.rank - 1, "expected": pdim, "gap": r.gap})
        else:
            r = slocc.orbit_rank(s)
            rows.append({"class": name, "computed": r.rank, "expected": dim, "gap": r.gap})
    return rows


@main.command()
@click.option("--projective", is_flag=True, help="Projective orbit dimensions.")
@click.option("--real", is_flag=True, help="Real SL(2,R)^3 orbit dimensions of real representatives.")
@_fmt_opt
def orbits(projective, real, fmt):
    """Orbit dimensions at the class representatives next to the expected values."""
    if projective and real:
        raise click.UsageError("--projective and --real cannot be combined")
    try:
        rows = orbit_table(projective, real)
    except slocc.IndeterminateRankError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_AMBIGUOUS)
    if fmt == "json":
        click.echo(json.dumps([{**r, "gap": None if np.isinf(r["gap"]) else r["gap"]} for r in rows], indent=2))
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["class", "computed", "expected", "gap"])
        for r in rows:
            w.writerow([r["class"], r["computed"], r["expected"], "inf" if np.isinf(r["gap"]) else f"{r['gap']:.3e}"])
        click.echo(buf.getvalue(), nl=False)
    sys.exit(EXIT_OK if all(r["computed"] == r["expected"] for r in rows) else EXIT_INCONSISTENT)


@main.command()
def hierarchy():
    """Print the SLOCC class hierarchy as an edge list."""
    click.echo(clf.hierarchy_export(), nl=False)


if __name__ == "__main__":
    main()
