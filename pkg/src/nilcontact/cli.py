"""Command line front end.

    nilcontact check FILE [--lambda P/Q] [--format text|json|csv] [--output PATH]
    nilcontact catalog verify [--format text|json|csv] [--output PATH]
    nilcontact generic-poly FILE ENTRY_ID

Exit codes: 0 ok, 2 usage or parse error, 3 Jacobi failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .catalog import (
    CatalogEntry,
    ParseError,
    catalog_dir,
    embedded_catalog,
    parse_entries,
    verify,
)
from .contact import family_analysis, find_contact_form, generic_contact_polynomial
from .liealg import jacobi_defect, rational_in_given_basis, specialize, upper_central_series
from .scalars import UniPoly, format_rational

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_JACOBI = 3
EXIT_VERIFY = 4

CSV_COLUMNS = ["id", "jacobi", "upper_dims", "verdict", "witness", "top_coeff"]


class UsageError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def resolve_path(path: str) -> Path:
    """Plain path, or ``catalog/NAME`` inside the shipped data directory."""
    p = Path(path)
    if p.exists():
        return p
    if p.parts and p.parts[0] == "catalog" and len(p.parts) > 1:
        alt = catalog_dir().joinpath(*p.parts[1:])
        if alt.exists():
            return alt
    raise UsageError(f"no such file: {path}")


def read_entries(path: str) -> tuple[list[CatalogEntry], str]:
    p = resolve_path(path)
    data = p.read_bytes()
    digest = "sha256:" + hashlib.sha256(data).hexdigest()
    try:
        return parse_entries(data.decode("utf-8")), digest
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    except (ValueError, IndexError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _scalar_text(v, param: str | None) -> str:
    if isinstance(v, UniPoly):
        return format_rational(v.constant_value()) if v.is_constant() else v.format(param or "lambda")
    return format_rational(v)


def _dims_text(dims) -> str:
    return "(" + ",".join(map(str, dims)) + ")"


def analyze_entry(entry: CatalogEntry, lam: Fraction | None) -> dict:
    """Everything ``check`` reports for one entry, as a JSON-ready dict."""
    g = entry.algebra
    out: dict = {
        "id": entry.id,
        "dim": g.dim,
        "parametric": g.parametric,
        "brackets": g.format_brackets(),
        "lambda": None,
        "series": None,
        "contact": None,
        "notes": [],
    }
    defects = jacobi_defect(g)
    out["jacobi"] = "ok" if not defects else "fail"
    out["defects"] = [
        {"triple": list(t), "value": [_scalar_text(c, g.param) for c in v]} for t, v in sorted(defects.items())
    ]
    if defects:
        return out
    rational = rational_in_given_basis(g, lam)
    out["rational_basis"] = rational if (not g.parametric or lam is not None) else "depends on lambda"
    target = g
    if g.parametric and lam is not None:
        out["lambda"] = format_rational(lam)
        if not entry.admissible(lam):
            out["notes"].append(f"lambda = {format_rational(lam)} violates {entry.lambda_constraints}")
        target = specialize(g, lam)
    if target.parametric:
        out["notes"].append("upper central series: specialize lambda first")
    else:
        out["series"] = upper_central_series(target).to_json()
    if g.dim % 2 == 0:
        out["notes"].append("even dimension: no contact analysis")
        return out
    report = family_analysis(target) if target.parametric else find_contact_form(target)
    out["contact"] = report.to_json()
    out["contact"]["witness_form"] = report.witness_text()
    out["contact"]["top_coefficient_text"] = _scalar_text(report.top_coefficient, g.param)
    return out


def _text_line(rec: dict) -> str:
    parts = [f"{rec['id']}: dim {rec['dim']}", f"jacobi {rec['jacobi']}"]
    if rec["jacobi"] != "ok":
        triples = "; ".join(
            f"({','.join(map(str, d['triple']))}) defect [{', '.join(d['value'])}]" for d in rec["defects"]
        )
        return ", ".join(parts) + f", failing triples {triples}"
    if rec["lambda"] is not None:
        parts.append(f"lambda={rec['lambda']}")
    if rec["series"] is not None:
        parts.append("upper dims " + _dims_text(rec["series"]["upper_dims"]))
    c = rec["contact"]
    if c is not None:
        parts.append(c["verdict"])
        if c["witness"] is not None:
            parts.append(f"witness {c['witness_form']}")
            parts.append(f"top coefficient {c['top_coefficient_text']}")
        if "exceptional_lambda" in c:
            ex = c["exceptional_lambda"]
            parts.append("exceptional lambda {" + ", ".join(ex["rational"]) + "}")
            if len(ex["residual"]) > 1:
                parts.append("plus roots of " + str(UniPoly.from_json(ex["residual"])))
    line = ", ".join(parts)
    for note in rec["notes"]:
        line += f"\n    note: {note}"
    return line


def _csv(rows: list[list[str]], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    entries, digest = read_entries(args.file)
    records = [analyze_entry(e, args.lam) for e in entries]
    if args.format == "json":
        text = dumps({"entries": records, "input_digest": digest, "tool": "nilcontact", "version": __version__})
    elif args.format == "csv":
        rows = []
        for r in records:
            c = r["contact"] or {}
            rows.append([
                r["id"],
                r["jacobi"],
                "" if r["series"] is None else _dims_text(r["series"]["upper_dims"]),
                c.get("verdict", ""),
                c.get("witness_form", "") if c.get("witness") else "",
                c.get("top_coefficient_text", "") if c else "",
            ])
        text = _csv(rows, CSV_COLUMNS)
    else:
        text = "".join(_text_line(r) + "\n" for r in records)
    _emit(text, args.output)
    return EXIT_JACOBI if any(r["jacobi"] != "ok" for r in records) else EXIT_OK


def _verify_dims(e) -> str:
    dims = set(e.computed_dims.values())
    if len(dims) == 1:
        return _dims_text(next(iter(dims)))
    return "; ".join(
        f"{'generic' if k is None else format_rational(k)}:{_dims_text(v)}" for k, v in e.computed_dims.items()
    )


def cmd_catalog_verify(args) -> int:
    entries = embedded_catalog()
    result = verify(entries)
    if args.format == "json":
        body = result.to_json()
        body.update({"tool": "nilcontact", "version": __version__})
        text = dumps(body)
    elif args.format == "csv":
        rows = []
        for e in result.entries:
            rep = e.report
            rows.append([
                e.id,
                "ok" if e.jacobi_ok else "fail",
                _verify_dims(e),
                "" if rep is None else rep.verdict,
                "" if rep is None or rep.witness is None else rep.witness_text(),
                "" if rep is None or rep.witness is None else _scalar_text(rep.top_coefficient, "lambda"),
                "pass" if e.passed else "FAIL",
            ])
        text = _csv(rows, CSV_COLUMNS + ["status"])
    else:
        lines = []
        for e in result.entries:
            rep = e.report
            status = "pass" if e.passed else "FAIL"
            desc = f"{status}  {e.id}: upper dims {_verify_dims(e)}"
            if rep is not None:
                desc += f", {rep.verdict}"
                if rep.witness is not None:
                    desc += f", witness {rep.witness_text()}"
            lines.append(desc)
            lines.extend(f"      - {f}" for f in e.failures)
            lines.extend(f"      note: {n}" for n in e.notes)
        lines.append(result.summary())
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if result.ok else EXIT_VERIFY


def cmd_generic_poly(args) -> int:
    entries, _ = read_entries(args.file)
    for e in entries:
        if e.id == args.entry_id:
            try:
                poly = generic_contact_polynomial(e.algebra)
            except ValueError as exc:
                raise UsageError(f"{e.id}: {exc}") from exc
            _emit(poly.format(e.algebra.param or "lambda") + "\n", args.output)
            return EXIT_OK
    known = ", ".join(e.id for e in entries)
    raise UsageError(f"unknown entry id {args.entry_id!r} (file defines: {known})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilcontact",
        description="Decide contact structures on nilpotent Lie algebras with exact arithmetic.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_lambda=False):
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--output", metavar="PATH")
        if with_lambda:
            p.add_argument("--lambda", dest="lam", type=_rational_arg, metavar="P/Q",
                           help="specialize one-parameter families at this value")

    p = sub.add_parser("check", help="analyze every entry of an .nla file")
    p.add_argument("file")
    common(p, with_lambda=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("catalog", help="operations on the shipped classification")
    csub = p.add_subparsers(dest="catalog_command", required=True)
    v = csub.add_parser("verify", help="re-derive every shipped entry")
    common(v)
    v.set_defaults(func=cmd_catalog_verify)

    p = sub.add_parser("generic-poly", help="print the generic contact polynomial of one entry")
    p.add_argument("file")
    p.add_argument("entry_id")
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(func=cmd_generic_poly)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"nilcontact: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
