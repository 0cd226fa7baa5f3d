"""Command-line front end.

    acterwilliger scheme   SPEC [--emit report|tensor]
    acterwilliger twa      SPEC [--emit report|matrices|idempotents] [--dump-dir DIR]
    acterwilliger classify SPEC [--deep-verify]
    acterwilliger batch    [FILE | --catalog] [--jobs N]

SPEC is a JSON family spec, given inline or as a path to a JSON file.
Exit codes: 0 success, 1 verification failure or inconsistency,
2 usage or spec error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from .catalog import CATALOG_SPECS, SpecError, from_spec
from .classify import PreconditionUnmet, camina_pair_conditions, camina_structure_checks, cross_check
from .groups import DEFAULT_MAX_ORDER, ClosureLimitExceeded, GroupError, derived_subgroup
from .linalg import RatMatrix, format_rat
from .scheme import build_scheme, is_almost_commutative, verify_scheme_axioms
from .terwilliger import (
    DEFAULT_MAX_ENTRIES,
    DimensionLimitExceeded,
    InternalInconsistency,
    terwilliger_basis,
    wedderburn_report,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

EMIT_CHOICES = {
    "scheme": ("report", "tensor"),
    "twa": ("report", "matrices", "idempotents"),
    "classify": ("report",),
}


@dataclass
class RunConfig:
    group_spec: Dict[str, Any]
    max_order: int = DEFAULT_MAX_ORDER
    emit: str = "report"
    output_path: Optional[str] = None
    deep_verify: bool = False
    dump_dir: Optional[str] = None
    max_entries: int = DEFAULT_MAX_ENTRIES

    def __post_init__(self):
        if self.max_order < 1:
            raise SpecError("--max-order must be at least 1")
        if not self.emit:
            raise SpecError("--emit must be nonempty")


def load_spec(text: str) -> Any:
    """Parse a spec given inline or as a path to a JSON file."""
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec is neither a JSON document nor a readable file: {exc}") from None


def _dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _matrix_json(m: RatMatrix) -> List[List[str]]:
    return [[format_rat(x) for x in m.row(r)] for r in range(m.rows)]


def _dump_matrices(dump_dir: str, stem: str, mats: Sequence[RatMatrix]) -> List[str]:
    os.makedirs(dump_dir, exist_ok=True)
    names = []
    for k, m in enumerate(mats):
        name = f"{stem}_{k:03d}.csv"
        with open(os.path.join(dump_dir, name), "w", encoding="utf-8", newline="") as fh:
            fh.write(m.to_csv())
        names.append(name)
    return names


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_scheme(cfg: RunConfig) -> tuple[Dict[str, Any], int]:
    g = from_spec(cfg.group_spec, max_order=cfg.max_order)
    s = build_scheme(g, check_representatives=cfg.deep_verify)
    ac = is_almost_commutative(s)
    out: Dict[str, Any] = {
        "group": g.label,
        "order": g.order,
        "d": s.d,
        "class_sizes": list(s.class_sizes),
        "triples": s.triple_count(),
        "ac": ac.holds,
        "ac_witness": list(ac.witness) if ac.witness else None,
    }
    code = EXIT_OK
    if cfg.deep_verify:
        axioms = verify_scheme_axioms(s)
        out["axioms"] = axioms
        if not all(axioms.values()):
            code = EXIT_FAIL
    if cfg.emit == "tensor":
        out["tensor"] = [[i, j, k, v] for (i, j, k), v in sorted(s.p_tensor.items())]
    return out, code


def cmd_twa(cfg: RunConfig) -> tuple[Dict[str, Any], int]:
    g = from_spec(cfg.group_spec, max_order=cfg.max_order)
    scheme = build_scheme(g)
    report = wedderburn_report(g, max_entries=cfg.max_entries, scheme=scheme)
    out = report.to_json()
    if cfg.emit == "idempotents":
        mats = report.idempotents
        if cfg.dump_dir:
            out["idempotent_files"] = _dump_matrices(cfg.dump_dir, "idempotent", mats)
        else:
            out["idempotents"] = [_matrix_json(m) for m in mats]
    elif cfg.emit == "matrices":
        mats = terwilliger_basis(scheme, max_entries=cfg.max_entries).matrices()
        if cfg.dump_dir:
            out["t_basis_files"] = _dump_matrices(cfg.dump_dir, "t_basis", mats)
        else:
            out["t_basis"] = [_matrix_json(m) for m in mats]
    ok = all(report.checks.values())
    return out, EXIT_OK if ok else EXIT_FAIL


def _classify_json(cc: Dict[str, Any]) -> Dict[str, Any]:
    v = cc["verdict"]
    w = cc["ac_witness"]
    return {
        "group": cc["group"],
        "order": cc["order"],
        "verdict": v.to_json(),
        "predicted": v.predicted_ac,
        "measured": cc["measured_ac"],
        "ac_witness": [w[0], w[1], w[2]] if w else None,
        "class_product_property": cc["class_product_property"],
        "class_product_witness": list(cc["class_product_witness"]) if cc["class_product_witness"] else None,
        "consistent": cc["consistent"],
    }


def cmd_classify(cfg: RunConfig) -> tuple[Dict[str, Any], int]:
    g = from_spec(cfg.group_spec, max_order=cfg.max_order)
    scheme = build_scheme(g)
    cc = cross_check(g, scheme=scheme)
    out = _classify_json(cc)
    ok = cc["consistent"]
    if cfg.deep_verify:
        v = cc["verdict"]
        if v.is_camina and not v.is_abelian:
            try:
                checks = camina_structure_checks(g)
            except PreconditionUnmet:
                checks = {}
            out["camina_structure"] = checks
            ok = ok and all(x for x in checks.values() if isinstance(x, bool))
        dg = derived_subgroup(g)
        if len(dg) > 1:
            pair = camina_pair_conditions(g, dg, deep=True, scheme=scheme)
            out["camina_pair_conditions"] = pair
            ok = ok and len(set(pair.values())) == 1 and pair["pair"] == v.is_camina
    return out, EXIT_OK if ok else EXIT_FAIL


BATCH_COLUMNS = ["index", "name", "spec", "order", "classes", "triples", "predicted_ac",
                 "measured_ac", "class_product_property", "consistent", "error"]


def _batch_row(job: tuple) -> Dict[str, Any]:
    index, name, spec, max_order = job
    row: Dict[str, Any] = {"index": index, "name": name,
                           "spec": json.dumps(spec, sort_keys=True)}
    try:
        g = from_spec(spec, max_order=max_order)
        scheme = build_scheme(g)
        cc = cross_check(g, scheme=scheme)
    except SpecError:
        raise
    except (GroupError, ValueError, DimensionLimitExceeded) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    row.update(order=g.order, classes=scheme.n_classes, triples=scheme.triple_count(),
               predicted_ac=cc["verdict"].predicted_ac, measured_ac=cc["measured_ac"],
               class_product_property=cc["class_product_property"],
               consistent=cc["consistent"], error="")
    return row


def _batch_entries(data: Any) -> List[tuple]:
    if isinstance(data, dict) and "family" not in data:
        return [(str(k), v) for k, v in data.items()]
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise SpecError("batch input must be a JSON list of specs or a name -> spec object")
    out = []
    for k, spec in enumerate(data):
        if not isinstance(spec, dict) or "family" not in spec:
            raise SpecError(f"batch entry {k} is not a family spec")
        out.append((str(spec.get("name", k)), spec))
    return out


def cmd_batch(entries: List[tuple], max_order: int, jobs: int) -> tuple[str, int]:
    work = [(k, name, {key: v for key, v in spec.items() if key != "name"}, max_order)
            for k, (name, spec) in enumerate(entries)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_batch_row, work))
    else:
        rows = [_batch_row(w) for w in work]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BATCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    code = EXIT_OK
    if any(r.get("error") for r in rows):
        code = EXIT_LIMIT
    if any(r.get("consistent") is False for r in rows):
        code = EXIT_FAIL
    return buf.getvalue(), code


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acterwilliger",
        description="Group association schemes, Terwilliger algebras and the "
                    "almost-commutative classification, in exact arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER,
                       help="refuse groups larger than this (default %(default)s)")
        p.add_argument("--out", help="write output here instead of stdout")

    for name, help_text in (("scheme", "conjugacy classes, intersection numbers, AC verdict"),
                            ("twa", "Terwilliger algebra dimensions and Wedderburn split"),
                            ("classify", "family prediction vs measured AC verdict")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("spec", help="JSON family spec, inline or a file path")
        common(p)
        p.add_argument("--emit", choices=EMIT_CHOICES[name], default="report")
        p.add_argument("--deep-verify", action="store_true",
                       help="run the slower independent checks as well")
        if name == "twa":
            p.add_argument("--dump-dir", "--dump-matrices", dest="dump_dir", help="write emitted matrices as CSV files here")
            p.add_argument("--max-entries", type=int, default=DEFAULT_MAX_ENTRIES,
                           help="cap on dim(T) * |G|^2 (default %(default)s)")

    p = sub.add_parser("batch", help="CSV census over many specs")
    p.add_argument("file", nargs="?", help="JSON list of specs (or name -> spec object)")
    p.add_argument("--catalog", action="store_true", help="use the built-in test catalog")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    return parser


def _write(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "batch":
            if args.catalog == bool(args.file):
                raise SpecError("give exactly one of FILE or --catalog")
            if args.jobs < 1:
                raise SpecError("--jobs must be at least 1")
            if args.max_order < 1:
                raise SpecError("--max-order must be at least 1")
            entries = (list(CATALOG_SPECS.items()) if args.catalog
                       else _batch_entries(load_spec(args.file)))
            text, code = cmd_batch(entries, args.max_order, args.jobs)
            _write(text, args.out)
            return code
        cfg = RunConfig(group_spec=load_spec(args.spec), max_order=args.max_order,
                        emit=args.emit, output_path=args.out, deep_verify=args.deep_verify,
                        dump_dir=getattr(args, "dump_dir", None),
                        max_entries=getattr(args, "max_entries", DEFAULT_MAX_ENTRIES))
        handler = {"scheme": cmd_scheme, "twa": cmd_twa, "classify": cmd_classify}[args.command]
        out, code = handler(cfg)
        _write(_dumps(out), cfg.output_path)
        return code
    except (ClosureLimitExceeded, DimensionLimitExceeded) as exc:
        print(f"error: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InternalInconsistency as exc:
        print(f"error: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SpecError, GroupError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
