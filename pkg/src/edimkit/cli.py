"""Command-line front end: group ingestion, queries, facts and cache admin.

Every command prints a single JSON document on stdout.  Exit codes: 0 on
success, 2 on input errors (with a machine-readable {error, detail} payload),
3 when a query is out of the certified scope.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .abelian import structure
from .chartab import character_table, _cache_path
from .engine import FactStore, covdim, edim
from .errors import EdimkitError, FactConflict, OutOfScope, ParseError
from .fields import (
    is_semi_faithful,
    k_center,
    parse_field,
    supports_splitting,
)
from .groups import FiniteGroup
from .mhom import OneParamSubgroup, homogenize, map_from_json
from .named import load_group
from .repdim import rdim


def _print(payload: dict, pretty: bool) -> None:
    if pretty:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(json.dumps(payload, sort_keys=True,
                                    separators=(",", ":")) + "\n")


def _load_group(path: str) -> FiniteGroup:
    if not os.path.exists(path):
        raise ParseError(f"group file not found: {path}")
    return load_group(path)


def _field(args) -> "FieldDescriptor":
    return parse_field(args.field)


def _facts(args) -> FactStore:
    store = FactStore()
    if getattr(args, "facts", None):
        store.merge(FactStore.load(args.facts))
    return store


def _trace_strings(result) -> list:
    out = []
    for rule, citation, detail, bound in result.trace:
        out.append(f"{rule}: {citation} [{detail}] => {bound}")
    return out


# ---------------------------------------------------------------------------
# verbs


def cmd_invariants(args) -> dict:
    g = _load_group(args.group)
    f = _field(args)
    feet = g.feet()
    soc = g.socle()
    zk = k_center(g, f)
    return {
        "order": g.order,
        "exponent": g.exponent(),
        "abelian": g.is_abelian(),
        "n_classes": len(g.conjugacy_classes()),
        "center_order": g.center().order,
        "commutator_order": g.commutator_subgroup().order,
        "feet": sorted(ft.order for ft in feet),
        "socle_order": soc.order,
        "socle_abelian": soc.is_abelian(),
        "socle_central": soc.is_central(),
        "k_center_order": zk.order,
        "k_center_rank": structure(zk).rank(),
        "semi_faithful": is_semi_faithful(g, f),
        "supports_splitting": supports_splitting(g, f),
        "field": f.spec(),
        "fingerprint": g.fingerprint(with_generators=False),
    }


def cmd_chartab(args) -> dict:
    g = _load_group(args.group)
    table = character_table(g, cache_dir=args.cache_dir,
                            use_cache=not args.no_cache)
    out = {
        "order": g.order,
        "n_classes": table.n_classes,
        "conductor": table.conductor,
        "degrees": table.degrees,
        "class_sizes": table.class_sizes,
    }
    if args.full:
        out["values"] = [[v.serialize() for v in row] for row in table.values]
    return out


def cmd_rdim(args) -> dict:
    g = _load_group(args.group)
    f = _field(args)
    w = rdim(g, f)
    return w.as_dict()


def cmd_edim(args) -> dict:
    g = _load_group(args.group)
    f = _field(args)
    r = edim(g, f, facts=_facts(args), subgroups=args.subgroups)
    out = r.as_dict()
    out["trace"] = _trace_strings(r)
    return out


def cmd_covdim(args) -> dict:
    g = _load_group(args.group)
    f = _field(args)
    r = covdim(g, f, facts=_facts(args), subgroups=args.subgroups)
    out = r.as_dict()
    out["trace"] = _trace_strings(r)
    return out


def cmd_mhom(args) -> dict:
    if args.action != "homogenize":
        raise ParseError(f"unknown mhom action {args.action!r}")
    if not os.path.exists(args.file):
        raise ParseError(f"covariant file not found: {args.file}")
    with open(args.file, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    phi, _, _ = map_from_json(data)
    lam = None
    if args.lam:
        try:
            weights = tuple(int(t) for t in args.lam.split(","))
        except ValueError:
            raise ParseError(f"bad --lambda value {args.lam!r}") from None
        lam = OneParamSubgroup(weights)
    h, m = homogenize(phi, lam)
    names = data.get("source_variables") or phi.source.variable_names()
    return {
        "H": [p.render(names) for p in h.numerators],
        "denominator": h.denominator.render(names),
        "M": m.as_lists(),
        "rank": m.rank(),
        "zero_columns": sorted(m.zero_columns),
    }


def cmd_facts(args) -> dict:
    if args.action == "merge":
        if args.new is None:
            raise ParseError("facts merge needs a second file")
        store = FactStore()
        if os.path.exists(args.store):
            store.merge(FactStore.load(args.store))
        store.merge(FactStore.load(args.new))
        store.save(args.store)
        return {"merged": len(store.data), "store": args.store}
    if args.action == "show":
        store = FactStore.load(args.store)
        return {"facts": store.serialize()}
    raise ParseError(f"unknown facts action {args.action!r}")


def cmd_cache(args) -> dict:
    base = _cache_path.__globals__  # reuse the same resolution as chartab
    directory = args.cache_dir or os.environ.get("EDIMKIT_CACHE") or \
        os.path.join(os.path.expanduser("~"), ".cache", "edimkit")
    if args.action == "path":
        return {"cache_dir": directory}
    if args.action == "clear":
        removed = 0
        p = Path(directory)
        if p.is_dir():
            for item in sorted(p.glob("chartab_*.json")):
                item.unlink()
                removed += 1
        return {"cache_dir": directory, "removed": removed}
    raise ParseError(f"unknown cache action {args.action!r}")


# ---------------------------------------------------------------------------
# argument grammar


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="edimkit",
        description="exact representation invariants and essential-dimension "
                    "bounds for finite groups")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True)

    def add_common(p, field=True, facts=False):
        if field:
            p.add_argument("--field", default="Q", help="field spec, e.g. "
                           "Q, Q(zeta_12), algclosed:0, char=2;zeta=7")
        p.add_argument("--pretty", action="store_true")
        if facts:
            p.add_argument("--facts", default=None,
                           help="JSON facts file with literature intervals")
            p.add_argument("--subgroups", default="cyclic",
                           choices=["cyclic", "all"],
                           help="subgroup enumeration for lower bounds")

    p = sub.add_parser("invariants", help="structural invariants of a group")
    p.add_argument("group")
    add_common(p)
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("chartab", help="exact character table")
    p.add_argument("group")
    p.add_argument("--full", action="store_true", help="include all values")
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--no-cache", action="store_true")
    add_common(p, field=False)
    p.set_defaults(fn=cmd_chartab)

    p = sub.add_parser("rdim", help="minimal faithful representation dimension")
    p.add_argument("group")
    add_common(p)
    p.set_defaults(fn=cmd_rdim)

    p = sub.add_parser("edim", help="essential-dimension interval")
    p.add_argument("group")
    add_common(p, facts=True)
    p.set_defaults(fn=cmd_edim)

    p = sub.add_parser("covdim", help="covariant-dimension interval")
    p.add_argument("group")
    add_common(p, facts=True)
    p.set_defaults(fn=cmd_covdim)

    p = sub.add_parser("mhom", help="multihomogenization of a graded map")
    p.add_argument("action", choices=["homogenize"])
    p.add_argument("file")
    p.add_argument("--lambda", dest="lam", default=None,
                   help="comma-separated one-parameter subgroup weights")
    add_common(p, field=False)
    p.set_defaults(fn=cmd_mhom)

    p = sub.add_parser("facts", help="manage a facts store")
    p.add_argument("action", choices=["merge", "show"])
    p.add_argument("store")
    p.add_argument("new", nargs="?")
    add_common(p, field=False)
    p.set_defaults(fn=cmd_facts)

    p = sub.add_parser("cache", help="character-table cache admin")
    p.add_argument("action", choices=["path", "clear"])
    p.add_argument("--cache-dir", default=None)
    add_common(p, field=False)
    p.set_defaults(fn=cmd_cache)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    pretty = getattr(args, "pretty", False)
    try:
        payload = args.fn(args)
    except OutOfScope as exc:
        _print({"error": "out_of_scope", "detail": str(exc)}, pretty)
        return 3
    except (EdimkitError, FactConflict, OSError, ValueError,
            json.JSONDecodeError) as exc:
        _print({"error": type(exc).__name__, "detail": str(exc)}, pretty)
        return 2
    _print(payload, pretty)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
