"""Command line front end: ``verify``, ``expand`` and ``gk``.

Configuration precedence is flags > the key=value file named by the
``JACRINGS_CONFIG`` environment variable > built-in defaults (g=2, d=0).
Exit codes: 0 success, 1 some identity failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .cbul_model import CBulModel
from .cinf_model import CInfModel
from .jac_model import JacobianRing, ModelConfig
from .pdpoly import PDError, to_json, to_text
from .suites import SUITES, run_suite

DEFAULTS = {"g": 2, "d": 0, "suite": "all", "u_cap": None, "seed": 0, "jobs": 1,
            "ddeg": 2, "r": 1}
INT_KEYS = {"g", "d", "u_cap", "seed", "jobs", "ddeg", "r"}
G_RANGE = range(1, 6)
D_RANGE = range(0, 3)


class UsageError(Exception):
    pass


def read_env_config() -> dict:
    path = os.environ.get("JACRINGS_CONFIG")
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read JACRINGS_CONFIG file {path}: {exc}") from exc
    out = {}
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"bad config line {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        if key in INT_KEYS:
            try:
                out[key] = int(val)
            except ValueError as exc:
                raise UsageError(f"config key {key} needs an integer") from exc
        else:
            out[key] = val
    return out


def resolve(args: argparse.Namespace, keys) -> dict:
    env = read_env_config()
    cfg = {}
    for k in keys:
        v = getattr(args, k, None)
        cfg[k] = v if v is not None else env.get(k, DEFAULTS[k])
    if "g" in cfg and cfg["g"] not in G_RANGE:
        raise UsageError(f"g must lie in 1..5 (got {cfg['g']})")
    if "d" in cfg and cfg["d"] not in D_RANGE:
        raise UsageError(f"d must lie in 0..2 (got {cfg['d']})")
    if cfg.get("u_cap") is not None and cfg["u_cap"] < 1:
        raise UsageError("u-cap must be positive")
    if cfg.get("jobs", 1) < 1:
        raise UsageError("jobs must be positive")
    return cfg


def dump(obj, out_path: str | None):
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- verify

def generator_table(jac: JacobianRing) -> dict:
    def rows(ring):
        return [{"name": gd.name, "dim": gd.dim, "coweight": gd.coweight, "grade": gd.grade}
                for gd in ring.gens]
    return {"coweight_basis": rows(jac.ring), "grade_basis": rows(jac.gring)}


def build_report(cfg: dict) -> dict:
    suites = list(SUITES) if cfg["suite"] == "all" else [cfg["suite"]]
    jobs = [(s, cfg["g"], cfg["d"], cfg["seed"], cfg["u_cap"]) for s in suites]
    if cfg["jobs"] > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg["jobs"]) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(j) for j in jobs]
    records = []
    for suite, recs in zip(suites, results):
        for r in recs:
            records.append({"suite": suite, **r})
    summary = {s: 0 for s in ("exact", "holds-mod-psi", "failed", "skipped")}
    for r in records:
        key = "holds-mod-psi" if r["status"].startswith("holds-mod-psi") else r["status"]
        summary[key] += 1
    jac = JacobianRing(ModelConfig(cfg["g"], cfg["d"], ("p1",), u_cap=cfg["u_cap"]))
    return {
        "tool": "jacrings",
        "version": __version__,
        "config": {"g": cfg["g"], "d": cfg["d"], "suite": cfg["suite"], "seed": cfg["seed"],
                   "u_cap": cfg["u_cap"], "psi_order": jac.window.psi_order},
        "generators": generator_table(jac),
        "records": records,
        "u_cap_hit": any(r.get("u_cap_hit") for r in records),
        "summary": summary,
    }


def _run_job(job):
    suite, g, d, seed, u_cap = job
    return run_suite(suite, g, d, seed=seed, u_cap=u_cap)


def strip_timing(report: dict) -> dict:
    """Copy of a report without the ``elapsed`` fields (for golden comparison)."""
    out = dict(report)
    out["records"] = [{k: v for k, v in r.items() if k != "elapsed"} for r in report["records"]]
    return out


def cmd_verify(args) -> int:
    cfg = resolve(args, ("g", "d", "suite", "u_cap", "seed", "jobs"))
    if cfg["suite"] not in SUITES + ("all",):
        raise UsageError(f"unknown suite {cfg['suite']!r}")
    report = build_report(cfg)
    if args.json or args.out:
        dump(report, args.out)
    if not args.json:
        for r in report["records"]:
            line = f"{r['status']:<18} {r['suite']}/{r['name']}  ({r['elapsed']:.3f}s)"
            if r["status"] == "failed" and r["witness"]:
                line += f"\n    witness: {r['witness']}"
            print(line)
        s = report["summary"]
        print(f"exact {s['exact']}, holds-mod-psi {s['holds-mod-psi']}, "
              f"failed {s['failed']}, skipped {s['skipped']}")
    return 1 if report["summary"]["failed"] else 0


# ---------------------------------------------------------------- expand

CLASS_RE = re.compile(r"^(L|Gamma|C|Cn|Delta|GammaN|GammaNat|fa)(?::(.*))?$")


def parse_class(name: str):
    """'Delta:3:p1' -> ('Delta', 3, 'p1').  Class argument defaults to C."""
    m = CLASS_RE.match(name)
    if not m:
        raise UsageError(f"unknown class {name!r}")
    head, rest = m.group(1), m.group(2)
    parts = rest.split(":") if rest else []
    if head in ("L", "Gamma", "C"):
        if parts:
            raise UsageError(f"class {head} takes no arguments")
        return head, None, None
    if head == "fa":
        if len(parts) != 1 or not parts[0]:
            raise UsageError("fa needs a class argument, e.g. fa:C or fa:p1")
        return head, None, parts[0]
    if not parts or len(parts) > (1 if head == "Cn" else 2):
        raise UsageError(f"bad arguments for {head}")
    try:
        n = int(parts[0])
    except ValueError as exc:
        raise UsageError(f"{head} needs an integer index") from exc
    if n < 0:
        raise UsageError("class index must be >= 0")
    return head, n, (parts[1] if len(parts) > 1 else "C")


def expand_class(name: str, coords: str, g: int, d: int, u_cap=None):
    head, n, a = parse_class(name)
    points = ("p1",)
    if a not in (None, "C", "p0") and a not in points:
        if not re.match(r"^[A-Za-z][A-Za-z0-9]*$", a):
            raise UsageError(f"bad point name {a!r}")
        points = points + (a,)
    jac = JacobianRing(ModelConfig(g, d, points, u_cap=u_cap))
    ci = CInfModel(jac)
    cb = CBulModel(ci)
    if head in ("Delta", "GammaN", "GammaNat"):
        spec = jac.spec(a)
        X = {"Delta": cb.Delta_push, "GammaN": cb.Gamma_n, "GammaNat": cb.Gamma_nat}[head](n, spec)
        if coords == "x":
            return cb.q_push(X)
        return cb.to_beta(X) if coords == "u" else X
    if head == "Cn":
        F = ci.class_Cn(n)
    elif head == "fa":
        spec = jac.spec(a)
        F = ci.fa_build(spec.iota, spec.p0star)
    else:
        F = ci.class_named(head)
    if coords == "x":
        return F
    G = ci.x_to_u(F)
    return G if coords == "u" else cb.to_gamma(G)


def cmd_expand(args) -> int:
    cfg = resolve(args, ("g", "d", "u_cap"))
    el = expand_class(args.cls, args.coords, cfg["g"], cfg["d"], cfg["u_cap"])
    if args.json:
        dump({"class": args.cls, "coords": args.coords, "g": cfg["g"], "d": cfg["d"],
              "element": to_json(el)}, args.out)
    else:
        text = to_text(el) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- gk

RING_OF_KIND = {"id1": "bullet", "cor2": "bullet", "cor3": "bullet", "cor4": "bullet",
                "id2": "jacobian", "cor1": "jacobian"}

NOTES = {
    "cor1": "vanishes modulo algebraic equivalence only",
    "cor2": "holds because D moves in a pencil",
}


def relation_set(g: int, ddeg: int, r: int, u_cap=None, flavor: str | None = None) -> dict:
    from .gk import DivisorSpec, GKModel
    if ddeg < 1 or not 1 <= r <= ddeg:
        raise UsageError("need ddeg >= 1 and 1 <= r <= ddeg")
    pts = tuple(f"p{i}" for i in range(1, ddeg + 1))
    jac = JacobianRing(ModelConfig(g, 0, pts, u_cap=u_cap))
    gk = GKModel(CBulModel(CInfModel(jac)), DivisorSpec(pts, r))
    rels = []
    for rel in (gk.gk_emit(flavor) if flavor else gk.emit()):
        kind = rel.kind
        entry = {"kind": kind, "N": rel.N, "s": rel.s, "ring": RING_OF_KIND[kind],
                 "label": f"{kind}[N={rel.N},s={rel.s}]", "element": to_json(rel.value)}
        if kind in NOTES:
            entry["note"] = NOTES[kind]
        entry["text"] = to_text(rel.value)
        rels.append(entry)
    return {"config": {"g": g, "ddeg": ddeg, "r": r, "points": list(pts)},
            "hypothesis": f"h^0(p1 + ... + p{ddeg}) >= {r + 1}",
            "relations": rels}


def cmd_gk(args) -> int:
    cfg = resolve(args, ("g", "ddeg", "r", "u_cap"))
    rs = relation_set(cfg["g"], cfg["ddeg"], cfg["r"], cfg["u_cap"], args.flavor)
    emit = "json" if args.json else args.emit
    if emit == "json":
        dump(rs, args.out)
        return 0
    lines = [f"# g={cfg['g']} ddeg={cfg['ddeg']} r={cfg['r']}; assuming {rs['hypothesis']}"]
    for rel in rs["relations"]:
        note = f"   [{rel['note']}]" if "note" in rel else ""
        lines.append(f"{rel['label']} ({rel['ring']}): {rel['text']} = 0{note}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- entry

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jacrings", description="Exact Chow ring calculus "
                                "for Jacobians and their symmetric-power towers.")
    p.add_argument("--version", action="version", version=f"jacrings {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, with_d=True):
        sp.add_argument("--g", type=int)
        if with_d:
            sp.add_argument("--d", type=int)
        sp.add_argument("--u-cap", dest="u_cap", type=int)
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--json", action="store_true")

    v = sub.add_parser("verify", help="run identity suites")
    common(v)
    v.add_argument("--suite", choices=SUITES + ("all",))
    v.add_argument("--seed", type=int)
    v.add_argument("--jobs", type=int)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("expand", help="print a named class")
    common(e)
    e.add_argument("cls", metavar="CLASS",
                   help="L, Gamma, C, Cn:k, Delta:n[:a], GammaN:n[:a], GammaNat:n[:a], fa:a")
    e.add_argument("--coords", choices=("x", "u", "bullet"), default="x")
    e.set_defaults(func=cmd_expand)

    k = sub.add_parser("gk", help="emit divisor relations (field mode)")
    common(k, with_d=False)
    k.add_argument("--ddeg", type=int)
    k.add_argument("--r", type=int)
    k.add_argument("--emit", choices=("json", "text"), default="text")
    k.add_argument("--flavor", choices=("id1", "id2", "cor1", "cor2", "cor3", "cor4"),
                   help="only this relation family")
    k.set_defaults(func=cmd_gk)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"jacrings: error: {exc}", file=sys.stderr)
        return 2
    except PDError as exc:
        print(f"jacrings: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"jacrings: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
