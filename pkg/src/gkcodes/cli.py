"""Non-interactive batch front-end.

Subcommands:
    points   CSV/JSON export of the rational point table
    rrbasis  basis of L(G) for a family divisor, as atom-exponent records
    build    generator matrix file + JSON sidecar, byte-identical across runs
    table    one parameter-table row per family instance, everything measured
    aut      generator list, invariance verdicts, permutation closure orders
    verify   run the verification suites; nonzero exit on any failure

Field selection: --p and --e (q = p^e), or --q for prime powers.  All output
is deterministic for a fixed configuration: no timestamps, sorted JSON keys,
fixed coordinate order, seeded searches.
"""

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .fields import is_prime
from .curve import INFINITY, make_curve
from . import codes as cd
from . import divisors as dv
from . import riemann_roch as rr
from . import symmetry as sym
from . import verify as vf


@dataclass
class RunConfig:
    p: int
    e: int = 1
    family: str = None
    m: int = None
    s: int = 0
    planes: str = "auto"
    fmt: str = "json"
    suites: list = field(default_factory=list)
    threads: int = 1
    budget: int = 1 << 18
    force: bool = False
    out: str = None


def _parse_q(q):
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            e = 0
            qq = q
            while qq % p == 0:
                qq //= p
                e += 1
            if p**e == q:
                return p, e
            break
    raise ValueError(f"q = {q} is not a prime power")


def _config(args):
    if getattr(args, "q", None) is not None:
        p, e = _parse_q(args.q)
    else:
        p, e = args.p, args.e
    return RunConfig(
        p=p, e=e,
        family=getattr(args, "family", None),
        m=getattr(args, "m", None),
        s=getattr(args, "s", 0) or 0,
        planes=getattr(args, "planes", "auto"),
        fmt=getattr(args, "format", "json"),
        suites=(getattr(args, "suites", None) or "").split(",")
        if getattr(args, "suites", None) else [],
        threads=getattr(args, "threads", 1),
        budget=getattr(args, "budget", 1 << 18),
        force=getattr(args, "force", False),
        out=getattr(args, "out", None),
    )


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _spec_from_config(curve, cfg):
    if cfg.family is None or cfg.m is None:
        raise SystemExit("--family and --m are required for this subcommand")
    planes = cfg.planes
    if planes not in (None, "auto"):
        planes = (0,) + tuple(int(t) for t in str(planes).split(",") if t != "")
    else:
        planes = "auto"
    return cd.make_spec(curve, cfg.family, cfg.m, cfg.s, planes)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _field_header_line(curve):
    d = curve.tower.description()
    mods = ",".join(map(str, d["modulus"]))
    return f"# field: p={d['p']} e={d['e']} modulus={mods}"


def cmd_points(cfg):
    curve = make_curve(cfg.p, cfg.e)
    rows = curve.csv_rows()
    if cfg.fmt == "csv":
        lines = [_field_header_line(curve), "index,a,b,c,orbit"]
        lines += [f"{i},{a},{b},{c},{tag}" for i, a, b, c, tag in rows]
        _emit("\n".join(lines) + "\n", cfg.out)
    else:
        _emit(_json({"field": curve.tower.description(),
                     "n_points": curve.n_points,
                     "points": [list(r) for r in rows]}), cfg.out)
    return 0


def cmd_rrbasis(cfg):
    curve = make_curve(cfg.p, cfg.e)
    spec = _spec_from_config(curve, cfg)
    G, _ = cd.family_divisors(curve, spec)
    basis = rr.rr_basis(curve, G)
    funcs = []
    for f in basis.functions:
        funcs.append({
            "scalar": f.scalar,
            "atoms": [{"kind": A.kind, "params": list(A.data), "exp": e}
                      for A, e in f.powers],
        })
    _emit(_json({
        "field": curve.tower.description(),
        "divisor": G.to_records(curve),
        "dimension": basis.dimension,
        "certified": basis.certified,
        "functions": funcs,
    }), cfg.out)
    return 0


def _matrix_text(curve, code):
    tw = curve.tower
    desc = tw.description()
    planes = ",".join(str(c) for c in code.spec.planes) \
        if code.spec.family in ("Cbar", "Ctilde") else ""
    hdr = [
        "# gkcodes matrix v1",
        f"# field: p={desc['p']} e={desc['e']} "
        f"modulus={','.join(map(str, desc['modulus']))}",
        f"# family={code.spec.family} q={curve.q} m={code.spec.m} "
        f"s={code.spec.s} planes={planes}",
        f"# n={code.n} k={code.k} dstar={code.dstar}",
        f"# G: degree={code.G.degree} support={len(code.G.support())}",
        "# coords: " + " ".join(str(curve.point_id[P]) for P in code.places),
    ]
    body = [" ".join(str(int(v)) for v in row) for row in code.matrix]
    return "\n".join(hdr + body) + "\n"


def _build_rows_threaded(curve, spec, threads):
    """Generator matrix built row-parallel; row order fixes the output."""
    G, D = cd.family_divisors(curve, spec)
    basis = rr.rr_basis(curve, G)
    affine = [P for P in D if P is not INFINITY]
    n = len(D)
    for f in basis.functions:                 # warm atom-value caches
        for A, _ in f.powers:
            dv._atom_values_arr(curve, A)

    def one_row(f):
        row = np.zeros(n, dtype=np.int64)
        row[: len(affine)] = dv.evaluate_over(curve, f, affine)
        if len(affine) < n:
            row[n - 1] = dv.leading_coefficient(
                curve, f, INFINITY, G.weight(INFINITY))
        return row

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one_row, basis.functions))
    else:
        rows = [one_row(f) for f in basis.functions]
    return basis, G, tuple(D), np.array(rows, dtype=np.int64)


def cmd_build(cfg):
    curve = make_curve(cfg.p, cfg.e)
    spec = _spec_from_config(curve, cfg)
    from . import linalg
    dstar = cd.designed_distance(curve, spec)
    if dstar <= 0 and not cfg.force:
        raise SystemExit(f"designed distance {dstar} <= 0 (use --force)")
    basis, G, places, rows = _build_rows_threaded(curve, spec, cfg.threads)
    k = linalg.rank(curve.tower, rows)
    code = cd.LinearCode(curve, spec, rows, len(places), k, dstar, G, places,
                         basis)
    if k != basis.dimension:
        raise SystemExit("evaluation map is not injective for this range")
    out = cfg.out or f"{spec.family}_q{curve.q}_m{spec.m}"
    text = _matrix_text(curve, code)
    with open(out + ".matrix", "w") as fh:
        fh.write(text)
    lo, hi = cd.formula_m_range(curve, spec)
    sidecar = {
        "field": curve.tower.description(),
        "family": spec.family, "q": curve.q, "m": spec.m, "s": spec.s,
        "planes": list(spec.planes),
        "n": code.n, "k": code.k, "dstar": code.dstar,
        "deg_G": G.degree,
        "m_range": [lo, hi],
        "matrix_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }
    if spec.family in ("C", "Cprime", "Ctilde"):
        word = cd.witness_min_weight(curve, spec, code)
        sidecar["witness_weight"] = int(np.count_nonzero(word))
    with open(out + ".json", "w") as fh:
        fh.write(_json(sidecar))
    sys.stdout.write(f"wrote {out}.matrix and {out}.json\n")
    return 0


def cmd_table(cfg, with_aut=False):
    curve = make_curve(cfg.p, cfg.e)
    spec = _spec_from_config(curve, cfg)
    code = cd.build_code(curve, spec, force=cfg.force)
    row = cd.table_row(curve, spec, code)
    if with_aut:
        row["automorphisms"] = _aut_report(curve, spec, code, cfg.budget)
    _emit(_json(row), cfg.out)
    return 0


def _aut_report(curve, spec, code, budget):
    try:
        gens = sym.generators_for(curve, spec)
    except ValueError as exc:
        return {"error": str(exc)}
    verdicts = []
    geometric = []
    for g in gens:
        cmap = sym.induced_code_map(curve, g, code)
        verdicts.append({"generator": repr(g),
                         "preserves_code": sym.check_invariance(code, cmap)})
        if not isinstance(g, sym.FieldFrobenius):
            geometric.append(g)
    closure = sym.permutation_group_order(curve, geometric, budget=budget)
    out = {"generators": verdicts,
           "geometric_closure_order": closure.order,
           "closure_exact": closure.exact}
    if curve.n_points <= 1000:
        withf = sym.permutation_group_order(curve, gens, budget=budget)
        out["closure_with_frobenius"] = withf.order
        out["closure_with_frobenius_exact"] = withf.exact
    return out


def cmd_aut(cfg):
    curve = make_curve(cfg.p, cfg.e)
    spec = _spec_from_config(curve, cfg)
    code = cd.build_code(curve, spec, force=cfg.force)
    report = {
        "family": spec.family, "q": curve.q, "m": spec.m, "s": spec.s,
        "planes": list(spec.planes),
        "report": _aut_report(curve, spec, code, cfg.budget),
    }
    _emit(_json(report), cfg.out)
    return 0


def cmd_verify(cfg):
    import time
    t0 = time.time()
    records, ok = vf.run(cfg.p, cfg.e, cfg.suites or None)
    lines = [json.dumps(r, sort_keys=True) for r in records]
    summary = {
        "q": cfg.p**cfg.e,
        "checks": len(records),
        "failed": sum(1 for r in records if r["status"] != "pass"),
        "status": "pass" if ok else "fail",
        "wall_seconds": round(time.time() - t0, 2),
    }
    lines.append(json.dumps({"summary": summary}, sort_keys=True))
    _emit("\n".join(lines) + "\n", cfg.out)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_common(sp, family=False):
    sp.add_argument("--p", type=int, default=2, help="field characteristic")
    sp.add_argument("--e", type=int, default=1, help="q = p^e")
    sp.add_argument("--q", type=int, default=None,
                    help="prime power shortcut for --p/--e")
    sp.add_argument("--out", default=None, help="output path (default stdout)")
    if family:
        sp.add_argument("--family", choices=cd.FAMILIES)
        sp.add_argument("--m", type=int)
        sp.add_argument("--s", type=int, default=0)
        sp.add_argument("--planes", default="auto",
                        help='"auto" or comma list of nonzero Gamma0 values')
        sp.add_argument("--force", action="store_true",
                        help="report instead of asserting out-of-range builds")


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="gkcodes",
        description="multi-point evaluation codes on the GK curve")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("points", help="rational point table")
    _add_common(sp)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = sub.add_parser("rrbasis", help="basis of L(G) for a family divisor")
    _add_common(sp, family=True)

    sp = sub.add_parser("build", help="write generator matrix + sidecar")
    _add_common(sp, family=True)
    sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("table", help="parameter table row")
    _add_common(sp, family=True)
    sp.add_argument("--aut", action="store_true",
                    help="include automorphism verdicts")
    sp.add_argument("--budget", type=int, default=1 << 18)

    sp = sub.add_parser("aut", help="automorphism generators and verdicts")
    _add_common(sp, family=True)
    sp.add_argument("--budget", type=int, default=1 << 18)

    sp = sub.add_parser("verify", help="run verification suites")
    _add_common(sp)
    sp.add_argument("--suites", default=None,
                    help="comma list; default: all at q=2, reduced otherwise")

    args = ap.parse_args(argv)
    cfg = _config(args)
    if args.cmd == "points":
        return cmd_points(cfg)
    if args.cmd == "rrbasis":
        return cmd_rrbasis(cfg)
    if args.cmd == "build":
        return cmd_build(cfg)
    if args.cmd == "table":
        return cmd_table(cfg, with_aut=args.aut)
    if args.cmd == "aut":
        return cmd_aut(cfg)
    if args.cmd == "verify":
        return cmd_verify(cfg)
    raise SystemExit(f"unknown command {args.cmd}")


if __name__ == "__main__":
    sys.exit(main())
