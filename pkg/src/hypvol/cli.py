"""Command-line front end: compute, verify, cache and export.

Rationals are written p/q or as integers; vectors are comma-separated.
Exit codes: 0 success, 1 domain error, 2 identity failure under
``verify --strict``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import exactmath, verify
from .graphs import enumerate_rational_graphs
from .intersections import default_table, dimension, is_stable
from .mirzakhani import mirzakhani_poly
from .tautclasses import s_class
from .volumes import DomainError, fig1_table, v_eval, v_profile, vol_eval

DEFAULT_CACHE = os.path.join(os.path.expanduser("~"), ".hypvol", "wkcache.txt")


@dataclass
class Config:
    cache_path: str
    max_complexity: int = 5
    output_format: str = "text"
    jobs: int = 1
    audit: bool = False

    def __post_init__(self):
        if self.max_complexity < 1:
            raise ValueError("complexity cap must be >= 1")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def parse_vector(text: str):
    return [parse_rational(x) for x in text.split(",") if x.strip() != ""]


def fmt(q: Fraction) -> str:
    return str(q)


def _cache_path(args) -> str:
    if getattr(args, "cache", None):
        return args.cache
    return os.environ.get("HYPVOL_CACHE", DEFAULT_CACHE)


def _load_cache(path):
    if os.path.exists(path):
        default_table().load(path)


def _store_cache(path):
    table = default_table()
    if table.dirty or not os.path.exists(path):
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        table.store(path)


def cmd_psi(args) -> int:
    path = _cache_path(args)
    _load_cache(path)
    value = default_table().psi(args.g, parse_vector(args.d))
    print(fmt(value))
    _store_cache(path)
    return 0


def cmd_kappa(args) -> int:
    path = _cache_path(args)
    _load_cache(path)
    value = default_table().kappa_psi(args.g, parse_vector(args.d), args.m)
    print(fmt(value))
    _store_cache(path)
    return 0


def cmd_mpoly(args) -> int:
    poly = mirzakhani_poly(args.g, args.n, args.ell)
    if args.format == "json":
        terms = [{"exponents": list(e), "coefficient": fmt(c)}
                 for e, c in sorted(poly.poly.terms.items())]
        print(json.dumps({"g": args.g, "n": args.n, "level": args.ell,
                          "variables": list(poly.poly.vars), "terms": terms}))
    else:
        print(poly.poly.to_text())
    return 0


def cmd_graphs(args) -> int:
    for graph in enumerate_rational_graphs(args.g, args.n):
        print(graph.to_line())
    return 0


def cmd_volume_eval(args) -> int:
    vec = parse_vector(args.a)
    value = v_eval(args.g, vec)
    print(fmt(value))
    return 0


def cmd_volume_profile(args) -> int:
    head = parse_vector(args.head) if args.head else []
    vp = v_profile(args.g, args.n, head, args.ell)
    prof = vp.profile
    if args.audit:
        observed = prof.max_piece_degree()
        print(f"# degree audit: observed {observed}, "
              f"structural bound 6g-6+2n = {6 * args.g - 6 + 2 * args.n}, "
              f"stated 6g-6+n = {6 * args.g - 6 + args.n}", file=sys.stderr)
    if args.format == "json":
        print(json.dumps({
            "g": args.g, "n": args.n, "level": args.ell,
            "head": [fmt(h) for h in vp.head],
            "t_max": fmt(prof.hi),
            "breakpoints": [fmt(b) for b in prof.breakpoints],
            "pieces": [p.to_text() for p in prof.pieces]}))
    elif args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["lo", "hi", "piece"])
        for (a, b), p in zip(zip(prof.breakpoints, prof.breakpoints[1:]), prof.pieces):
            writer.writerow([fmt(a), fmt(b), p.to_text()])
    else:
        for (a, b), p in zip(zip(prof.breakpoints, prof.breakpoints[1:]), prof.pieces):
            print(f"[{fmt(a)}, {fmt(b)}]: {p.to_text()}")
    return 0


def cmd_vol(args) -> int:
    value = vol_eval(args.g, parse_vector(args.a))
    print(json.dumps({"coeff": fmt(value.coeff), "pi_power": value.pi_power,
                      "sin_angles": [fmt(x) for x in value.sin_angles],
                      "float": value.as_float()}))
    return 0


def cmd_sclass(args) -> int:
    cls = s_class(args.g, args.n, parse_vector(args.a))
    print(cls.to_text())
    return 0


def cmd_fig1(args) -> int:
    rows = fig1_table(args.n, args.samples)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["x", "V_exact", "V_float", "Vol_float"])
        for x, exact, vfloat, vol in rows:
            writer.writerow([fmt(x), fmt(exact), repr(vfloat), repr(vol)])
    finally:
        if args.out:
            out.close()
    return 0


def _default_heads(g, n, rng_seed, count):
    import random
    rng = random.Random(rng_seed)
    heads = [[Fraction(0)] * (n - 1)]
    guard = 0
    while len(heads) < count and guard < 200 * count:
        guard += 1
        head = [Fraction(rng.randrange(0, 8), 16) for _ in range(n - 1)]
        if sum(head) + 1 <= 2 * g - 2 + n and head not in heads:
            heads.append(head)
    return heads


def run_identity(name, max_dim, seed, samples):
    """All reports for one identity family within the complexity cap."""
    reports = []
    if name == "do_norbury":
        for g in range(0, 3):
            for n in range(1, 12):
                if is_stable(g, n) and dimension(g, n + 1) <= max_dim + 1:
                    reports.append(verify.verify_do_norbury(g, n))
    elif name == "kdv_integral":
        for g in range(0, 3):
            for n in range(1, 10):
                if is_stable(g, n) and n >= 1 and dimension(g, n) <= max_dim:
                    reports.append(verify.verify_kdv_integral(g, n))
    elif name == "kdv_printed":
        reports.append(verify.verify_kdv_printed(0, 4))
        if max_dim >= 2:
            reports.append(verify.verify_kdv_printed(0, 5))
    elif name == "vp2":
        for g in range(0, 3):
            for n in range(1, 10):
                if is_stable(g, n) and is_stable(g, n + 1) \
                        and 2 * g - 2 + n + 1 >= 2 and dimension(g, n + 1) <= max_dim:
                    heads = _default_heads(g, n + 1, seed, max(3, samples // 3))
                    reports.append(verify.verify_vp2(
                        g, n, [h[: n] for h in heads]))
    elif name == "vanishing":
        for g in range(0, 3):
            for n in range(1, 10):
                if is_stable(g, n) and dimension(g, n) <= max_dim:
                    heads = _default_heads(g, n, seed, max(3, samples // 2))
                    reports.append(verify.verify_vanishing(g, n, heads))
    elif name == "c1":
        for g in range(0, 3):
            for n in range(1, 10):
                if is_stable(g, n) and 2 * g - 2 + n >= 2 and dimension(g, n) <= max_dim:
                    heads = _default_heads(g, n, seed, 3)
                    reports.append(verify.verify_c1(g, n, heads))
    elif name == "sign":
        for g, n in [(0, 4), (0, 5), (1, 2), (1, 3)]:
            if dimension(g, n) <= max_dim:
                reports.append(verify.verify_sign(g, n, samples, seed))
    elif name == "symmetry":
        for g, n in [(0, 4), (0, 5), (1, 2)]:
            if dimension(g, n) <= max_dim:
                reports.append(verify.verify_symmetry(g, n, samples, seed))
    elif name == "generic_kernels":
        for g, n, pts in [
            (0, 3, [((Fraction(1, 8), 0, 0), Fraction(3, 2))]),
            (1, 1, [((Fraction(1, 4),), Fraction(3, 2))]),
            (1, 2, [((Fraction(1, 4), Fraction(3, 8)), Fraction(27, 16))]),
        ]:
            if dimension(g, n + 1) <= max_dim:
                reports.append(verify.verify_generic_kernels(g, n, pts))
    elif name == "d3_decomposition":
        reports.append(verify.verify_d3_decomposition(
            0, 3, [([0, 0, 0], Fraction(3, 2))]))
    else:
        raise ValueError(f"unknown identity {name!r}")
    return reports


ALL_IDENTITIES = ["do_norbury", "kdv_integral", "kdv_printed", "vp2",
                  "vanishing", "c1", "sign", "symmetry", "generic_kernels",
                  "d3_decomposition"]


def cmd_verify(args) -> int:
    names = ALL_IDENTITIES if args.identity == "all" else [args.identity]
    if args.jobs > 1:
        # fan out per identity family; results merged in input order
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(run_identity, name, args.max_dim,
                                   args.seed, args.samples) for name in names]
            batches = [f.result() for f in futures]
    else:
        batches = [run_identity(name, args.max_dim, args.seed, args.samples)
                   for name in names]
    reports = [r for batch in batches for r in batch]
    if args.format == "json":
        print(verify.report_batch_to_json(reports))
    else:
        for r in reports:
            line = f"{r.identity} (g={r.g}, n={r.n}): {r.verdict}"
            if r.verdict not in ("holds",) and r.residual is not None:
                line += f"  residual = {r.residual_text()}"
            print(line)
    failed = [r for r in reports if r.verdict == "fails"]
    if args.strict and failed:
        return 2
    return 0


def cmd_cache(args) -> int:
    path = _cache_path(args)
    table = default_table()
    if args.action == "stats":
        _load_cache(path)
        stats = table.stats()
        stats["path"] = path
        print(json.dumps(stats))
    elif args.action == "clear":
        table.clear()
        if os.path.exists(path):
            os.remove(path)
        print(json.dumps({"cleared": path}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypvol",
        description="Exact volumes of moduli of hyperbolic cone surfaces "
                    "(angles up to 4*pi) and their identities.")
    parser.add_argument("--cache", help="intersection-number cache file "
                        "(overrides HYPVOL_CACHE)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("psi", help="psi-class intersection number")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", required=True, help="comma-separated exponents")
    p.set_defaults(fn=cmd_psi)

    p = sub.add_parser("kappa", help="kappa_1^m psi intersection number")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", required=True)
    p.set_defaults(fn=cmd_kappa)

    p = sub.add_parser("mpoly", help="Mirzakhani polynomial")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(fn=cmd_mpoly)

    p = sub.add_parser("graphs", help="rational stable graphs")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_graphs)

    p = sub.add_parser("volume", help="volume evaluation and profiles")
    vsub = p.add_subparsers(dest="volume_command", required=True)
    pe = vsub.add_parser("eval", help="V_{g,n}(a) at a rational vector")
    pe.add_argument("--g", type=int, required=True)
    pe.add_argument("--a", required=True)
    pe.set_defaults(fn=cmd_volume_eval)
    pp = vsub.add_parser("profile", help="V^l profile in the last angle")
    pp.add_argument("--g", type=int, required=True)
    pp.add_argument("--n", type=int, required=True)
    pp.add_argument("--head", default="")
    pp.add_argument("--ell", type=int, default=0)
    pp.add_argument("--format", choices=["text", "csv", "json"], default="text")
    pp.add_argument("--audit", action="store_true",
                    help="report observed vs stated polynomial degrees")
    pp.set_defaults(fn=cmd_volume_profile)

    p = sub.add_parser("vol", help="normalized volume Vol_{g,n}(a)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--a", required=True)
    p.set_defaults(fn=cmd_vol)

    p = sub.add_parser("sclass", help="decorated-class value of s_{g,n}(a)")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", required=True)
    p.set_defaults(fn=cmd_sclass)

    p = sub.add_parser("verify", help="check the identities")
    p.add_argument("identity", choices=ALL_IDENTITIES + ["all"])
    p.add_argument("--max-dim", type=int, default=4)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1,
                   help="worker threads for sampled checks")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("fig1", help="volume tables along (0,..,0,x)")
    p.add_argument("--n", type=int, required=True, choices=[3, 4, 5])
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_fig1)

    p = sub.add_parser("cache", help="intersection-number cache")
    p.add_argument("action", choices=["stats", "clear"])
    p.set_defaults(fn=cmd_cache)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, exactmath.InconsistentSamplesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
