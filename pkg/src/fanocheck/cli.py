"""Command-line entry point.

One binary dispatches to every verification routine.  By default the work
runs in-process; `--server URL` turns the same invocation into a thin client
of a running HTTP service, with identical payloads and exit codes either way.

Exit convention: 0 success or positive verdict, 1 negative verdict,
2 malformed input or arguments, 3 oracle undecided.
"""

from __future__ import annotations

import argparse
import sys

from . import service
from .groebner import BudgetExceeded
from .service import InputError, canonical_json


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit the canonical machine-readable payload")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for any randomized sampling (default 0)")
    common.add_argument("--jet-order", type=int, default=None,
                        help="truncation order for germ normalization")
    common.add_argument("--budget", type=int, default=None,
                        help="pair-processing cap for the dimension oracle")
    common.add_argument("--server", default=None, metavar="URL",
                        help="run against a fanocheck HTTP service instead "
                             "of in-process")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="fanocheck",
        description="Exact verification toolkit for quadratic-point loci of "
                    "Fano hypersurfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "classify", parents=[common],
        help="classify a hypersurface point (smooth / quadratic of some rank "
             "/ higher multiplicity), or scan sampled points over a prime "
             "field",
    )
    p.add_argument("--poly", required=True, help="polynomial JSON file")
    p.add_argument("--point", help='projective coordinates, e.g. "1,0,0,0,0,0"')
    p.add_argument("--min-rank", type=int, default=None,
                   help="demand quadratic rank at least this (exit 1 below)")
    p.add_argument("--scan", action="store_true",
                   help="classify seed-sampled points instead of one point")
    p.add_argument("--samples", type=int, default=25,
                   help="points to sample in --scan mode (default 25)")

    p = sub.add_parser(
        "regularity", parents=[common],
        help="check the line-finiteness condition at a point via the "
             "modular dimension oracle",
    )
    p.add_argument("--poly", required=True, help="polynomial JSON file")
    p.add_argument("--point", required=True,
                   help='projective coordinates, e.g. "1,0,0,0,0,0"')
    p.add_argument("--prime", type=int, action="append", default=None,
                   help="modular prime (repeatable; default 31 and 101, or "
                        "the FANOCHECK_PRIMES environment variable)")

    blow = sub.add_parser("blowup", help="germ normal forms and blow-up "
                                         "stability")
    blow_sub = blow.add_subparsers(dest="subcommand", required=True)
    p = blow_sub.add_parser(
        "verify", parents=[common],
        help="blow up a normal-form germ along its center and verify that "
             "exceptional singular points stay at or above the rank "
             "threshold",
    )
    p.add_argument("--germ", required=True, help="germ JSON file")
    p.add_argument("--rank", type=int, default=None,
                   help="rank threshold (default: the germ's own rank)")
    p.add_argument("--samples", type=int, default=4,
                   help="sampled fiber points per chart (default 4)")
    p = blow_sub.add_parser(
        "normalize", parents=[common],
        help="bring a multiplicity-2 germ to diagonal normal form along a "
             "coordinate center",
    )
    p.add_argument("--poly", required=True, help="polynomial JSON file")
    p.add_argument("--center-codim", type=int, required=True,
                   help="number of leading variables cutting the center")

    cod = sub.add_parser("codim", help="closed-form codimension tables")
    cod_sub = cod.add_subparsers(dest="subcommand", required=True)
    p = cod_sub.add_parser(
        "table", parents=[common],
        help="rank-locus dimensions, stratum minima, and the headline "
             "codimension bound for a range of ambient dimensions",
    )
    p.add_argument("--mmin", type=int, required=True)
    p.add_argument("--mmax", type=int, required=True)
    p.add_argument("--tsv", action="store_true",
                   help="tab-separated one-line-per-M output")

    cen = sub.add_parser("census", help="finite-field symmetric-rank counts")
    cen_sub = cen.add_subparsers(dest="subcommand", required=True)
    p = cen_sub.add_parser(
        "sym-rank", parents=[common],
        help="count symmetric MxM matrices of rank <= r over F_q",
    )
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", default="auto",
                   choices=("auto", "exhaustive", "bordered", "sampled"))
    p.add_argument("--sample-size", type=int, default=20000)
    p = cen_sub.add_parser(
        "fit", parents=[common],
        help="fit the count as an exact polynomial in q and check that its "
             "degree equals the rank-locus cone dimension",
    )
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    nf = sub.add_parser("nf", help="resolution-graph bound optimizer")
    nf_sub = nf.add_subparsers(dest="subcommand", required=True)
    p = nf_sub.add_parser(
        "bound", parents=[common],
        help="minimize the weighted quadratic over the graph's constraint "
             "polytope and certify the coefficient-4 bound",
    )
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the active-set enumeration "
                        "oracle")

    p = sub.add_parser("serve", parents=[common],
                       help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _dispatch_local(args) -> dict:
    if args.command == "classify":
        poly = service.load_json_file(args.poly)
        if args.scan:
            min_rank = 5 if args.min_rank is None else args.min_rank
            return service.classify_scan_payload(
                poly, min_rank=min_rank, samples=args.samples, seed=args.seed
            )
        if args.point is None:
            raise InputError("--point is required without --scan")
        return service.classify_payload(poly, args.point, args.min_rank)
    if args.command == "regularity":
        poly = service.load_json_file(args.poly)
        return service.regularity_payload(
            poly, args.point,
            primes=args.prime, budget_pairs=args.budget,
        )
    if args.command == "blowup" and args.subcommand == "verify":
        germ = service.load_json_file(args.germ)
        return service.blowup_verify_payload(
            germ, rank_threshold=args.rank,
            samples=args.samples, seed=args.seed,
        )
    if args.command == "blowup" and args.subcommand == "normalize":
        poly = service.load_json_file(args.poly)
        return service.blowup_normalize_payload(
            poly, args.center_codim, jet_order=args.jet_order
        )
    if args.command == "codim":
        return service.codim_table_payload(args.mmin, args.mmax)
    if args.command == "census" and args.subcommand == "sym-rank":
        return service.census_payload(
            args.m, args.r, args.q, mode=args.mode,
            seed=args.seed, sample_size=args.sample_size,
        )
    if args.command == "census" and args.subcommand == "fit":
        return service.census_fit_payload(args.m, args.r)
    if args.command == "nf":
        graph = service.load_json_file(args.graph)
        return service.nf_bound_payload(graph, oracle=args.oracle)
    raise InputError(f"unknown command {args.command}")


def _dispatch_server(args) -> dict:
    import httpx

    base = args.server.rstrip("/")
    if args.command == "classify":
        poly = service.load_json_file(args.poly)
        if args.scan:
            min_rank = 5 if args.min_rank is None else args.min_rank
            req = httpx.post(f"{base}/classify/scan", json={
                "polynomial": poly, "min_rank": min_rank,
                "samples": args.samples, "seed": args.seed,
            })
        else:
            if args.point is None:
                raise InputError("--point is required without --scan")
            req = httpx.post(f"{base}/classify", json={
                "polynomial": poly, "point": args.point,
                "min_rank": args.min_rank,
            })
    elif args.command == "regularity":
        poly = service.load_json_file(args.poly)
        req = httpx.post(f"{base}/regularity", json={
            "polynomial": poly, "point": args.point,
            "primes": args.prime, "budget_pairs": args.budget,
        })
    elif args.command == "blowup" and args.subcommand == "verify":
        germ = service.load_json_file(args.germ)
        req = httpx.post(f"{base}/blowup/verify", json={
            "germ": germ, "rank_threshold": args.rank,
            "samples": args.samples, "seed": args.seed,
        })
    elif args.command == "blowup" and args.subcommand == "normalize":
        poly = service.load_json_file(args.poly)
        req = httpx.post(f"{base}/blowup/normalize", json={
            "polynomial": poly, "center_codim": args.center_codim,
            "jet_order": args.jet_order,
        })
    elif args.command == "codim":
        req = httpx.get(f"{base}/codim/table",
                        params={"mmin": args.mmin, "mmax": args.mmax})
    elif args.command == "census" and args.subcommand == "sym-rank":
        req = httpx.get(f"{base}/census/sym-rank", params={
            "m": args.m, "r": args.r, "q": args.q, "mode": args.mode,
            "seed": args.seed, "sample_size": args.sample_size,
        })
    elif args.command == "census" and args.subcommand == "fit":
        req = httpx.get(f"{base}/census/fit",
                        params={"m": args.m, "r": args.r})
    elif args.command == "nf":
        graph = service.load_json_file(args.graph)
        req = httpx.post(f"{base}/nf/bound", json={
            "graph": graph, "oracle": args.oracle,
        })
    else:
        raise InputError(f"unknown command {args.command}")
    if req.status_code == 422:
        detail = req.json().get("detail", req.text)
        raise InputError(f"server rejected the request: {detail}")
    req.raise_for_status()
    return req.json()


# ---------------------------------------------------------------------------
# human rendering
# ---------------------------------------------------------------------------

def _render_classify(p) -> str:
    lines = [f"point ({', '.join(p['point'])}): "
             f"{p['classification']['label']}"]
    if p["min_rank"] is not None:
        word = "meets" if p["meets_min_rank"] else "fails"
        lines.append(f"rank threshold {p['min_rank']}: {word}")
    return "\n".join(lines)


def _render_scan(p) -> str:
    if p["verdict"] == "undecided":
        return f"scan undecided: {p['error']}"
    lines = [f"census over GF({p['prime']}), min rank {p['min_rank']}, "
             f"seed {p['seed']}:"]
    for row in p["rows"]:
        lines.append(
            f"  ({', '.join(row['point'])})  {row['classification']['label']}"
        )
    lines.append(f"violations: {len(p['violations'])}")
    lines.append(f"verdict: {'PASS' if p['verdict'] else 'FAIL'}")
    lines.append(f"note: {p['note']}")
    return "\n".join(lines)


def _render_regularity(p) -> str:
    lines = [
        f"point ({', '.join(p['point'])}): {p['classification']['label']} "
        f"({p['point_class']}, condition {p['condition']})",
        f"expected dimensions: {p['expected_dimensions']}",
    ]
    for entry in p["dimensions"]:
        lines.append(f"  mod {entry['prime']}: {entry['dims']}")
    lines.append(f"verdict: {p['verdict']}")
    return "\n".join(lines)


def _render_normalize(p) -> str:
    g = p["germ"]
    lines = [
        f"ambient dimension {g['ambient_dim']}, rank {g['rank']}, "
        f"center codimension {g['center_codim']}, "
        f"jet order {g['jet_order']}",
        f"diagonal: ({', '.join(g['diagonal'])})",
        f"tail terms: {len(g['tail']['terms'])}",
        "(use --json to capture the germ record)",
    ]
    return "\n".join(lines)


def _render_verify(p) -> str:
    lines = [f"rank threshold {p['rank_threshold']}, "
             f"jet order {p['jet_order']}, "
             f"precondition {'ok' if p['precondition_ok'] else 'VIOLATED'}"]
    for ch in p["charts"]:
        if ch["inside_rank_block"]:
            lines.append(
                f"  chart {ch['chart_index']}: inside rank block, "
                f"no singular candidates"
            )
        else:
            kinds = ", ".join(
                pt["classification"]["label"] for pt in ch["points"]
            )
            lines.append(
                f"  chart {ch['chart_index']}: fiber quadric rank "
                f"{ch['fiber_quadric_rank']}; points: {kinds}"
            )
    lines.append(f"violations: {len(p['violations'])}")
    lines.append(f"verdict: {'PASS' if p['verdict'] else 'FAIL'}")
    return "\n".join(lines)


_TSV_COLUMNS = (
    "M", "theorem_bound", "rank_component", "regularity_bound", "gap",
    "fb_min", "line_value", "overall_min",
)


def _render_codim(p, tsv: bool) -> str:
    lines = ["\t".join(_TSV_COLUMNS)] if tsv else []
    for t in p["tables"]:
        if tsv:
            lines.append("\t".join(str(t[c]) for c in _TSV_COLUMNS))
        else:
            lines.append(
                f"M={t['M']}: headline bound {t['theorem_bound']} "
                f"(rank component {t['rank_component']}, "
                f"regularity component {t['regularity_bound']}, "
                f"gap {t['gap']}); curve-stratum min {t['fb_min']}, "
                f"line stratum {t['line_value']}, overall {t['overall_min']}"
            )
    return "\n".join(lines)


def _render_census(p) -> str:
    line = (f"symmetric {p['M']}x{p['M']} over GF({p['q']}), rank <= {p['r']}: "
            f"{p['count']} of {p['total']} ({p['method']})")
    if p["method"] == "sampled":
        line += f" [estimate from {p['sample_size']} samples, seed {p['seed']}]"
    return line


def _render_fit(p) -> str:
    lines = [
        f"count polynomial degree {p['degree']} "
        f"(expected {p['expected_degree']}): "
        f"{'MATCH' if p['matches'] else 'MISMATCH'}",
        f"primes: {p['primes']}",
        f"counts: {p['counts']}",
    ]
    return "\n".join(lines)


def _render_nf(p) -> str:
    lines = [
        f"graph validity: {p['validity']['level']}"
        + (f" ({'; '.join(p['validity']['reasons'])})"
           if p["validity"]["reasons"] else ""),
        f"path counts: {p['path_counts']}, discrepancies: "
        f"{p['discrepancies']}",
        f"optimal base multiplicity: {p['base_multiplicity']} n",
        f"quadratic minimum: {p['quadratic_minimum']} n^2",
        f"bound coefficient c = {p['bound_coefficient']} "
        f"(floor {p['bound_floor']}, slack {p['inequality_slack']})",
        f"verdict: {'c > 4 certified' if p['verdict'] else 'NOT CERTIFIED'}",
    ]
    if not p["applicable"]:
        lines.append("graph is outside covering-rank context; "
                     "the coefficient-4 bound does not apply")
    if p.get("oracle") is not None:
        o = p["oracle"]
        agree = "agrees" if o["matches_closed_form"] else "DISAGREES"
        lines.append(f"oracle minimum: {o['value']} n^2 ({agree})")
    return "\n".join(lines)


def _render(args, payload) -> str:
    if args.command == "classify":
        if payload["command"] == "classify-scan":
            return _render_scan(payload)
        return _render_classify(payload)
    if args.command == "regularity":
        return _render_regularity(payload)
    if args.command == "blowup":
        if payload["command"] == "blowup-normalize":
            return _render_normalize(payload)
        return _render_verify(payload)
    if args.command == "codim":
        return _render_codim(payload, args.tsv)
    if args.command == "census":
        if payload["command"] == "census-fit":
            return _render_fit(payload)
        return _render_census(payload)
    if args.command == "nf":
        return _render_nf(payload)
    return canonical_json(payload)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .api import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    try:
        if args.server:
            payload = _dispatch_server(args)
        else:
            payload = _dispatch_local(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return 3
    if args.json:
        print(canonical_json(payload))
    else:
        print(_render(args, payload))
    return service.exit_code_for(payload)


if __name__ == "__main__":
    sys.exit(main())
