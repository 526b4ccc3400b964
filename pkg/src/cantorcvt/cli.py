"""Command-line client for the cantor-cvt service.

The CLI is a thin HTTP client: every subcommand posts a request to the
service and renders the JSON reply as text, JSON, or CSV.  By default it
talks to an in-process instance of the app (no server or network needed);
pass ``--url`` to target a running server instead, and use the ``serve``
subcommand to start one.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys


def make_client(url: str | None):
    import httpx

    if url:
        return httpx.Client(base_url=url, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # some starlette/httpx pairings deprecation-warn on import
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _default_depth() -> int:
    return int(os.environ.get("CANTOR_CVT_MAX_DEPTH", "40"))


def _csv_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _post(client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        print(f"error ({resp.status_code}): {detail}", file=sys.stderr)
        raise SystemExit(1)
    return resp.json()


def _scalar_text(value: dict) -> str:
    if "fraction" in value:
        return f"{value['fraction']} ({value['decimal']})"
    return value["display"]


def _emit_json(data: dict) -> None:
    print(json.dumps(data, indent=2))


def _emit_csv(rows: list[dict], fieldnames: list[str]) -> None:
    writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames)
    writer.writeheader()
    writer.writerows(rows)


def _codebook_payload(args) -> dict:
    spec = {"family": args.family, "n": args.n}
    if getattr(args, "I", None):
        spec["I"] = _csv_list(args.I)
    if getattr(args, "variants", None):
        spec["variants"] = [int(v) for v in _csv_list(args.variants)]
    return spec


# -- subcommand handlers -------------------------------------------------


def cmd_moments(client, args):
    data = _post(client, "/moments", {"r": args.r})
    if args.output == "json":
        _emit_json(data)
        return
    print(f"r = {data['r']}")
    print(f"mean          = {_scalar_text(data['mean'])}")
    print(f"variance      = {_scalar_text(data['variance'])}")
    print(f"second moment = {_scalar_text(data['second_moment'])}")


def cmd_codebook(client, args):
    payload = _codebook_payload(args)
    payload["r"] = args.r
    data = _post(client, "/codebook", payload)
    if args.output == "json":
        _emit_json(data)
        return
    print(f"{data['family']} codebook, n={data['n']}, I={data['I']}, variants={data['variants']}")
    for point, group in zip(data["points"], data["groups"]):
        text = point if isinstance(point, str) else point["display"]
        print(f"  {text:30s}  <- centroid of {{{', '.join(group)}}}")


def cmd_verify(client, args):
    payload = {"r": args.r, "depth": args.depth}
    if args.points:
        payload["points"] = _csv_list(args.points)
    else:
        payload["codebook"] = _codebook_payload(args)
    data = _post(client, "/verify", payload)
    if args.output == "json":
        _emit_json(data)
        return
    print(f"status: {data['status']}")
    for i, (b, w) in enumerate(zip(data["boundaries"], data["gap_witnesses"])):
        print(f"  boundary {i + 1}: {b}  gap witness: {w if w is not None else '(none)'}")
    for i, (res, mass) in enumerate(zip(data["residuals"], data["cell_masses"])):
        res_text = "(empty cell)" if res is None else res
        print(f"  cell {i + 1}: mass {mass}, centroid residual {res_text}")
    if data["unresolved"]:
        print(f"  unresolved cylinders: {', '.join(data['unresolved'])}")


def cmd_distortion(client, args):
    payload = {"r": args.r, "depth": args.depth, "certify_window": args.certify_window}
    if args.points:
        payload["points"] = _csv_list(args.points)
    else:
        payload["codebook"] = _codebook_payload(args)
    data = _post(client, "/distortion", payload)
    if args.output == "json":
        _emit_json(data)
        return
    if data["r"] == "formal":
        print(f"distortion(r) = {data['value']['display']}")
        print(f"  num coefficients (ascending): {data['value']['num']}")
        print(f"  den coefficients (ascending): {data['value']['den']}")
        lo, hi = data["window"]
        print(f"  CVT-valid ratio window: [{lo['decimal']}, {hi['decimal']}]")
    elif data["exact"]:
        print(f"distortion = {_scalar_text(data['value'])}")
    else:
        print("distortion bound (unresolved cells at this depth):")
        print(f"  lo = {_scalar_text(data['lo'])}")
        print(f"  hi = {_scalar_text(data['hi'])}")


def cmd_enumerate(client, args):
    data = _post(
        client,
        "/enumerate",
        {
            "family": args.family,
            "n": args.n,
            "r": args.r,
            "verify": not args.no_verify,
            "depth": args.depth,
            "parallel": args.parallel,
        },
    )
    if args.output == "json":
        _emit_json(data)
        return
    if args.output == "csv":
        rows = [
            {
                "I": " ".join(cb["I"]),
                "variants": " ".join(str(v) for v in cb["variants"]),
                "points": " ".join(cb["points"]),
                "status": cb["status"] or "",
            }
            for cb in data["codebooks"]
        ]
        _emit_csv(rows, ["I", "variants", "points", "status"])
        return
    print(
        f"{data['family']} n={data['n']}: {data['count']} codebooks "
        f"(formula: {data['count_formula']})"
    )
    if data["all_valid"] is not None:
        print(f"all valid: {data['all_valid']}")
    for cb in data["codebooks"]:
        status = f" [{cb['status']}]" if cb["status"] else ""
        print(f"  I={cb['I']} variants={cb['variants']}{status}")
        print(f"    points: {', '.join(cb['points'])}")


def cmd_compare(client, args):
    payload = {"n": args.n, "depth": args.depth, "parallel": args.parallel}
    if args.sweep:
        parts = args.sweep.split(":")
        if len(parts) != 3:
            print("error: --sweep must be LO:HI:STEP", file=sys.stderr)
            raise SystemExit(2)
        payload["sweep"] = parts
    else:
        payload["r"] = args.r
    data = _post(client, "/compare", payload)
    if args.output == "json":
        _emit_json(data)
        return
    n = data["n"]
    headers = [
        "r",
        f"V_alpha{n}",
        f"V_beta{n}",
        f"V_delta{n}",
        "valid_alpha",
        "valid_beta",
        "valid_delta",
    ]
    rows = [
        {
            "r": row["r_decimal"],
            f"V_alpha{n}": row["V_alpha"]["decimal"],
            f"V_beta{n}": row["V_beta"]["decimal"],
            f"V_delta{n}": row["V_delta"]["decimal"],
            "valid_alpha": row["valid_alpha"],
            "valid_beta": row["valid_beta"],
            "valid_delta": row["valid_delta"],
        }
        for row in data["rows"]
    ]
    if args.output == "csv":
        _emit_csv(rows, headers)
        return
    for row in data["rows"]:
        print(f"r = {row['r']} ({row['r_decimal']})")
        for fam in ("alpha", "beta", "delta"):
            print(
                f"  V_{fam}{n} = {_scalar_text(row['V_' + fam])}"
                f"  valid: {row['valid_' + fam]}"
            )


def cmd_thresholds(client, args):
    data = _post(client, "/thresholds", {"tol": args.tol})
    if args.output == "json":
        _emit_json(data)
        return
    if args.output == "csv":
        rows = [
            {"name": t["name"], "decimals": t["decimals"], "binding": t["binding"]}
            for t in data["thresholds"]
        ]
        _emit_csv(rows, ["name", "decimals", "binding"])
        return
    width = max(len(t["name"]) for t in data["thresholds"])
    for t in data["thresholds"]:
        print(f"{t['name']:<{width}}  {t['decimals']}  binding: {t['binding']}")


def cmd_oracle(client, args):
    payload = {
        "method": args.method,
        "r": args.r,
        "depth": args.depth,
        "n": args.n,
        "mode": args.mode,
        "max_iters": args.max_iters,
        "tol": args.tol,
    }
    if args.init:
        payload["init"] = _csv_list(args.init)
    data = _post(client, "/oracle", payload)
    if args.output == "json":
        _emit_json(data)
        return
    print(f"{data['method']} on {data['atoms']} atoms")
    print(f"  points: {', '.join(data['points'])}")
    print(f"  distortion: {_scalar_text(data['distortion'])}")
    if data["iterations"] is not None:
        print(f"  iterations: {data['iterations']}")


def cmd_serve(args):
    import uvicorn

    uvicorn.run("cantorcvt.service.app:app", host=args.host, port=args.port)


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantor-cvt",
        description="Exact CVTs and quantization errors on dyadic Cantor sets.",
    )
    parser.add_argument("--url", help="base URL of a running server (default: in-process)")
    parser.add_argument(
        "--output", choices=("text", "json", "csv"), default="text", help="output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    depth_kw = dict(type=int, default=_default_depth(), help="cylinder resolution depth cap")

    p = sub.add_parser("moments", help="mean, variance, and second moment")
    p.add_argument("--r", default="4/9", help="ratio as a fraction/decimal, or 'formal'")

    p = sub.add_parser("codebook", help="construct a structured codebook")
    p.add_argument("--family", choices=("alpha", "beta", "delta"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", default="4/9")
    p.add_argument("--I", help="comma-separated index words ('e' = empty word)")
    p.add_argument("--variants", help="comma-separated variant bits")

    p = sub.add_parser("enumerate", help="all constructions for a family and n")
    p.add_argument("--family", choices=("alpha", "delta"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", default="4/9")
    p.add_argument("--depth", **depth_kw)
    p.add_argument("--no-verify", action="store_true", help="skip CVT verification")
    p.add_argument("--parallel", type=int, default=1, help="worker count for verification")

    p = sub.add_parser("verify", help="CVT certificate for a codebook")
    p.add_argument("--family", choices=("alpha", "beta", "delta"))
    p.add_argument("--n", type=int)
    p.add_argument("--I")
    p.add_argument("--variants")
    p.add_argument("--points", help="comma-separated explicit codepoints")
    p.add_argument("--r", required=True)
    p.add_argument("--depth", **depth_kw)

    p = sub.add_parser("distortion", help="exact, bounded, or closed-form distortion")
    p.add_argument("--family", choices=("alpha", "beta", "delta"))
    p.add_argument("--n", type=int)
    p.add_argument("--I")
    p.add_argument("--variants")
    p.add_argument("--points")
    p.add_argument("--r", required=True, help="ratio or 'formal'")
    p.add_argument("--depth", **depth_kw)
    p.add_argument(
        "--certify-window",
        action="store_true",
        help="re-derive a formal closed form through the windowed engine route",
    )

    p = sub.add_parser("compare", help="family distortions at a ratio or over a sweep")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--r")
    p.add_argument("--sweep", help="grid as LO:HI:STEP in exact rationals")
    p.add_argument("--depth", **depth_kw)
    p.add_argument("--parallel", type=int, default=1, help="worker count for sweeps")

    p = sub.add_parser("thresholds", help="the seven certified critical ratios")
    p.add_argument("--tol", default="1e-12", help="bisection tolerance")

    p = sub.add_parser("oracle", help="DP-optimal quantizer or Lloyd iteration")
    p.add_argument("--method", choices=("dp", "lloyd"), required=True)
    p.add_argument("--r", default="4/9")
    p.add_argument("--depth", type=int, default=12, help="discretization depth (atoms = 2^depth)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--init", help="comma-separated initial codepoints (lloyd)")
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--tol", default="0")

    p = sub.add_parser("serve", help="run the HTTP service under uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8712)

    return parser


_HANDLERS = {
    "moments": cmd_moments,
    "codebook": cmd_codebook,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "distortion": cmd_distortion,
    "compare": cmd_compare,
    "thresholds": cmd_thresholds,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        cmd_serve(args)
        return 0
    if args.command == "verify" and bool(args.points) == bool(args.family):
        parser.error("verify needs exactly one of --points or --family/--n")
    if args.command == "distortion" and bool(args.points) == bool(args.family):
        parser.error("distortion needs exactly one of --points or --family/--n")
    if args.command == "compare" and bool(args.r) == bool(args.sweep):
        parser.error("compare needs exactly one of --r or --sweep")
    with make_client(args.url) as client:
        _HANDLERS[args.command](client, args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
