"""Command-line front end.

Exit codes: 0 success/certified, 2 inconclusive or failed replay, 1 invalid
input or any other error.  Certificates are byte-stable across runs: the JSON
carries no timestamps, and timing goes to a sidecar ``.log`` file (or stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from pathlib import Path

from .derivations import StepError, builtin_scripts, check_script
from .normal_form import eliminate_t, equal_in_torus_group
from .obstruction import (
    Inconclusive,
    ObstructionCertificate,
    UnsupportedParameters,
    certificate_from_json_dict,
    certify_beta,
    certify_slope,
    replay,
)
from .presentations import (
    ParameterError,
    cable_presentation,
    peripheral_invariance_check,
    torus_presentation,
)
from .slopes import Slope, lspace_window_check
from .words import Word, concat

CERTIFIED, ERROR, INCONCLUSIVE = 0, 1, 2


def _dump(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _print_table(cert: ObstructionCertificate) -> None:
    print(f"parameters: x={cert.params.x} y={cert.params.y} p={cert.params.p} "
          f"q={cert.params.q} slope={cert.params.slope}")
    for entry in cert.entries:
        print(f"equation {entry.entry_id}: {entry.equation.lhs} = {entry.equation.rhs}")
    if cert.cramer_data:
        c = cert.cramer_data
        print(f"determinants: d0={c.d0} d1={c.d1} d={c.d}")
    print(f"{'a':>5} {'b':>5} {'t':>5}  refuted by")
    for row in cert.refutations:
        s = row.assignment
        why = "nontriviality axiom" if row.equation_id is None else (
            f"{row.equation_id} ({row.lhs_sign} vs {row.rhs_sign})"
        )
        print(f"{s.a:>5} {s.b:>5} {s.t:>5}  {why}")


def cmd_present(args: argparse.Namespace) -> int:
    try:
        if args.p is None:
            pres = torus_presentation(args.x, args.y)
        else:
            pres = cable_presentation(args.x, args.y, args.p, args.q)
    except ParameterError as err:
        print(f"error: {err}", file=sys.stderr)
        return ERROR
    _dump(pres.to_json_dict(), args.json)
    return CERTIFIED


def cmd_certify(args: argparse.Namespace) -> int:
    if args.q is not None and args.q != args.p * args.x * args.y - 1:
        print(f"error: q must be p*x*y - 1 = {args.p * args.x * args.y - 1}", file=sys.stderr)
        return ERROR
    started = time.perf_counter()
    try:
        if args.beta is not None:
            result = certify_beta(args.x, args.y, args.p, args.beta)
        else:
            result = certify_slope(
                args.x, args.y, args.p, Slope.parse(args.slope), experimental=args.experimental
            )
    except (UnsupportedParameters, ParameterError, ValueError, StepError) as err:
        print(f"error: {err}", file=sys.stderr)
        return ERROR
    elapsed = time.perf_counter() - started
    if isinstance(result, Inconclusive):
        print("inconclusive: surviving sign assignments:", file=sys.stderr)
        for s in result.survivors:
            print(f"  a={s.a} b={s.b} t={s.t}", file=sys.stderr)
        return INCONCLUSIVE
    if args.table:
        _print_table(result)
        if args.json:
            _dump(result.to_json_dict(), args.json)
    else:
        _dump(result.to_json_dict(), args.json)
    if args.json:
        Path(args.json + ".log").write_text(f"certify elapsed={elapsed:.3f}s\n")
    else:
        print(f"certified in {elapsed:.3f}s", file=sys.stderr)
    return CERTIFIED


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        doc = json.loads(Path(args.path).read_text())
        cert = certificate_from_json_dict(doc)
    except (OSError, ValueError, KeyError, TypeError) as err:
        print(f"error: cannot load certificate: {err}", file=sys.stderr)
        return ERROR
    report = replay(cert)
    if report:
        print("replay ok")
        return CERTIFIED
    for problem in report.problems:
        print(f"replay problem: {problem}", file=sys.stderr)
    return INCONCLUSIVE


# ---------------------------------------------------------------------------
# identity checks

def identity_report(x: int, y: int, p: int, q: int | None = None) -> list[tuple[str, bool, str]]:
    """Cross-checks between the derivation checker and the independent oracles."""
    checks: list[tuple[str, bool, str]] = []
    pres = cable_presentation(x, y, p, q)
    assert pres.p is not None and pres.q is not None
    i, j = pres.torus_bezout

    def add(name: str, fn) -> None:
        try:
            ok, detail = fn()
        except (StepError, ParameterError, ValueError) as err:
            ok, detail = False, str(err)
        checks.append((name, ok, detail))

    def t_power_vs_normal_form():
        target = Word.from_pairs([("a", x * p - i), ("b", -j)])
        got = eliminate_t(Word.single("t", pres.p), pres)
        return equal_in_torus_group(got, target, x, y), f"t^{p} reduces to {target}"

    def derivation_vs_normal_form():
        scripts = builtin_scripts(x, y, p)
        eq = check_script(scripts["cable_t_power"], pres, {})
        lhs_ab = eliminate_t(pres.expand(eq.lhs), pres)
        ok = equal_in_torus_group(lhs_ab, pres.expand(eq.rhs), x, y)
        return ok, f"checked {eq.lhs} = {eq.rhs}"

    def endpoint_tail_vs_normal_form():
        scripts = builtin_scripts(x, y, p)
        env = {sid: check_script(s, pres, {}) for sid, s in scripts.items() if sid == "central_relation"}
        env["cable_t_power"] = check_script(scripts["cable_t_power"], pres, env)
        eq = check_script(scripts["cable_endpoint_product"], pres, env)
        tail = Word(eq.rhs.syllables[1:])  # strip the leading t
        lhs_ab = concat(Word.single("a", -x), eliminate_t(Word.single("t", pres.p), pres))
        return equal_in_torus_group(lhs_ab, tail, x, y), f"tail {tail}"

    def peripheral_invariance():
        for k in range(-3, 4):
            if not peripheral_invariance_check(x, y, p, pres.q, k):
                return False, f"failed at shift k={k}"
        return True, "shifts -3..3 define the same peripherals"

    def window_identity():
        report = lspace_window_check(x, y, p)
        detail = f"2g-1 = {report.two_g_minus_1} = (pq-1) - {report.window_low_gap}"
        return report.ok, detail

    add("t-power elimination matches the normal form", t_power_vs_normal_form)
    add("t-power derivation confirmed by the normal form", derivation_vs_normal_form)
    add("endpoint product tail confirmed by the normal form", endpoint_tail_vs_normal_form)
    add("peripheral elements independent of normalization shifts", peripheral_invariance)
    add("surgery window sits above the 2g-1 threshold", window_identity)
    return checks


def cmd_verify_identities(args: argparse.Namespace) -> int:
    try:
        checks = identity_report(args.x, args.y, args.p, args.q)
    except (ParameterError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return ERROR
    failed = False
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failed = failed or not ok
    return ERROR if failed else CERTIFIED


# ---------------------------------------------------------------------------
# sweeps

def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def parse_grid(spec: str) -> dict:
    dims: dict = {}
    for part in spec.split(";"):
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or key not in ("x", "y", "p", "beta", "slope"):
            raise ValueError(f"bad grid dimension {part!r}")
        if key == "slope":
            dims[key] = [s.strip() for s in val.split("|")]
        else:
            dims[key] = _parse_range(val.strip())
    for required in ("x", "y", "p"):
        if required not in dims:
            raise ValueError(f"grid is missing {required!r}")
    if ("beta" in dims) == ("slope" in dims):
        raise ValueError("grid needs exactly one of beta=... or slope=...")
    return dims


def grid_points(dims: dict) -> list[tuple[int, int, int, str, str]]:
    mode = "beta" if "beta" in dims else "slope"
    values = [str(v) for v in dims[mode]]
    points = []
    for x in dims["x"]:
        for y in dims["y"]:
            if not (x < y and gcd(x, y) == 1):
                continue
            for p in dims["p"]:
                for val in values:
                    points.append((x, y, p, mode, val))
    return points


def _sweep_point(task: tuple[int, int, int, str, str, str]) -> dict:
    x, y, p, mode, val, out_dir = task
    record: dict = {"x": x, "y": y, "p": p, mode: val}
    started = time.perf_counter()
    try:
        if mode == "beta":
            result = certify_beta(x, y, p, int(val))
            stem = f"cert_x{x}_y{y}_p{p}_beta{val}"
        else:
            slope = Slope.parse(val)
            result = certify_slope(x, y, p, slope)
            stem = f"cert_x{x}_y{y}_p{p}_slope{slope.m}_{slope.n}"
    except (UnsupportedParameters, ParameterError, ValueError, StepError) as err:
        record.update(status="unsupported", detail=str(err))
        return record
    if isinstance(result, Inconclusive):
        record.update(status="inconclusive", survivors=len(result.survivors))
        return record
    report = replay(result)
    if not report:
        record.update(status="replay_failed", detail="; ".join(report.problems))
        return record
    path = Path(out_dir) / f"{stem}.json"
    path.write_text(json.dumps(result.to_json_dict(), indent=2) + "\n")
    record.update(status="certified", file=path.name, elapsed=round(time.perf_counter() - started, 4))
    return record


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        dims = parse_grid(args.grid)
        points = grid_points(dims)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return ERROR
    if not points:
        print("error: empty grid", file=sys.stderr)
        return ERROR
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = [(x, y, p, mode, val, str(out_dir)) for x, y, p, mode, val in points]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_sweep_point, tasks))
    else:
        records = [_sweep_point(t) for t in tasks]
    mode = "beta" if "beta" in dims else "slope"
    for rec in records:
        print(f"x={rec['x']} y={rec['y']} p={rec['p']} {mode}={rec[mode]}: {rec['status']}")
    certified = sum(r["status"] == "certified" for r in records)
    print(f"{certified}/{len(records)} certified")
    summary = {"grid": args.grid, "results": records}
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return CERTIFIED if certified == len(records) else ERROR


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cable-order",
        description="Build cable-knot group presentations and certify "
        "non-left-orderability of surgery quotients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(sp: argparse.ArgumentParser, with_p_required: bool) -> None:
        sp.add_argument("--x", type=int, required=True)
        sp.add_argument("--y", type=int, required=True)
        sp.add_argument("--p", type=int, required=with_p_required, default=None)
        sp.add_argument("--q", type=int, default=None)

    sp = sub.add_parser("present", help="print a presentation document")
    add_params(sp, with_p_required=False)
    sp.add_argument("--json", metavar="PATH", default=None)
    sp.set_defaults(fn=cmd_present)

    sp = sub.add_parser("certify", help="emit a non-left-orderability certificate")
    add_params(sp, with_p_required=True)
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--beta", type=int, default=None)
    group.add_argument("--slope", type=str, default=None)
    sp.add_argument("--json", metavar="PATH", default=None)
    sp.add_argument("--table", action="store_true", help="print the 27-row table instead of JSON")
    sp.add_argument("--experimental", action="store_true",
                    help="allow slopes below the certified window (always inconclusive)")
    sp.set_defaults(fn=cmd_certify)

    sp = sub.add_parser("sweep", help="certify a parameter grid")
    sp.add_argument("--grid", required=True,
                    help='e.g. "x=2..5;y=2..5;p=2..3;beta=1..5" or ...;slope=21/1|43/2')
    sp.add_argument("--out", default="certs")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("verify-identities", help="cross-check oracles against derivations")
    add_params(sp, with_p_required=True)
    sp.set_defaults(fn=cmd_verify_identities)

    sp = sub.add_parser("replay", help="independently re-check a certificate file")
    sp.add_argument("path")
    sp.set_defaults(fn=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
