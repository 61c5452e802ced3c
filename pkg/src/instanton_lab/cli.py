"""``instanton-lab`` command line.

Exit codes: 0 all checks pass, 1 a mathematical check failed (the JSON report
carries the witnesses), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import __version__, chow, io, jumping, monad, stability, y4, y5
from .exact import ExactError, rational_str

DEFAULT_SEED = 7
DEFAULT_SPACE = "@space"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _envelope(args, ok: bool, result: dict, **counts) -> dict:
    out = {"tool": "instanton-lab", "version": __version__, "command": args.command, "ok": ok, "result": result}
    if hasattr(args, "seed"):
        out["seed"] = args.seed
    out.update(counts)
    return out


def _parse_point(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    try:
        return tuple(Fraction(p.strip()) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _parse_range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        return range(int(lo), int(hi) + 1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}") from exc


# ---------------------------------------------------------------------------
# subcommands; each returns (ok, report)


def cmd_check(args):
    net, t = io.load_net(args.net), io.load_space(args.space)
    rep = monad.check_instanton(net, t, args.samples, seed=args.seed)
    return rep.ok, _envelope(args, rep.ok, rep.to_dict(), samples=args.samples)


def cmd_jumping(args):
    net, t = io.load_net(args.net), io.load_space(args.space)
    curve = jumping.jumping_curve(net, seed=args.seed)
    result = {"curve": curve.to_dict()}
    ok = curve.degree == net.n
    if args.curve_out:
        io.write_json(curve.form.to_json(), args.curve_out)
    if args.order:
        result["order"] = {"point": [rational_str(x) for x in args.order], "order": jumping.jumping_order(net, args.order)}
    if args.oracle_lines:
        B = y5.intersection_form(t, seed=args.seed)
        rng = random.Random(args.seed)
        lines = []
        for idx in range(args.oracle_lines):
            while True:
                a = y5.random_vector(rng, 3)
                try:
                    line = y5.line_from_form(t, a)
                    break
                except y5.Y5Error:
                    continue
            split = jumping.splitting_type_on_line(net, t, line)
            order = jumping.jumping_order_of_line(net, line, B)
            lines.append({"line": idx, "a": [rational_str(x) for x in a], "splitting": split.i, "order": order})
            ok = ok and split.i == order
        result["oracle"] = {"intersection_form": B.to_json(), "lines": lines}
    return ok, _envelope(args, ok, result, oracle_lines=args.oracle_lines)


def cmd_theta(args):
    net = io.load_net(args.net)
    try:
        mod = jumping.theta_module(net, args.kmax)
    except jumping.DegenerateNet as exc:
        return False, _envelope(args, False, {"error": str(exc)})
    dims_ok = mod.dims() == [net.n * k for k in range(args.kmax + 1)]
    adj_ok = all(jumping.adjugate_check(net, k, seed=args.seed) for k in range(1, min(args.kmax, 3) + 1))
    rec = jumping.reconstruct_net(jumping.scramble(mod, args.seed), args.seed)
    rt_ok = jumping.curves_proportional(net, rec)
    ok = dims_ok and adj_ok and rt_ok
    result = {"module": mod.to_dict(), "dims_ok": dims_ok, "adjugate_ok": adj_ok, "roundtrip_ok": rt_ok}
    return ok, _envelope(args, ok, result)


def cmd_roundtrip(args):
    net = io.load_net(args.net)
    mod = jumping.theta_module(net, 3)
    rec = jumping.reconstruct_net(jumping.scramble(mod, args.seed), args.seed)
    ok = jumping.curves_proportional(net, rec)
    result = {"reconstructed": rec.to_json(), "curves_proportional": ok}
    return ok, _envelope(args, ok, result)


def cmd_stability(args):
    net = io.load_net(args.net)
    log = stability.SearchLog(args.budget)
    cert = stability.search_destabilizer(net, args.budget, args.seed, log)
    result = {
        "certificate": cert.to_json() if cert else None,
        "verified": stability.verify_certificate(net, cert) if cert else None,
        "budget": args.budget,
        "candidates_tried": min(log.used, args.budget),
        "strategies": log.strategies,
        "unstable": cert is not None,
    }
    # finding no destabilizer is a non-result, not a failure
    return True, _envelope(args, True, result)


def cmd_rr_table(args):
    try:
        table = chow.cohomology_table(args.degree, args.charge, args.twists)
    except chow.ChowError as exc:
        raise UsageError(str(exc)) from exc
    if args.text:
        return table.consistent(), table.render() + "\n"
    result = table.to_dict()
    result["rendered"] = table.render()
    return table.consistent(), _envelope(args, table.consistent(), result)


def cmd_y4_disc(args):
    p = io.load_pencil(args.pencil)
    try:
        data = y4.discriminant_sextic(p)
    except y4.ZeroSextic as exc:
        return False, _envelope(args, False, {"error": str(exc), "smooth": False})
    smooth = data.squarefree and data.max_corank == 1
    result = data.to_dict()
    result["smooth"] = smooth
    if smooth:
        result["genus2"] = y4.genus2_data(p).to_dict()
    return True, _envelope(args, True, result)


def cmd_random_net(args):
    t = io.load_space(args.space)
    net, tries = monad.random_net(args.n, t, seed=args.seed, bound=args.bound)
    out = net.to_json()
    out["meta"] = {"tool": "instanton-lab", "version": __version__, "seed": args.seed, "tries": tries, "bound": args.bound}
    return True, out


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="instanton-lab", description="Exact computations with instantons on Y5.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, space=False, samples=False):
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--out", help="write the report here instead of stdout")
        if space:
            sp.add_argument("--space", default=DEFAULT_SPACE, help="SkewTriple JSON (default: bundled fixture)")
        if samples:
            sp.add_argument("--samples", type=int, default=monad.DEFAULT_SAMPLES)

    sp = sub.add_parser("check", help="instanton conditions for a net")
    sp.add_argument("--net", required=True)
    common(sp, space=True, samples=True)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("jumping", help="jumping curve, orders and the splitting-type oracle")
    sp.add_argument("--net", required=True)
    sp.add_argument("--curve-out")
    sp.add_argument("--order", type=_parse_point)
    sp.add_argument("--oracle-lines", type=int, default=0)
    common(sp, space=True)
    sp.set_defaults(func=cmd_jumping)

    sp = sub.add_parser("theta", help="theta-characteristic module dimensions and roundtrip")
    sp.add_argument("--net", required=True)
    sp.add_argument("--kmax", type=int, default=4)
    common(sp)
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("stability", help="search for a destabilizing pair")
    sp.add_argument("--net", required=True)
    sp.add_argument("--budget", type=int, default=stability.DEFAULT_BUDGET)
    common(sp)
    sp.set_defaults(func=cmd_stability)

    sp = sub.add_parser("rr-table", help="cohomology table of an instanton from Riemann-Roch")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--charge", type=int, required=True)
    sp.add_argument("--twists", type=_parse_range, default=range(-3, 3))
    sp.add_argument("--text", action="store_true", help="aligned text instead of JSON")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_rr_table)

    sp = sub.add_parser("y4-disc", help="discriminant sextic of a pencil of quadrics in P^5")
    sp.add_argument("--pencil", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_y4_disc)

    sp = sub.add_parser("random-net", help="generate an instanton net")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bound", type=int, default=3)
    common(sp, space=True)
    sp.set_defaults(func=cmd_random_net)

    sp = sub.add_parser("roundtrip", help="net -> theta module -> net")
    sp.add_argument("--net", required=True)
    common(sp)
    sp.set_defaults(func=cmd_roundtrip)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # let "--twists -3..2" through: argparse would read -3..2 as an option
    for i, tok in enumerate(argv[:-1]):
        if tok == "--twists":
            argv[i:i + 2] = [f"--twists={argv[i + 1]}"]
            break
    args = parser.parse_args(argv)
    try:
        ok, report = args.func(args)
    except (io.InputError, UsageError) as exc:
        print(f"instanton-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExactError as exc:
        # a mathematical precondition failed on valid input
        report = _envelope(args, False, {"error": type(exc).__name__, "message": str(exc)})
        ok = False
    text = report if isinstance(report, str) else io.dumps(report)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
