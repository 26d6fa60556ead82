"""Command-line entry point: ``ixs <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ixs.adapters import FAMILIES, family_of, make_adapter, read_instance, write_instance
from ixs.adapters.bcp import gen_bcp
from ixs.adapters.bkp import gen_bkp
from ixs.adapters.msmp import MsmpInstance, build_msmp, format_scenarios, gen_watts_strogatz
from ixs.core import INIT_STRATEGIES, IxsConfig, fmt_value, format_trace, run_ixs
from ixs.harness import compute_profile, format_profile, format_records, read_records, run_batch
from ixs.oracle import brute_force_bilevel


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    if args.family == "bkp":
        inst = gen_bkp(args.n, args.budget if args.budget is not None else args.n // 2, args.seed)
    elif args.family == "bcp":
        inst = gen_bcp(args.n, args.density, args.seed, args.budget)
    else:
        net = gen_watts_strogatz(args.n, args.K, args.beta, args.seed)
        inst = build_msmp(net, args.h, args.k, args.R, args.seed)
    write_instance(inst, args.out)
    return 0


def cmd_solve(args) -> int:
    adapter = make_adapter(read_instance(args.instance, args.family))
    cfg = IxsConfig(args.init, args.rho, args.time_limit, args.seed)
    res = run_ixs(adapter, cfg)
    if args.trace:
        Path(args.trace).write_text(format_trace(res), encoding="utf-8")
    print(f"status {res.status}")
    print(f"z* {fmt_value(res.z_star)}")
    print(f"lower {fmt_value(res.l_final)}")
    print(f"w* {' '.join(map(str, sorted(res.w_star))) or '-'}")
    print(f"iterations {res.iterations}")
    print(f"greedy_frac {res.greedy_fraction:.6f}")
    return 0


def cmd_oracle(args) -> int:
    adapter = make_adapter(read_instance(args.instance, args.family))
    w, z = brute_force_bilevel(adapter, cap=args.cap)
    print(f"z* {fmt_value(z)}")
    print(f"w* {' '.join(map(str, sorted(w))) or '-'}")
    return 0


def cmd_batch(args) -> int:
    records = run_batch(args.manifest, jobs=args.jobs, timing=not args.no_timing)
    _emit(format_records(records), args.out)
    return 0


def cmd_profile(args) -> int:
    _emit(format_profile(compute_profile(read_records(args.runs), args.time_limit)), args.out)
    return 0


def cmd_dump(args) -> int:
    inst = read_instance(args.instance, args.family or family_of(args.instance, "msmp"))
    if not isinstance(inst, MsmpInstance):
        raise SystemExit("dump-scenarios needs an MSMP instance")
    _emit(format_scenarios(inst), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ixs", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance file")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--n", type=int, required=True, help="items / vertices / nodes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None, help="leader budget (bkp, bcp)")
    p.add_argument("--density", type=float, default=0.5, help="edge density (bcp)")
    p.add_argument("--K", type=int, default=4, help="mean degree (msmp)")
    p.add_argument("--beta", type=float, default=0.3, help="rewiring probability (msmp)")
    p.add_argument("--h", type=int, default=1, help="protected nodes (msmp)")
    p.add_argument("--k", type=int, default=1, help="seed nodes (msmp)")
    p.add_argument("--R", type=int, default=1, help="scenario count (msmp)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance with IXS")
    p.add_argument("instance")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--init", choices=INIT_STRATEGIES, default="trivial-only")
    p.add_argument("--rho", type=int, default=1)
    p.add_argument("--time-limit", type=float, default=3600.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", help="write the iteration trace to this file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="solve an instance by brute force")
    p.add_argument("instance")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--cap", type=int, default=200_000, help="max leader vectors to enumerate")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("batch", help="run a manifest of solves into a CSV")
    p.add_argument("manifest")
    p.add_argument("-o", "--out")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="write time_ms as 0")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("profile", help="performance profile from a run CSV")
    p.add_argument("runs")
    p.add_argument("-o", "--out")
    p.add_argument("--time-limit", type=float, default=3600.0)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("dump-scenarios", help="list the live-arc scenarios of an MSMP instance")
    p.add_argument("instance")
    p.add_argument("--family", choices=["msmp"])
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_dump)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
