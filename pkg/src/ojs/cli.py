"""Command line entry point: ``ojs <fixed|scaling|outage|covering> --config FILE``."""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import OJSError
from .experiments import load_config, run, spec_from_mapping, write_outputs

MODE_OF = {
    "fixed": "fixed_sweep",
    "scaling": "scaling_sweep",
    "outage": "outage",
    "covering": "covering",
}

log = logging.getLogger("ojs")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ojs", description="Opportunistic jammer selection experiments.")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name, mode in MODE_OF.items():
        s = sub.add_parser(name, help=f"run a {mode} experiment")
        s.add_argument("--config", required=True, help="key = value config file")
        s.add_argument("--seed", type=int, default=None)
        s.add_argument("--trials", type=int, default=None)
        s.add_argument("--out", default=None, help=f"output CSV (default: {name}.csv)")
        s.add_argument("--greedy", action="store_true",
                       help="approximate greedy subset search instead of exhaustive")
        s.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    return p


def _print_result(result):
    if hasattr(result, "rows"):
        for m, mean, _ in result.rows:
            print(f"M={m:5d}  covering radius ~ {mean:.4f}")
        print(f"log-log slope: {result.slope:.3f}")
        return
    for row in result.summary:
        print(f"{row.snr_db:6.1f} dB  S={row.pool_size:<6d} {row.scheme.value:<12s}"
              f" r_bob={row.mean_r_bob:7.3f}  c_eve={row.mean_c_eve:7.3f}"
              f"  secrecy={row.mean_secrecy:7.3f}")
    for scheme, d in result.slopes.items():
        parts = "  ".join(f"{m}={est.slope:.3f}" for m, est in d.items())
        print(f"DoF slopes {scheme.value}: {parts}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        kv = load_config(args.config)
        spec = spec_from_mapping(MODE_OF[args.cmd], kv, seed=args.seed, trials=args.trials,
                                 greedy=True if args.greedy else None)
        out = args.out or f"{args.cmd}.csv"
        result = run(spec, workers=args.workers)
        paths = write_outputs(result, out)
    except (OJSError, OSError) as e:
        print(f"ojs: error: {e}", file=sys.stderr)
        return 2
    _print_result(result)
    for kind, path in paths.items():
        log.info("wrote %s: %s", kind, path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
