"""Outage of a constant Eve rate and the resulting [r_bob - r]^+ sweep."""
import argparse
from pathlib import Path

from ojs.experiments import load_config, run_outage, spec_from_mapping, write_outputs
from ojs.outage import rate_for_outage

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "outage.cfg"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/outage.csv")
    ap.add_argument("--epsilon", type=float)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    spec = spec_from_mapping("outage", load_config(CONFIG), epsilon=args.epsilon)
    res = run_outage(spec, workers=args.workers)
    write_outputs(res, args.out)
    samples = res.extra["samples"]
    for eps in (0.5, 0.1, 0.01):
        print(f"epsilon={eps:<5} r={rate_for_outage(samples, eps):.3f} bits")
    print(f"chosen r={res.extra['rate']:.3f} (empirical outage {res.extra['achieved_outage']:.4f})")
    for scheme, d in res.slopes.items():
        print(f"{scheme.value}: r_bob slope {d['r_bob'].slope:.3f}, "
              f"[r_bob - r]^+ slope {d['secrecy'].slope:.3f}")


if __name__ == "__main__":
    main()
