"""Secrecy DoF when the pool grows as S = c P^a, for the four scaling setups.

Prints the fitted slope next to the target window used by the acceptance suite.
"""
import argparse
from pathlib import Path

from ojs.experiments import load_config, run_scaling_sweep, spec_from_mapping, write_outputs

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

# config name -> acceptance window for the OJS1 secrecy slope
RUNS = {
    "scaling_single_stream": (0.7, 1.1),
    "scaling_single_stream_sqrt": (0.3, 0.7),
    "scaling_two_stream": (1.5, 2.2),
    "scaling_two_stream_sqrt": (0.7, 1.3),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--only", choices=sorted(RUNS))
    args = ap.parse_args()

    for name, (lo, hi) in RUNS.items():
        if args.only and name != args.only:
            continue
        spec = spec_from_mapping("scaling_sweep", load_config(CONFIGS / f"{name}.cfg"),
                                 trials=args.trials)
        res = run_scaling_sweep(spec, workers=args.workers)
        write_outputs(res, Path(args.out_dir) / f"{name}.csv")
        print(f"# {name} (a={spec.scaling_a}, target [{lo}, {hi}])")
        for scheme, d in res.slopes.items():
            print(f"  {scheme.value:<8s} secrecy {d['secrecy'].slope:6.3f}  "
                  f"r_bob {d['r_bob'].slope:6.3f}  c_eve {d['c_eve'].slope:6.3f}")


if __name__ == "__main__":
    main()
