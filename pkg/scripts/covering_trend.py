"""Monte Carlo covering radius of random subspace codebooks versus size."""
import argparse
from pathlib import Path

from ojs.experiments import load_config, run_covering, spec_from_mapping, write_outputs

CONFIG = Path(__file__).resolve().parent.parent / "configs" / "covering.cfg"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/covering.csv")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    res = run_covering(spec_from_mapping("covering", load_config(CONFIG)), workers=args.workers)
    write_outputs(res, args.out)
    for m, mean, reps in res.rows:
        print(f"M={m:4d}  {mean:.4f}  reps={[round(r, 4) for r in reps]}")
    print(f"log-log slope {res.slope:.3f}")


if __name__ == "__main__":
    main()
