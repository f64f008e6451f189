"""Rates versus SNR for a large pool and for a pool of exactly K jammers."""
import argparse
from pathlib import Path

from ojs.experiments import load_config, run_fixed_sweep, spec_from_mapping, write_outputs

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    for name in ("fixed_pool", "fixed_pool_small"):
        spec = spec_from_mapping("fixed_sweep", load_config(CONFIGS / f"{name}.cfg"), trials=args.trials)
        res = run_fixed_sweep(spec, workers=args.workers)
        write_outputs(res, Path(args.out_dir) / f"{name}.csv")
        print(f"# {name}: S={spec.config.s}")
        for row in res.summary:
            print(f"{row.snr_db:5.1f} dB {row.scheme.value:<12s} r_bob={row.mean_r_bob:6.3f} "
                  f"c_eve={row.mean_c_eve:6.3f} secrecy={row.mean_secrecy:6.3f}")


if __name__ == "__main__":
    main()
