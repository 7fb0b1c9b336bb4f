"""Mean ID and OOD accuracy of logistic models with and without extra
training data from a third distribution, over a range of seeds.

    python scripts/more_data_sweep.py --seeds 10
"""
import argparse
import warnings

from probit_trends.scenarios import ScenarioConfig, run_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--first-seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'seed':>4}  {'ID aux=0':>9} {'ID aux=100':>10}  {'OOD aux=0':>9} {'OOD aux=100':>11}  ordering")
    held = 0
    for seed in range(args.first_seed, args.first_seed + args.seeds):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            g = run_scenario(ScenarioConfig.default("more_data", seed=seed)).diagnostics
        i0, i1 = g["group_mean_id"]["aux=0"], g["group_mean_id"]["aux=100"]
        o0, o1 = g["group_mean_ood"]["aux=0"], g["group_mean_ood"]["aux=100"]
        ok = o1 > o0 and i1 < i0
        held += ok
        print(f"{seed:>4}  {i0:9.4f} {i1:10.4f}  {o0:9.4f} {o1:11.4f}  {'yes' if ok else 'no'}")
    print(f"better OOD and worse ID in {held}/{args.seeds} seeds")


if __name__ == "__main__":
    main()
