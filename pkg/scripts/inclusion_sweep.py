"""Run the randomized inclusion-chain and sequence-limit checks over a grid of shapes."""

import argparse
import time
from dataclasses import dataclass

from detvar.harness import sequence_limit_check, verify_inclusion_chain


@dataclass
class SweepConfig:
    max_dim: int = 6
    trials: int = 200
    seed: int = 0


def sweep(cfg: SweepConfig):
    for m in range(2, cfg.max_dim + 1):
        for n in range(2, cfg.max_dim + 1):
            for r in range(min(m, n)):
                for r_low in range(r + 1):
                    start = time.perf_counter()
                    chain = verify_inclusion_chain(m, n, r, r_low, cfg.trials, cfg.seed)
                    limit = sequence_limit_check(m, n, r, r_low, cfg.trials, cfg.seed) if r > 0 else None
                    yield (m, n, r, r_low, chain, limit, time.perf_counter() - start)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-dim", type=int, default=SweepConfig.max_dim)
    parser.add_argument("--trials", type=int, default=SweepConfig.trials)
    parser.add_argument("--seed", type=int, default=SweepConfig.seed)
    args = parser.parse_args()
    cfg = SweepConfig(args.max_dim, args.trials, args.seed)

    failed = 0
    print("m n r r_low chain_fail chain_worst limit_fail limit_worst seconds")
    for m, n, r, r_low, chain, limit, secs in sweep(cfg):
        lf = limit.failures if limit else 0
        lw = limit.worst_violation if limit else 0.0
        failed += chain.failures + lf
        print(f"{m} {n} {r} {r_low} {chain.failures} {chain.worst_violation:.2e} {lf} {lw:.2e} {secs:.2f}")
    print(f"total failures: {failed}")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
