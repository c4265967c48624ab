"""Run the desk-scale experiments and write one CSV report per experiment.

    python3 scripts/run_benchmarks.py --out results --seeds 5
    python3 scripts/run_benchmarks.py --only errorDecay storageCurve --quick
"""

import argparse
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from shiftlr.bench import EXPERIMENTS, run_experiment, write_report

log = logging.getLogger("benchmarks")


@dataclass
class BenchConfig:
    out: Path = Path("results")
    seeds: int = 5
    quick: bool = False
    only: list = field(default_factory=lambda: list(EXPERIMENTS))


def experiment_params(cfg):
    seeds = list(range(cfg.seeds))
    big = 64 if cfg.quick else 128
    return {
        "errorDecay": dict(kind="shiftedRank1Sum", M=32, N=32, L=5, L_true=5, seeds=seeds),
        "svRatio": dict(kind="shiftedRank1Sum", M=big, N=big, L=3, L_true=3, seeds=seeds),
        "storageCurve": dict(kind="seismicLike", M=big, N=big, L=10, L_true=5, noise_level=0.01, seeds=seeds),
        "runtimeScaling": dict(N=128, L=3, Ms=(128, 256, 512) if cfg.quick else (128, 256, 512, 1024, 2048), seeds=seeds[:1]),
        "matvecScaling": dict(Ls=(1, 10), Ms=tuple(2**p for p in range(10, 14 if cfg.quick else 17)), seeds=seeds[:1]),
        "noiseRecovery": dict(M=64, N=64, psnrs=(20, 19, 18), seeds=seeds),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=BenchConfig.out)
    p.add_argument("--seeds", type=int, default=BenchConfig.seeds)
    p.add_argument("--quick", action="store_true", help="smaller sizes for a fast smoke run")
    p.add_argument("--only", nargs="+", choices=EXPERIMENTS, default=list(EXPERIMENTS))
    cfg = BenchConfig(**vars(p.parse_args(argv)))
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    cfg.out.mkdir(parents=True, exist_ok=True)
    params = experiment_params(cfg)
    for name in cfg.only:
        t0 = time.perf_counter()
        rows = run_experiment(name, params[name])
        path = cfg.out / f"{name}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            write_report(rows, fh)
        log.info("%s: %d rows -> %s (%.1fs)", name, len(rows), path, time.perf_counter() - t0)


if __name__ == "__main__":
    main()
