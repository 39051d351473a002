"""Regenerate every CSV dataset into one directory.

    python3 scripts/reproduce_figures.py --out-dir data/
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass, field
from pathlib import Path

from tcbell.cli import main as cli
from tcbell.config import RunConfig, dump_config


@dataclass
class Datasets:
    out_dir: Path = Path("data")
    wigner_taus: tuple[float, ...] = (0.0, 0.25, 0.5)
    approx_nbars: tuple[float, ...] = (10.0, 20.0, 40.0, 80.0, 160.0)
    overlap_nbar: float = 12.16
    engines: tuple[str, ...] = ("exact", "approx")
    config: RunConfig = field(default_factory=RunConfig)

    def jobs(self, config_path: Path) -> list[tuple[str, list[str]]]:
        cfg = ["--config", str(config_path)]
        jobs = [
            (f"wigner_tau{tau:g}.csv", ["wigner", *cfg, "--tau", str(tau)]) for tau in self.wigner_taus
        ]
        nbars = ",".join(f"{n:g}" for n in self.approx_nbars)
        jobs.append(("approx_fidelity.csv", ["approx-fidelity", *cfg, "--nbar-list", nbars]))
        for engine in self.engines:
            jobs += [
                (f"protocol_{engine}.csv", ["protocol", *cfg, "--engine", engine]),
                (f"fidelity_vs_nbar_{engine}.csv", ["fidelity-vs-nbar", *cfg, "--engine", engine]),
                (f"fidelity_vs_tau_{engine}.csv", ["fidelity-vs-tau", *cfg, "--engine", engine]),
            ]
        for j in (-1, 1):
            jobs.append(
                (f"overlap_j{j:+d}.csv", ["overlap", "--nbar", str(self.overlap_nbar), "--j", str(j)])
            )
        return jobs


def run(datasets: Datasets) -> list[Path]:
    datasets.out_dir.mkdir(parents=True, exist_ok=True)
    config_path = datasets.out_dir / "config.json"
    dump_config(datasets.config, config_path)
    written = []
    for name, argv in datasets.jobs(config_path):
        target = datasets.out_dir / name
        if cli([*argv, "--out", str(target)]) != 0:
            raise SystemExit(f"failed: {' '.join(argv)}")
        logging.info("wrote %s", target)
        written.append(target)
    return written


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out-dir", type=Path, default=Path("data"))
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    run(Datasets(out_dir=args.out_dir))
