"""Write the key-rate curves behind the two rate plots as CSV.

rates_vs_error.csv: symmetric error sweep for bb84-std, bb84-alt and gr10.
rates_vs_delta.csv: gr10-mod rate against Delta_x for several p, beta = 1
and the beta = 0.8 inset.

    python scripts/figure_curves.py [outdir]
"""

import csv
import sys
from pathlib import Path

import numpy as np

from teleqkd import keyrate
from teleqkd.keyrate import RateOptions


def error_sweep(steps: int = 251):
    for e in np.linspace(0.0, 0.25, steps):
        e = float(e)
        yield (
            e,
            keyrate.bb84_std_rate(e, e).r,
            keyrate.bb84_alt_rate(e, e).r,
            keyrate.gr10_rate(e).r,
        )


def delta_sweep(steps: int = 201):
    for beta, ps in ((1.0, (0.46, 0.47, 0.48, 0.49, 0.50)), (0.8, (0.46, 0.49))):
        opts = RateOptions(beta=beta)
        for p in ps:
            for d in np.linspace(0.0, 1 - 1 / (4 * p), steps):
                yield float(d), keyrate.gr10_mod_rate(p, float(d), opts).r, p, beta


def write(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows([f"{v:.9g}" for v in row] for row in rows)
    print(f"wrote {path}")


def main(outdir: str = "results") -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    write(out / "rates_vs_error.csv", ("eps", "bb84_std", "bb84_alt", "gr10"), error_sweep())
    write(out / "rates_vs_delta.csv", ("Delta_x", "r", "p", "beta"), delta_sweep())


if __name__ == "__main__":
    main(*sys.argv[1:])
