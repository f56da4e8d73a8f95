"""Print the security thresholds of every model."""

import numpy as np

from teleqkd import keyrate
from teleqkd.keyrate import Model, RateOptions


def rows():
    yield "bb84-std", "eps", keyrate.threshold(Model.BB84_STD, "eps").value
    yield "bb84-alt", "eps", keyrate.threshold(Model.BB84_ALT, "eps").value
    yield "gr10", "eps_x", keyrate.threshold(Model.GR10, "eps-x").value
    yield "gr10-mod", "p at Delta_x=0", keyrate.threshold(Model.GR10_MOD, "p", Delta_x=0.0).value
    for beta in (1.0, 0.8):
        for p in np.arange(0.46, 0.505, 0.01):
            th = keyrate.threshold(Model.GR10_MOD, "delta-x", p=float(p), opts=RateOptions(beta=beta))
            yield "gr10-mod", f"Delta_x at p={p:.2f} beta={beta}", th.value


def main() -> None:
    for model, what, value in rows():
        shown = "none" if value is None else f"{value:.6f}"
        print(f"{model:9s} {what:28s} {shown}")


if __name__ == "__main__":
    main()
