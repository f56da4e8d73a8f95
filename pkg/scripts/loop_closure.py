"""Simulate each purification attack and compare the estimated error rates
with those implied by its weights; also rerun the no-attack statistics.

    python scripts/loop_closure.py [rounds] [seed]
"""

import sys

from teleqkd.checks import simproto_suite


def main(rounds: str = "100000", seed: str = "7") -> int:
    results = list(simproto_suite(int(rounds), int(seed)))
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))
