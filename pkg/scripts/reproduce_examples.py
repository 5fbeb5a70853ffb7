"""Print the two worked examples as text reports, with timings."""

import time

from galois_euler.cli import EXAMPLES, evaluate_file
from galois_euler.report import render_text
from galois_euler.scenario import bundled_dir


def main() -> None:
    for name in EXAMPLES:
        t0 = time.perf_counter()
        reports = evaluate_file(bundled_dir() / name)
        elapsed = time.perf_counter() - t0
        for rep in reports:
            print(render_text(rep))
        print(f"[{name}: {elapsed:.2f} s]\n")


if __name__ == "__main__":
    main()
