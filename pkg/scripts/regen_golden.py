"""Rewrite tests/golden/*.json from the bundled scenarios.

Run only after a deliberate change to report contents; the golden files
guard against accidental drift.
"""

from pathlib import Path

from galois_euler.cli import evaluate_file
from galois_euler.report import dumps
from galois_euler.scenario import bundled_paths

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> None:
    GOLDEN.mkdir(exist_ok=True)
    for path in bundled_paths():
        (GOLDEN / path.name).write_text(dumps(evaluate_file(path)))
        print(f"wrote {path.name}")


if __name__ == "__main__":
    main()
