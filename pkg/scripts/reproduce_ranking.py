"""Rank the published final-evaluation EERs with the 3/2/1 points scheme.

    python scripts/reproduce_ranking.py [tests/data/final_evaluation_eer.csv]
"""

import csv
import sys
from pathlib import Path

from sigverify.evaluation import rank_teams

DEFAULT = Path(__file__).resolve().parents[1] / "tests" / "data" / "final_evaluation_eer.csv"


def main():
    path = Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT
    table = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            table.setdefault(int(row["task"]), {})[row["team"]] = float(row["eer"])
    sys.stdout.write(rank_teams(table).to_markdown())


if __name__ == "__main__":
    main()
