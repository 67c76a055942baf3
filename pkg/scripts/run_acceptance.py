"""
Desk-scale acceptance sweep for the extremal searches.

Runs every case of src.extremal.acceptance for c in {2, ..., c_max} with a
progress bar and prints (or writes) a JSON summary.

Usage:
    python scripts/run_acceptance.py [--c-max 4] [--output summary.json]

Exit status is 1 when any case fails.
"""

import argparse
import json
import os
import sys

from tqdm import tqdm

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.extremal.acceptance import acceptance_cases, check_case  # noqa: E402
from src.observability import setup_logging  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description="Desk-scale extremal acceptance sweep")
    parser.add_argument("--c-max", type=int, default=4)
    parser.add_argument("--output", help="write the JSON summary here instead of stdout")
    args = parser.parse_args()

    setup_logging("WARNING")
    results = [check_case(p) for p in tqdm(acceptance_cases(args.c_max), desc="acceptance", unit="case")]
    summary = {
        "cases": len(results),
        "failed": sum(not r["passed"] for r in results),
        "results": results,
    }

    text = json.dumps(summary, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)
    return 1 if summary["failed"] else 0


if __name__ == "__main__":
    sys.exit(main())
