"""Run the claims audit and write the JSON report next to a timing log."""

import argparse
import logging
import sys
import time
from pathlib import Path

from primefreq.analysis import claims_audit, decades, mismatches


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=lambda s: int(float(s)), default=10**8)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/audit.json"))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO)

    t0 = time.perf_counter()
    report = claims_audit(args.limit, checkpoints=[59, 67, *decades(10, args.limit)],
                          workers=args.workers)
    elapsed = time.perf_counter() - t0
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(report.to_json())
    for claim_id, status in report.statuses().items():
        print(f"{claim_id:20s} {status.value}")
    bad = mismatches(report)
    print(f"{len(report.claims)} claims in {elapsed:.1f}s, {len(bad)} unexpected; wrote {args.out}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
