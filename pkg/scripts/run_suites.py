"""Run every named check suite across a few dimensions and summarize."""

from __future__ import annotations

import argparse
import sys

from seqmeas.suites import SUITE_NAMES, run_check


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cases", type=int, default=100)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--dims", type=str, default="2,3,4")
    args = parser.parse_args()

    failed = 0
    for dim in (int(d) for d in args.dims.split(",")):
        for name in SUITE_NAMES:
            report = run_check(name, dim=dim, cases=args.cases, seed=args.seed)
            mark = "ok" if report.ok else "FAIL"
            print(
                f"dim={dim} {name:<16} cases={report.cases_run:<6} "
                f"{mark:<5} {report.wall_time_s:6.2f}s"
            )
            failed += len(report.failures)
            for failure in report.failures:
                print(f"    [case {failure.case}] {failure.detail} gap={failure.gap:.3e}")
    print(f"total failures: {failed}")
    return 0 if failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
