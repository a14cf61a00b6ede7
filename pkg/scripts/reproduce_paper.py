"""Run every reproducibility check and write a JSON summary.

    python3 scripts/reproduce_paper.py [--out results.json] [--seed N]
"""

import argparse
import json
import sys
import time

from k3mono.checks import REGISTRY, CheckConfig, run_checks


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", help="write the JSON summary here")
    p.add_argument("--seed", type=int, default=CheckConfig.seed)
    args = p.parse_args()
    cfg = CheckConfig(seed=args.seed)
    summary = []
    for section in REGISTRY:
        t0 = time.perf_counter()
        results = run_checks([section], cfg)
        dt = time.perf_counter() - t0
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.section:<14} {r.label:<48} {r.detail}".rstrip())
        summary.append({"section": section, "seconds": round(dt, 3), "results": [r.to_json() for r in results]})
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"seed": args.seed, "sections": summary}, fh, indent=2, ensure_ascii=False)
    return 0 if all(r["passed"] for s in summary for r in s["results"]) else 1


if __name__ == "__main__":
    sys.exit(main())
