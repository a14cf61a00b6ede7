"""Check the R_n membership lemma on larger boxes than the default.

    python3 scripts/verify_lemma.py --bound 40 [--full-form]

--full-form replaces the congruence shortcut for O* with the induced
action on the discriminant form (much slower, same answer).
"""

import argparse
import sys
import time

from k3mono.modular import verify_modular_lemma


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--bound", type=int, default=20)
    p.add_argument("--n", type=int, nargs="*", default=[1, 2, 3, 4])
    p.add_argument("--full-form", action="store_true")
    args = p.parse_args()
    ok = True
    for n in args.n:
        t0 = time.perf_counter()
        rep = verify_modular_lemma(n, args.bound, use_form=args.full_form)
        ok &= rep.ok
        print(f"n={n} bound={args.bound}: {rep.checked} matrices, {rep.in_subgroup} in the subgroup, "
              f"{len(rep.counterexamples)} counterexamples ({time.perf_counter() - t0:.2f} s)")
        for m in rep.counterexamples[:5]:
            print("   ", m.rows)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
