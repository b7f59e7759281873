"""Run the degree-bounded generator search for binary forms of several degrees."""
import argparse
import time

from omega_forge import invariantize as inv
from omega_forge import reps
from omega_forge.polycore import to_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degrees", type=int, nargs="+", default=[1, 2, 3, 4])
    ap.add_argument("--bound", type=int, default=4, help="degree bound in the coefficients")
    args = ap.parse_args()
    for d in args.degrees:
        V = reps.dual_action_module(reps.binary_forms_module(d))
        bound = args.bound if d < 4 else min(args.bound, 3)  # S^4 of the quartic is 70-dimensional
        t0 = time.perf_counter()
        report = inv.hilbert_generators(V, inv.binary_form_weight(d), bound)
        dt = time.perf_counter() - t0
        dims = " ".join(f"{r.degree}:{r.oracle_dim}" for r in report.records)
        print(f"d={d} bound={bound} dims[{dims}] agreement={report.agreement} ({dt:.2f}s)")
        for e, g in report.generators:
            print(f"    degree {e}: {to_text(g)}")


if __name__ == "__main__":
    main()
