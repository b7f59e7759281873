"""a_omega for the classical process on f_1^r_1 ... f_(n-1)^r_(n-1) det^r, next to
the free/forced-zero verdict of the coefficient family."""
import argparse
import itertools

from omega_forge import weightlattice as wl
from omega_forge.omega import OmegaOperator, a_omega_classical, classical_witness


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--max-exp", type=int, default=3)
    args = ap.parse_args()
    n = args.n
    op = OmegaOperator(n)
    for exps in itertools.product(range(args.max_exp + 1), repeat=n - 1):
        for r in range(args.max_exp + 1):
            mu = classical_witness(op, list(exps), r).mu
            verdict = "free" if wl.is_polynomial_dominant(wl.sub(mu, wl.determinant_weight(n))) else "forced-zero"
            a = a_omega_classical(op, list(exps), r) if r >= 1 else 0
            print(f"mu={mu}  exps={exps} r={r}  {verdict:11s}  a={a}")


if __name__ == "__main__":
    main()
