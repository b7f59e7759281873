"""Tabulate alpha_s = Omega(det^s)(1), c_s and alpha_{r,s} for the classical process."""
import argparse
import json

from omega_forge.omega import OmegaOperator, cayley_constants


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--s-max", type=int, default=4)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    tables = []
    for n in args.n:
        cc = cayley_constants(OmegaOperator(n), args.s_max)
        tables.append(cc.to_json())
        if args.json:
            continue
        print(f"n = {n}")
        for s in range(1, args.s_max + 1):
            row = "  ".join(f"a({r},{s})={cc.alphas_rs[(r, s)]}" for r in range(1, s + 1))
            print(f"  s={s}  alpha={cc.alphas[s]}  c={cc.cs[s]}  {row}")
    if args.json:
        print(json.dumps(tables, indent=2))


if __name__ == "__main__":
    main()
