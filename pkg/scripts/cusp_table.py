"""Weight table and cusp exponents per n."""
import argparse

from selmer2.cusp import haar_exponent, verify_cusp_lemma, weight_table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3])
    args = ap.parse_args()
    for n in args.n:
        haar = " ".join(str(x) for x in haar_exponent(n).s_exponents)
        print(f"n = {n}, haar s-exponents {haar}")
        for i, j, s, disp in weight_table(n):
            tag = "" if disp is None else ("  displayed ok" if disp else "  displayed MISMATCH")
            print(f"  b_{i},{j}: {' '.join(str(x) for x in s)}{tag}")
        if n <= 4:
            rep = verify_cusp_lemma(n)
            print(f"  lemma {'passes' if rep.passed else 'FAILS'}: {rep.subsets_checked} saturated sets, "
                  f"max exponent {rep.max_exponent} at {list(rep.witness)}")


if __name__ == "__main__":
    main()
