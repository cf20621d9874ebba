"""Print the worked examples: cosine gaps, the two-piece injective example,
the unbounded piecewise-linear family and the cosine C2 witnesses."""
import gmpy2
from gmpy2 import mpq

from gaplab.gaps import gap_report
from gaplab.periodic import cosine, pl, shifted_cosine
from gaplab.scalar import DEFAULT_CONTEXT as CTX
from gaplab.theorems import construct_c2_witness, verify_general_bound, verify_main_construction


def show(label, report):
    gaps = ", ".join(f"{float(g):.5f}" for g in report.gap_set)
    print(f"{label:<42} |G| = {report.count:<3} {{{gaps}}}")


def main():
    with CTX.working():
        pi = gmpy2.const_pi()
    show("cos, alpha=1/4, N=3", gap_report(cosine(), mpq(1, 4), 0, 3))
    show("cos(x - pi/2), alpha=1/4, N=3", gap_report(shifted_cosine(pi / 2), mpq(1, 4), 0, 3))

    f = pl((0, "3/4", 1, 1), ("3/4", 1, 1, "-1/2"))
    r = verify_general_bound(f, pi / 16, 7)
    show(f"two-piece example, bound {r.upper}", r.witness)
    for e in r.witness.entries:
        print(f"    {float(e.lower_value):.5f} -> {float(e.upper_value):.5f}  {float(e.length):.5f}  {e.kind}")

    print()
    for n in (1, 3, 10, 25, 50):
        r = verify_main_construction(n)
        con = r.extra["construction"]
        print(f"main n={n:<3} N={con.N:<4} eps={con.epsilon}  |G| = {r.observed:<4} "
              f"ladder contained: {r.extra['ladder_contained']}")

    print()
    for n in (2, 5, 20, 50):
        w, r = construct_c2_witness(cosine(), n)
        print(f"cosine n={n:<3} alpha={float(w.alpha):.10f}  |G| = {r.observed}")


if __name__ == "__main__":
    main()
