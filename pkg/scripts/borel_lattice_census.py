#!/usr/bin/env python3
"""Census of the Borel subgroup lattice at small primes.

For each prime, enumerates every subgroup of the upper-triangular group,
classifies it, and tabulates which witness case fires, how often the
diagonal-parts group sits inside the subgroup, and the distribution of
subgroup orders. Useful for eyeballing how the trichotomy splits.
"""

import sys
from collections import Counter

from gl2orbits.modarith import PrimeModulus
from gl2orbits.semisimplify import classify_semisimplification
from gl2orbits.sweep import enumerate_upper_triangular_subgroups


def main(primes=(3, 5, 7)) -> int:
    for p in primes:
        m = PrimeModulus(p)
        cases = Counter()
        contained = 0
        orders = Counter()
        total = 0
        for G in enumerate_upper_triangular_subgroups(m):
            total += 1
            orders[G.order] += 1
            result = classify_semisimplification(G)
            cases[type(result.witness).__name__] += 1
            if result.contained_in_G or result.Gss.is_subgroup_of(G):
                contained += 1
        print(f"l = {p}: {total} subgroups of the Borel (order {p * (p - 1) ** 2})")
        for name, count in sorted(cases.items()):
            print(f"  {name:<22} {count}")
        print(f"  diagonal parts contained in {contained}/{total}")
        common = ", ".join(f"{o}:{c}" for o, c in sorted(orders.items()))
        print(f"  orders {common}")
    return 0


if __name__ == "__main__":
    primes = tuple(int(a) for a in sys.argv[1:]) or (3, 5, 7)
    sys.exit(main(primes))
