"""Compare the coordinate-wise extractor on F_16 with the coordinates of the
field product x * x' on the same sources.

The coordinate-wise map is what the catalog audits. Its statistical distance
at k = 1 exceeds sqrt(p^(n+k-2)/(q1 q2)); taking the first coordinates of the
field product instead stays well inside it. The script prints both, exactly,
for every irreducible quartic over F_2.
"""

import itertools
import math
from collections import Counter
from fractions import Fraction

from bilex.field_fpn import ExtFieldDesc, is_irreducible, mult_subgroup_fpn


def sd(tally, alphabet):
    total = sum(tally.values())
    return sum(abs(Fraction(tally.get(s, 0), total) - Fraction(1, alphabet))
               for s in range(alphabet)) / 2


def main():
    for lower in itertools.product(range(2), repeat=4):
        poly = lower + (1,)
        if not is_irreducible(poly, 2):
            continue
        fld = ExtFieldDesc(2, 4, poly)
        G = mult_subgroup_fpn(fld, 15).elements
        for k in (1, 2):
            coord = Counter(tuple(a * b for a, b in zip(x.coords[:k], y.coords[:k])) for x in G for y in G)
            field = Counter((x * y).coords[:k] for x in G for y in G)
            index = {s: i for i, s in enumerate(itertools.product(range(2), repeat=k))}
            d_coord = sd(Counter({index[s]: c for s, c in coord.items()}), 2**k)
            d_field = sd(Counter({index[s]: c for s, c in field.items()}), 2**k)
            bound = math.sqrt(2 ** (4 + k - 2) / 225)
            print(f"f={','.join(map(str, poly))} k={k}: coordinate-wise {d_coord} = {float(d_coord):.4f}, "
                  f"field product {d_field} = {float(d_field):.4f}, bound {bound:.4f}")


if __name__ == "__main__":
    main()
