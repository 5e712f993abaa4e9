from __future__ import annotations

import random

from hypothesis import strategies as st

from modram.poly import Poly, PolyRing

PRIMES = (2, 3, 5)


def random_poly(ring: PolyRing, rng: random.Random, max_degree: int = 3, terms: int = 3,
                constant_free: bool = False) -> Poly:
    out = ring.zero()
    for _ in range(terms):
        lo = 1 if constant_free else 0
        d = rng.randint(lo, max_degree)
        exp = [0] * ring.nvars
        for _ in range(d):
            exp[rng.randrange(ring.nvars)] += 1
        out = out + ring.monomial(exp, rng.randrange(1, ring.p))
    return out


@st.composite
def polys(draw, ring: PolyRing, max_degree: int = 3, max_terms: int = 4, constant_free: bool = False) -> Poly:
    n = ring.nvars
    lo = 1 if constant_free else 0
    exps = st.lists(st.integers(0, max_degree), min_size=n, max_size=n).filter(lambda e: lo <= sum(e) <= max_degree)
    terms = draw(st.dictionaries(exps.map(tuple), st.integers(1, ring.p - 1), max_size=max_terms))
    return ring.poly(terms)
