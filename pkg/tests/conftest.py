from fractions import Fraction

import pytest

from semifluid import GenSpec, canonicalize, generate


def F(text) -> Fraction:
    return Fraction(text)


def make_instance(depth, width, height, rows):
    """rows: (length, volume, value) triples in any fraction-able form."""
    return canonicalize(F(depth), F(width), F(height),
                        [(F(l), F(v), F(w)) for l, v, w in rows])


def generated(family, n, seed, digits=2, factor="1"):
    return generate(GenSpec(family=family, n_items=n, length_digits=digits,
                            volume_factor=F(factor), seed=seed)).instance


def small_mixed_instances(count, seed0=1, max_size=4):
    """A deterministic mix of small easy and hard instances for property tests."""
    instances = []
    for k in range(count):
        seed = seed0 + k
        if k % 2 == 0:
            instances.append(generated("easy", 2 + k % max_size, seed))
        else:
            instances.append(generated("hard", 2 + k % max_size, seed,
                                       factor="3/2" if k % 4 == 1 else "1"))
    return instances


@pytest.fixture
def two_item_gap_instance():
    """Two items in a 4 x 1 x 6 container: the ceiling-split-only space
    tops out at 24 although filling all of item 1 over part of item 0
    would be worth 30."""
    return make_instance(4, 1, 6, [(4, 24, 24), (2, 12, 18)])
