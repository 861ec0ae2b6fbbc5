import random

import pytest
from hypothesis import strategies as st

from conjquot.schemes import CurveType, Oval, RealScheme, default_catalog


def random_forest(rng: random.Random, n_ovals: int) -> tuple[Oval, ...]:
    """Uniform-ish random forest: attach each new oval to a random spot."""
    nodes: list[list] = []
    roots: list[list] = []
    for _ in range(n_ovals):
        node: list = []
        parent = rng.randrange(len(nodes) + 1)
        if parent == len(nodes):
            roots.append(node)
        else:
            nodes[parent].append(node)
        nodes.append(node)

    def freeze(node: list) -> Oval:
        return Oval(tuple(freeze(c) for c in node))

    return tuple(freeze(r) for r in roots)


def forests(max_ovals: int, min_ovals: int = 0):
    return st.integers(min_ovals, max_ovals).flatmap(
        lambda n: st.randoms(use_true_random=False).map(
            lambda rng: random_forest(rng, n)
        )
    )


def schemes_strategy(max_ovals: int = 9):
    return st.tuples(
        forests(max_ovals),
        st.sampled_from([CurveType.ONE, CurveType.TWO, CurveType.UNKNOWN]),
    ).map(lambda t: RealScheme(t[0], False, t[1]))


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()
