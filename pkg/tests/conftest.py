import random
from fractions import Fraction
from itertools import product

import pytest

from rps_forge.core import GameRule, TableRule, all_tie, enumerate_multisets, win


def random_table_rule(rng: random.Random, m: int, n: int) -> GameRule:
    """A random game: every mixed-support multiset gets a winner drawn
    uniformly from its support, monosets tie."""
    table = {}
    for size in range(1, m + 1):
        for counts, _ in enumerate_multisets(n, size):
            support = [i for i, c in enumerate(counts) if c]
            if len(support) == 1:
                table[counts] = all_tie(size)
            else:
                o = rng.choice(support)
                table[counts] = win(o, counts[o])
    return GameRule(
        m=m,
        labels=tuple(f"o{i}" for i in range(n)),
        winner_fn=TableRule(table),
        table_sizes=frozenset(range(1, m + 1)),
    )


def ordered_uniform_payoffs(rule: GameRule) -> list[Fraction]:
    """Independent oracle: average payoff of each object over all n^(m-1)
    ordered opponent vectors."""
    from rps_forge.core import payoff_vector

    m, n = rule.m, rule.n
    out = []
    for o in range(n):
        acc = Fraction(0)
        for opps in product(range(n), repeat=m - 1):
            acc += payoff_vector(rule, [o, *opps])[0]
        out.append(acc / n ** (m - 1))
    return out


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
