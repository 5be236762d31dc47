"""Expected-value formulas for the one-candidate scenario.

The scenario fixes a near-equilibrium shape of the imbalanced
three-object game with m = k + t + 1 players:

* k "mixer" players who each play R with probability r and P otherwise,
* t "committed" players pinned to pure P,
* one "candidate" player, the only one who ever plays S, with
  probability s (P otherwise).

Every function here returns the exact rational expected payoff of one
pure choice for one player class, with the other players as above.  Two
independent routes are provided:

* ``ev_raw`` evaluates the direct expectation sums, with per-player R
  probabilities and literal subset enumeration for the tie-count
  probabilities.  It is the slow, transparent oracle.
* ``ev_simplified`` evaluates closed forms valid when all mixers share
  one probability r.  The two routes agree exactly (rational equality).

The closed forms rest on two alternating binomial identities whose sums
``identity_check`` evaluates exactly, and the step that forces all
mixers to share one probability rests on corner sums whose strict
negativity ``corner_value`` certifies; both are exposed for audit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

Rational = Fraction | int

MAX_SUBSET_K = 20


class ScenarioError(ValueError):
    """Invalid scenario parameters or role."""


class Role(enum.Enum):
    """Player class crossed with the pure choice being evaluated.

    The candidate never plays R (it loses whenever only they could have
    supplied the S that R needs), so that pairing is omitted.
    """

    MIXER_R = "mixer:R"
    MIXER_P = "mixer:P"
    MIXER_S = "mixer:S"
    CANDIDATE_P = "candidate:P"
    CANDIDATE_S = "candidate:S"
    COMMITTED_R = "committed:R"
    COMMITTED_P = "committed:P"
    COMMITTED_S = "committed:S"


MIXER_ROLES = (Role.MIXER_R, Role.MIXER_P, Role.MIXER_S)
COMMITTED_ROLES = (Role.COMMITTED_R, Role.COMMITTED_P, Role.COMMITTED_S)


@dataclass(frozen=True)
class Scenario:
    """Counts and probabilities of the one-candidate scenario."""

    k: int
    t: int
    r: Fraction
    s: Fraction

    def __post_init__(self):
        if self.k < 1:
            raise ScenarioError(f"need at least one mixer, got k={self.k}")
        if self.t < 0:
            raise ScenarioError(f"committed player count must be >= 0, got {self.t}")
        for name in ("r", "s"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ScenarioError(f"{name}={v} is not a probability")

    @property
    def m(self) -> int:
        return self.k + self.t + 1


def _require_committed(role: Role, t: int):
    if role in COMMITTED_ROLES and t < 1:
        raise ScenarioError(f"{role.value} needs at least one committed player")


def ev_simplified(role: Role, sc: Scenario) -> Fraction:
    """Closed-form expected payoff for ``role`` under equal mixer odds.

    Exact rational arithmetic; the removable singularity of the R
    formulas at r = 0 is filled with its limit value s*(k+t+1) - 1.
    """
    _require_committed(role, sc.t)
    k, t = sc.k, sc.t
    r, s = Fraction(sc.r), Fraction(sc.s)
    m = k + t + 1
    one = Fraction(1)

    def r_formula(depth: int) -> Fraction:
        # s*m * (1 - (1-r)^depth) / (depth*r) - 1, continued across r = 0
        if r == 0:
            return s * m - 1
        return s * m * (1 - (1 - r) ** depth) / (depth * r) - 1

    def p_series(top: int) -> Fraction:
        return sum(
            (Fraction(comb(top, b), comb(k + t, b)) * r**b for b in range(1, top + 1)),
            Fraction(0),
        )

    if role is Role.MIXER_R:
        return r_formula(k)
    if role is Role.MIXER_P:
        return (one - s) * p_series(k - 1) - s
    if role is Role.MIXER_S:
        return -1 + (2 - s) * Fraction(m, 2) * (1 - r) ** (k - 1)
    if role is Role.CANDIDATE_P:
        return p_series(k)
    if role is Role.CANDIDATE_S:
        return -1 + m * (1 - r) ** k
    if role is Role.COMMITTED_R:
        return r_formula(k + 1)
    if role is Role.COMMITTED_P:
        return (one - s) * p_series(k) - s
    if role is Role.COMMITTED_S:
        return -1 + (2 - s) * Fraction(m, 2) * (1 - r) ** k
    raise ScenarioError(f"unknown role {role!r}")


def _count_r_probability(r_vec: Sequence[Fraction], count: int) -> Fraction:
    """Probability that exactly ``count`` of these players pick R, by
    literal enumeration of the player subsets."""
    idx = range(len(r_vec))
    total = Fraction(0)
    for chosen in combinations(idx, count):
        chosen_set = set(chosen)
        term = Fraction(1)
        for j in idx:
            term *= r_vec[j] if j in chosen_set else 1 - r_vec[j]
        total += term
    return total


def _count_r_distribution(r_vec: Sequence[Fraction]) -> list[Fraction]:
    """P(exactly j of these players pick R) for j = 0..len, via one pass
    over all player subsets."""
    n = len(r_vec)
    dist = [Fraction(0)] * (n + 1)
    for mask in range(1 << n):
        term = Fraction(1)
        picked = 0
        for j in range(n):
            if mask >> j & 1:
                term *= r_vec[j]
                picked += 1
            else:
                term *= 1 - r_vec[j]
        dist[picked] += term
    return dist


def ev_raw(
    role: Role, k: int, t: int, r_vec: Sequence[Rational], s: Rational
) -> Fraction:
    """Direct expectation sums with per-player mixer probabilities.

    Mixer roles are evaluated for the first mixer (``r_vec[0]``); a
    player's own mixing never enters the payoff of their pure deviation,
    so only ``r_vec[1:]`` matters for those roles.  Subset enumeration
    is exponential in k and refuses k > 20.
    """
    if len(r_vec) != k:
        raise ScenarioError(f"expected {k} mixer probabilities, got {len(r_vec)}")
    if k < 1:
        raise ScenarioError("need at least one mixer")
    if k > MAX_SUBSET_K:
        raise ScenarioError(f"subset enumeration infeasible for k={k} > {MAX_SUBSET_K}")
    _require_committed(role, t)
    rs = [Fraction(x) for x in r_vec]
    s = Fraction(s)
    if not 0 <= s <= 1 or any(not 0 <= x <= 1 for x in rs):
        raise ScenarioError("probabilities must lie in [0, 1]")
    m = k + t + 1
    others = rs[1:]

    if role in MIXER_ROLES:
        dist = _count_r_distribution(others)  # over the k-1 other mixers
    else:
        dist = _count_r_distribution(rs)  # over all k mixers

    def count_p(count: int) -> Fraction:
        return dist[len(dist) - 1 - count]

    if role is Role.MIXER_R:
        acc = Fraction(0)
        for kk in range(k):  # kk other mixers also picked R
            acc += Fraction(m - (kk + 1), kk + 1) * dist[kk]
        return s * acc - (1 - s)
    if role is Role.MIXER_P:
        acc = Fraction(0)
        for kk in range(k):  # kk other mixers also picked P
            acc += Fraction(m - (kk + t + 2), kk + t + 2) * count_p(kk)
        return (1 - s) * acc - s
    if role is Role.MIXER_S:
        quiet = dist[0]  # every other mixer picked P
        return quiet * ((1 - s) * (k + t) + s * Fraction(k + t - 1, 2)) - (1 - quiet)
    if role is Role.CANDIDATE_P:
        acc = Fraction(0)
        for kk in range(k + 1):
            acc += Fraction(k - kk, kk + t + 1) * count_p(kk)
        return acc
    if role is Role.CANDIDATE_S:
        quiet = dist[0]
        return (k + t) * quiet - (1 - quiet)
    if role is Role.COMMITTED_R:
        acc = Fraction(0)
        for kk in range(k + 1):
            acc += Fraction(m - (kk + 1), kk + 1) * dist[kk]
        return s * acc - (1 - s)
    if role is Role.COMMITTED_P:
        acc = Fraction(0)
        for kk in range(k + 1):
            acc += Fraction(k - kk, kk + t + 1) * count_p(kk)
        return (1 - s) * acc - s
    if role is Role.COMMITTED_S:
        quiet = dist[0]
        return quiet * ((1 - s) * (k + t) + s * Fraction(k + t - 1, 2)) - (1 - quiet)
    raise ScenarioError(f"unknown role {role!r}")


def ev_raw_oracle(
    role: Role, k: int, t: int, r_vec: Sequence[Rational], s: Rational
) -> Fraction:
    """Alias for :func:`ev_raw`, the transparent oracle route."""
    return ev_raw(role, k, t, r_vec, s)


def identity_check(k: int, t: int, b: int) -> tuple[bool, bool]:
    """Exactly evaluate the two alternating binomial sums behind the
    closed forms and compare them with their closed values.

    First sum (from the R-payoff reduction)::

        sum_{k'=0}^{b} ((m - (k'+1)) / (k'+1)) * (-1)^k' * C(b, k')
            = m/(1+b) - [b = 0]            with m = k + t + 1

    Second sum (from the P-payoff reduction)::

        sum_{k'=k-1-b}^{k-1} ((k-k'-1) / (k'+t+2))
            * (-1)^(b-(k-1)+k') * C(b, k-1-k')
            = 1/C(k+t, b)  for b >= 1,  else 0

    The bracket corrections at b = 0 are required for the sums to match
    their raw-expectation origins; without them both closed forms are
    off by exactly one at b = 0.
    """
    if not 0 <= b <= k - 1:
        raise ScenarioError(f"need 0 <= b <= k-1, got b={b}, k={k}")
    if t < 0:
        raise ScenarioError(f"committed player count must be >= 0, got {t}")
    m = k + t + 1

    sum1 = sum(
        (
            Fraction(m - (kk + 1), kk + 1) * (-1) ** kk * comb(b, kk)
            for kk in range(b + 1)
        ),
        Fraction(0),
    )
    closed1 = Fraction(m, 1 + b) - (1 if b == 0 else 0)

    sum2 = sum(
        (
            Fraction(k - kk - 1, kk + t + 2)
            * (-1) ** (b - (k - 1) + kk)
            * comb(b, (k - 1) - kk)
            for kk in range(k - 1 - b, k)
        ),
        Fraction(0),
    )
    closed2 = Fraction(1, comb(k + t, b)) if b >= 1 else Fraction(0)

    return sum1 == closed1, sum2 == closed2


def corner_value(k: int, t: int, l: int, s_corner: int) -> Fraction:
    """Corner evaluation of the multilinear sum that forces all mixers to
    share one probability.

    The sum ``sum_{b=1}^{l+1} (s*(-1)^b*m/(1+b) - (1-s)/C(k+t,b)) * C(l, b-1)``
    is evaluated exactly at the corner s = 0 or 1 with ``l`` of the free
    mixer variables at 1, and compared against its closed form:

        s = 0:  -m / ((k+t-l) * (k+t+1-l))
        s = 1:  -m / ((1+l) * (2+l))

    Both are strictly negative for every l <= k-2, which pins the sum
    below zero over the whole cube.  Raises if the sum and the closed
    form ever disagree; returns the (negative) exact value.
    """
    if s_corner not in (0, 1):
        raise ScenarioError(f"corner must be 0 or 1, got {s_corner}")
    if not 0 <= l <= k - 2:
        raise ScenarioError(f"need 0 <= l <= k-2, got l={l}, k={k}")
    if t < 0:
        raise ScenarioError(f"committed player count must be >= 0, got {t}")
    m = k + t + 1
    s = Fraction(s_corner)
    total = Fraction(0)
    for b in range(1, l + 2):
        coeff = s * (-1) ** b * Fraction(m, 1 + b) - (1 - s) * Fraction(1, comb(k + t, b))
        total += coeff * comb(l, b - 1)
    if s_corner == 0:
        closed = Fraction(-m, (k + t - l) * (k + t + 1 - l))
    else:
        closed = Fraction(-m, (1 + l) * (2 + l))
    if total != closed:
        raise ScenarioError(
            f"corner sum {total} disagrees with closed form {closed} "
            f"at k={k}, t={t}, l={l}, s={s_corner}"
        )
    return total
