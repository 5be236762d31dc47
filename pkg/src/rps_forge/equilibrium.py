"""Mixed strategies, expected payoffs, and equilibrium computation.

The closed-form solver ``solve_symmetric_rps3`` handles the imbalanced
three-object family, where the symmetric equilibrium (r, p, s) satisfies

    (p + r)^m = p + r^m,    (s + p)^m = s + p^m,    r + p + s = 1,

and the interior solution is isolated by nested bracketed bisection.
Everything else is desk-scale numerics: exact expectation by multiset
convolution, deviation-gap verification, and a seeded multistart search
whose outputs are only ever reported after independent verification.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import GameError, GameRule, eval_outcome, tie_payoff

Number = float | Fraction
Vector = tuple[Number, ...]

PROB_SUM_TOL = 1e-12


class SolverError(RuntimeError):
    """No interior equilibrium could be bracketed."""


@dataclass(frozen=True)
class MixedProfile:
    """One probability vector over objects per player."""

    vectors: tuple[Vector, ...]
    symmetric: bool = False

    def __post_init__(self):
        for v in self.vectors:
            if any(p < 0 for p in v):
                raise GameError(f"negative probability in {v}")
            if abs(float(sum(v)) - 1.0) > PROB_SUM_TOL:
                raise GameError(f"probabilities sum to {float(sum(v))}, not 1")
        if self.symmetric and len(set(self.vectors)) > 1:
            raise GameError("symmetric profile with differing vectors")

    @property
    def m(self) -> int:
        return len(self.vectors)


def symmetric_profile(vector: Sequence[Number], m: int) -> MixedProfile:
    v = tuple(vector)
    return MixedProfile(vectors=(v,) * m, symmetric=True)


def uniform_profile(rule: GameRule) -> MixedProfile:
    v = tuple(Fraction(1, rule.n) for _ in range(rule.n))
    return symmetric_profile(v, rule.m)


def choice_count_distribution(
    vectors: Sequence[Vector], n: int
) -> dict[tuple[int, ...], Number]:
    """Distribution over count vectors of the objects picked by ``vectors``."""
    dist: dict[tuple[int, ...], Number] = {(0,) * n: 1}
    for v in vectors:
        nxt: dict[tuple[int, ...], Number] = {}
        for counts, pr in dist.items():
            for o, po in enumerate(v):
                if po == 0:
                    continue
                key = counts[:o] + (counts[o] + 1,) + counts[o + 1 :]
                nxt[key] = nxt.get(key, 0) + pr * po
        dist = nxt
    return dist


def _payoff_against(rule: GameRule, pure: int, opp_counts: tuple[int, ...]) -> Fraction:
    combined = list(opp_counts)
    combined[pure] += 1
    out = eval_outcome(rule, combined)
    if out.is_tie:
        return Fraction(0)
    if out.winner == pure:
        return tie_payoff(rule.m, out.winner_count)
    return Fraction(-1)


def expected_payoff(
    rule: GameRule, profile: MixedProfile, player: int, pure: int | str
) -> Number:
    """Expected payoff to ``player`` for the pure choice ``pure`` while the
    other players mix according to ``profile``.  Exact when the profile is
    rational."""
    if profile.m != rule.m:
        raise GameError(f"profile has {profile.m} players, game has {rule.m}")
    o = pure if isinstance(pure, int) else rule.index_of(pure)
    others = [v for i, v in enumerate(profile.vectors) if i != player]
    total: Number = 0
    for counts, pr in choice_count_distribution(others, rule.n).items():
        total += pr * _payoff_against(rule, o, counts)
    return total


@dataclass(frozen=True)
class NashGapReport:
    """Per-player pure-strategy payoffs and best-deviation gaps."""

    payoffs: tuple[tuple[float, ...], ...]
    gaps: tuple[float, ...]
    gap: float

    def is_eps_nash(self, eps: float) -> bool:
        return self.gap <= eps


def nash_gap(rule: GameRule, profile: MixedProfile) -> NashGapReport:
    """How much any player could gain by deviating to a pure strategy."""
    per_player: list[tuple[float, ...]] = []
    gaps: list[float] = []
    for i in range(profile.m):
        others = [v for j, v in enumerate(profile.vectors) if j != i]
        dist = choice_count_distribution(others, rule.n)
        u = []
        for o in range(rule.n):
            tot = 0.0
            for counts, pr in dist.items():
                tot += float(pr) * float(_payoff_against(rule, o, counts))
            u.append(tot)
        current = sum(float(p) * uo for p, uo in zip(profile.vectors[i], u))
        gaps.append(max(0.0, max(u) - current))
        per_player.append(tuple(u))
    return NashGapReport(payoffs=tuple(per_player), gaps=tuple(gaps), gap=max(gaps))


@dataclass(frozen=True)
class SymmetricRps3Equilibrium:
    """Interior symmetric equilibrium of the imbalanced three-object game."""

    m: int
    r: float
    p: float
    s: float
    residuals: tuple[float, float]

    def as_vector(self) -> tuple[float, float, float]:
        return (self.r, self.p, self.s)


def _inner_p_root(m: int, r: float) -> float | None:
    """The positive root p of (p+r)^m = p + r^m, if one exists.

    p = 0 always solves the equation; the interior root lies beyond the
    dip of f(p) = (p+r)^m - p - r^m, which exists only while
    r < (1/m)^(1/(m-1)).
    """

    def f(p: float) -> float:
        return (p + r) ** m - p - r**m

    turn = (1.0 / m) ** (1.0 / (m - 1)) - r
    if turn <= 0:
        return None
    hi = 1.0 - r
    if turn >= hi or f(turn) >= 0:
        return None
    lo = turn
    if f(hi) < 0:
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_symmetric_rps3(m: int, tol: float = 1e-12) -> SymmetricRps3Equilibrium:
    """Solve the symmetric equilibrium system for the imbalanced game.

    Bisects on r in the outer equation, resolving p from the inner
    equation at each step, and rejects boundary roots: the reported
    solution has r, p, s all strictly inside (0, 1).
    """
    if m < 2:
        raise GameError(f"need at least two players, got {m}")
    if tol <= 0:
        raise GameError("tolerance must be positive")

    def outer(r: float) -> float | None:
        p = _inner_p_root(m, r)
        if p is None:
            return None
        s = 1.0 - p - r
        return (s + p) ** m - s - p**m

    r_max = (1.0 / m) ** (1.0 / (m - 1))
    grid = 256
    prev_r, prev_g = None, None
    bracket = None
    for i in range(1, grid):
        r = r_max * i / grid
        g = outer(r)
        if g is None:
            continue
        if prev_g is not None and (g == 0 or (prev_g > 0) != (g > 0)):
            bracket = (prev_r, r)
            break
        prev_r, prev_g = r, g
    if bracket is None:
        raise SolverError(f"no interior equilibrium bracketed for m={m}")

    lo, hi = bracket
    glo = outer(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        g = outer(mid)
        if g is None:
            raise SolverError(f"inner root vanished during bisection at m={m}")
        if (g > 0) == (glo > 0):
            lo, glo = mid, g
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    p = _inner_p_root(m, r)
    if p is None:
        raise SolverError(f"inner root lost at the outer solution for m={m}")
    s = 1.0 - p - r
    res1 = abs((p + r) ** m - p - r**m)
    res2 = abs((s + p) ** m - s - p**m)
    if min(r, p, s) < 1e-9:
        raise SolverError(f"only boundary roots found for m={m}: r={r} p={p} s={s}")
    if res1 > tol or res2 > tol:
        raise SolverError(
            f"residuals {res1:.3e}, {res2:.3e} above tolerance {tol:.1e} for m={m}"
        )
    return SymmetricRps3Equilibrium(m=m, r=r, p=p, s=s, residuals=(res1, res2))


def expected_winner_count(vector: Sequence[Number], rule: GameRule) -> Number:
    """Expected number of winners per instance under a symmetric profile.

    An all-way tie counts every player as a winner.  Exact multiset
    enumeration; with n objects and m players this visits
    C(m+n-1, n-1) outcomes.
    """
    from .core import enumerate_multisets

    v = tuple(vector)
    if len(v) != rule.n:
        raise GameError(f"profile has {len(v)} entries for {rule.n} objects")
    total: Number = 0
    for counts, weight in enumerate_multisets(rule.n, rule.m):
        pr: Number = weight
        for o, c in enumerate(counts):
            if c:
                pr = pr * v[o] ** c
            if pr == 0:
                break
        if pr == 0:
            continue
        out = eval_outcome(rule, counts)
        total += pr * out.winner_count
    return total


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the seeded equilibrium search; the seed is mandatory."""

    seed: int
    eps: float = 1e-9
    dedup: float = 1e-6
    starts: int = 200
    max_iter: int = 10_000
    damping: float = 0.5
    support_tol: float = 1e-9


def _pure_payoff_cache(rule: GameRule) -> dict[tuple[int, tuple[int, ...]], float]:
    from .core import enumerate_multisets

    cache = {}
    for counts, _ in enumerate_multisets(rule.n, rule.m - 1):
        for o in range(rule.n):
            cache[(o, counts)] = float(_payoff_against(rule, o, counts))
    return cache


def _payoffs_for(
    cache: dict, rule: GameRule, vectors: list[list[float]], player: int
) -> list[float]:
    others = [tuple(v) for i, v in enumerate(vectors) if i != player]
    dist = choice_count_distribution(others, rule.n)
    return [
        sum(pr * cache[(o, counts)] for counts, pr in dist.items())
        for o in range(rule.n)
    ]


def _symmetric_payoffs(cache: dict, rule: GameRule, v: Sequence[float]) -> list[float]:
    dist = choice_count_distribution([tuple(v)] * (rule.m - 1), rule.n)
    return [
        sum(pr * cache[(o, counts)] for counts, pr in dist.items())
        for o in range(rule.n)
    ]


def _solve_linear(a: list[list[float]], b: list[float]) -> list[float] | None:
    """Gaussian elimination with partial pivoting; None when singular."""
    d = len(b)
    mat = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(d):
        piv = max(range(col, d), key=lambda r: abs(mat[r][col]))
        if abs(mat[piv][col]) < 1e-14:
            return None
        mat[col], mat[piv] = mat[piv], mat[col]
        for r in range(d):
            if r == col:
                continue
            factor = mat[r][col] / mat[col][col]
            for c in range(col, d + 1):
                mat[r][c] -= factor * mat[col][c]
    return [mat[i][d] / mat[i][i] for i in range(d)]


def _symmetric_support_candidates(
    rule: GameRule, support: tuple[int, ...], cache: dict, rng: random.Random
) -> list[tuple[float, ...]]:
    """Symmetric profiles supported on ``support`` equalizing payoffs there."""
    n, size = rule.n, len(support)

    def lift(x: Sequence[float]) -> tuple[float, ...]:
        v = [0.0] * n
        for o, p in zip(support, x):
            v[o] = p
        return tuple(v)

    if size == 1:
        return [lift([1.0])]

    def diffs(x: list[float]) -> list[float]:
        u = _symmetric_payoffs(cache, rule, lift(x + [1.0 - sum(x)]))
        last = u[support[-1]]
        return [u[o] - last for o in support[:-1]]

    if size == 2:
        out = []
        grid = 128
        prev = None
        for i in range(grid + 1):
            x = i / grid
            g = diffs([x])[0]
            if prev is not None and (g == 0 or (prev[1] > 0) != (g > 0)):
                lo, hi = prev[0], x
                glo = prev[1]
                for _ in range(100):
                    mid = 0.5 * (lo + hi)
                    gm = diffs([mid])[0]
                    if (gm > 0) == (glo > 0):
                        lo, glo = mid, gm
                    else:
                        hi = mid
                root = 0.5 * (lo + hi)
                out.append(lift([root, 1.0 - root]))
            prev = (x, g)
        return out

    # size >= 3: damped Newton with numerical Jacobian, multistart
    found: list[tuple[float, ...]] = []
    starts: list[list[float]] = [[1.0 / size] * (size - 1)]
    for _ in range(24):
        raw = [rng.expovariate(1.0) for _ in range(size)]
        tot = sum(raw)
        starts.append([w / tot for w in raw[:-1]])
    h = 1e-7
    for x in starts:
        x = x[:]
        ok = False
        for _ in range(120):
            f0 = diffs(x)
            if max(abs(v) for v in f0) < 1e-12:
                ok = True
                break
            jac = []
            for j in range(size - 1):
                xj = x[:]
                xj[j] += h
                fj = diffs(xj)
                jac.append([(fj[i] - f0[i]) / h for i in range(size - 1)])
            jac_t = [[jac[j][i] for j in range(size - 1)] for i in range(size - 1)]
            step = _solve_linear(jac_t, [-v for v in f0])
            if step is None:
                break
            scale = 1.0
            for _ in range(40):
                trial = [x[j] + scale * step[j] for j in range(size - 1)]
                if all(t > 1e-12 for t in trial) and sum(trial) < 1.0 - 1e-12:
                    break
                scale *= 0.5
            else:
                break
            x = [x[j] + scale * step[j] for j in range(size - 1)]
        if ok:
            xs = x + [1.0 - sum(x)]
            if all(p > 1e-12 for p in xs):
                found.append(lift(xs))
    return found


def _best_response_profiles(
    rule: GameRule, cache: dict, config: SearchConfig, rng: random.Random
) -> list[list[list[float]]]:
    """Damped best-response iteration from seeded random starts."""
    m, n = rule.m, rule.n
    results = []
    for _ in range(config.starts):
        vectors = []
        for _ in range(m):
            raw = [rng.expovariate(1.0) for _ in range(n)]
            tot = sum(raw)
            vectors.append([w / tot for w in raw])
        change = 1.0
        for it in range(config.max_iter):
            change = 0.0
            for i in range(m):
                u = _payoffs_for(cache, rule, vectors, i)
                top = max(u)
                best = [o for o in range(n) if u[o] >= top - 1e-12]
                share = 1.0 / len(best)
                for o in range(n):
                    target = share if o in best else 0.0
                    new = (1.0 - config.damping) * vectors[i][o] + config.damping * target
                    change = max(change, abs(new - vectors[i][o]))
                    vectors[i][o] = new
            if change < 1e-10:
                break
            if it > 300 and change > 1e-4:
                break  # circling, not contracting; give up on this start
        if change < 1e-10:
            results.append(vectors)
    return results


def search_equilibria(
    rule: GameRule, config: SearchConfig
) -> list[tuple[MixedProfile, NashGapReport]]:
    """Candidate equilibria of a small game, each independently verified.

    Combines symmetric per-support root finding with multistart damped
    best-response iteration.  Every candidate must pass the deviation-gap
    check at ``config.eps``; survivors are deduplicated within sup
    distance ``config.dedup``.  The list may be empty (inconclusive); it
    is never claimed exhaustive.
    """
    if rule.m > 4 or rule.n > 5:
        raise GameError("search is desk-scale only (m <= 4, n <= 5)")
    rng = random.Random(config.seed)
    cache = _pure_payoff_cache(rule)

    candidates: list[tuple[Vector, ...]] = []
    from itertools import combinations

    for size in range(1, rule.n + 1):
        for support in combinations(range(rule.n), size):
            for v in _symmetric_support_candidates(rule, support, cache, rng):
                candidates.append((v,) * rule.m)
    for vectors in _best_response_profiles(rule, cache, config, rng):
        candidates.append(tuple(tuple(v) for v in vectors))

    verified: list[tuple[MixedProfile, NashGapReport]] = []
    seen: list[tuple[float, ...]] = []
    for cand in sorted(candidates):
        flat = tuple(p for v in cand for p in v)
        if any(max(abs(a - b) for a, b in zip(flat, prev)) < config.dedup for prev in seen):
            continue
        total_fix = [tuple(p / sum(v) for p in v) for v in cand]
        profile = MixedProfile(
            vectors=tuple(total_fix), symmetric=len(set(total_fix)) == 1
        )
        report = nash_gap(rule, profile)
        if report.is_eps_nash(config.eps):
            verified.append((profile, report))
            seen.append(flat)
    return verified


@dataclass(frozen=True)
class PlayabilityReport:
    """Evidence-based playability classification.

    ``no_counterexample_to_strong`` is exactly that: none of the supplied
    equilibria violates the property.  The search is not exhaustive, so
    strong playability itself is never asserted.
    """

    k: int
    playable: bool
    k_playable: bool
    weakly_playable: bool
    k_weakly_playable: bool
    no_counterexample_to_strong: bool
    equilibria_examined: int
    exhaustive: bool = False


def classify_playability(
    rule: GameRule,
    equilibria: Sequence[MixedProfile],
    k: int = 1,
    support_tol: float = 1e-9,
) -> PlayabilityReport:
    """Classify playability relative to a list of verified equilibria."""
    per_eq_counts = []
    for prof in equilibria:
        counts = [0] * rule.n
        for v in prof.vectors:
            for o, p in enumerate(v):
                if float(p) > support_tol:
                    counts[o] += 1
        per_eq_counts.append(counts)

    def eq_has(counts: list[int], least: int) -> bool:
        return all(c >= least for c in counts)

    playable = any(eq_has(c, 1) for c in per_eq_counts)
    k_playable = any(eq_has(c, k) for c in per_eq_counts)
    weakly = all(
        any(c[o] >= 1 for c in per_eq_counts) for o in range(rule.n)
    ) if per_eq_counts else False
    k_weakly = all(
        any(c[o] >= k for c in per_eq_counts) for o in range(rule.n)
    ) if per_eq_counts else False
    no_counter = all(eq_has(c, 1) for c in per_eq_counts)
    return PlayabilityReport(
        k=k,
        playable=playable,
        k_playable=k_playable,
        weakly_playable=weakly,
        k_weakly_playable=k_weakly,
        no_counterexample_to_strong=no_counter,
        equilibria_examined=len(per_eq_counts),
    )
