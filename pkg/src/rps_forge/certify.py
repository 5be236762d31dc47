"""Certified infeasibility of the one-candidate equilibrium conditions.

If a (k + t + 1)-player instance of the imbalanced three-object game had
an equilibrium in which a single candidate ever plays S, the scenario
probabilities (r, s) would have to satisfy a small polynomial system:
the mixers indifferent between R and P and weakly preferring them to S,
the candidate indifferent between S and P, and (when t > 0) the
committed players weakly preferring P.  ``infeasibility_certificate``
proves, by interval branch-and-prune over exact polynomial enclosures,
that no such (r, s) exists in [delta, 1-delta]^2: a box is discarded
only when an equality's enclosure excludes zero or a required
inequality's enclosure is entirely negative, so an all-pruned run is a
machine-checkable proof of emptiness.  The open margin below delta is
reported, never glossed over.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .core import GameError, GameRule, eval_outcome
from .equilibrium import MixedProfile, choice_count_distribution
from .formulas import ScenarioError
from .intervals import (
    PRECISION_BITS,
    Interval,
    Poly2,
    ceil_dyadic,
    floor_dyadic,
    one_minus_r_power,
)

DEFAULT_DELTA = Fraction(1, 10**6)
MAX_DEPTH_LIMIT = 60


@dataclass(frozen=True)
class Constraint:
    """One polynomial condition on (r, s).

    ``kind`` is "eq" (must vanish) or "ge" (must be nonnegative).  The
    polynomial equals ``scale`` times the raw payoff difference, times
    the declared clearing factor; both multipliers are strictly positive
    on r > 0, so zero sets and signs are preserved there.
    """

    name: str
    kind: str
    poly: Poly2
    cleared_by: str | None
    scale: Fraction

    def pruned_on(self, box_r: Interval, box_s: Interval, bits: int) -> bool:
        enc = self.poly.eval_box(box_r, box_s, bits)
        if self.kind == "eq":
            return not enc.contains_zero()
        return enc.entirely_negative()


def _p_series_coeffs(top: int, k: int, t: int) -> list[Fraction]:
    """Coefficients of sum_{b=1}^{top} C(top,b)/C(k+t,b) r^b."""
    return [Fraction(0)] + [
        Fraction(comb(top, b), comb(k + t, b)) for b in range(1, top + 1)
    ]


def constraint_system(k: int, t: int) -> list[Constraint]:
    """The equilibrium conditions as sign-safe polynomials in (r, s).

    The R-payoff formulas carry a 1/(k r) (resp. 1/((k+1) r))
    singularity; those conditions are multiplied through by k r and
    (k+1) r, positive on the domain, before being handed to the interval
    machinery.  Equalities are listed first: they prune fastest.
    """
    if k < 1:
        raise ScenarioError(f"need at least one mixer, got k={k}")
    if t < 0:
        raise ScenarioError(f"committed player count must be >= 0, got {t}")
    m = k + t + 1
    s = Poly2.var_s()
    one = Poly2.constant(1)
    one_minus_s = one - s

    mixer_p = one_minus_s.mul_r_poly(_p_series_coeffs(k - 1, k, t)) - s
    committed_p = one_minus_s.mul_r_poly(_p_series_coeffs(k, k, t)) - s
    candidate_p = Poly2(_p_series_coeffs(k, k, t))
    candidate_s = Poly2(one_minus_r_power(k)).scale(m) - one
    mixer_s = (Poly2.constant(2) - s).mul_r_poly(one_minus_r_power(k - 1)).scale(
        Fraction(m, 2)
    ) - one
    committed_s = (Poly2.constant(2) - s).mul_r_poly(one_minus_r_power(k)).scale(
        Fraction(m, 2)
    ) - one

    def cleared_r_payoff(depth: int) -> Poly2:
        # depth*r times the R payoff: s*m*(1-(1-r)^depth) - depth*r
        rising = Poly2.constant(1) - Poly2(one_minus_r_power(depth))
        return s * rising.scale(m) - Poly2([Fraction(0), Fraction(depth)])

    kr = [Fraction(0), Fraction(k)]
    k1r = [Fraction(0), Fraction(k + 1)]

    def make(name: str, kind: str, poly: Poly2, cleared_by: str | None) -> Constraint:
        scaled, factor = poly.integer_normalization()
        return Constraint(name=name, kind=kind, poly=scaled, cleared_by=cleared_by, scale=factor)

    constraints = [
        make(
            "mixer_indifferent_R_P",
            "eq",
            mixer_p.mul_r_poly(kr) - cleared_r_payoff(k),
            f"{k}*r",
        ),
        make("candidate_indifferent_S_P", "eq", candidate_s - candidate_p, None),
        make("mixer_prefers_P_over_S", "ge", mixer_p - mixer_s, None),
    ]
    if t > 0:
        constraints.append(
            make(
                "committed_prefers_P_over_R",
                "ge",
                committed_p.mul_r_poly(k1r) - cleared_r_payoff(k + 1),
                f"{k + 1}*r",
            )
        )
        constraints.append(
            make("committed_prefers_P_over_S", "ge", committed_p - committed_s, None)
        )
    return constraints


class Verdict(enum.Enum):
    PROVED_EMPTY = "proved_empty"
    UNDECIDED = "undecided"


Box = tuple[Interval, Interval]


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Outcome of one branch-and-prune run for a (k, t) pair.

    PROVED_EMPTY means every sub-box of the examined square was pruned by
    a violated constraint enclosure; UNDECIDED reports surviving boxes
    (depth or budget exhaustion) and is never wrong, only inconclusive.
    """

    k: int
    t: int
    verdict: Verdict
    delta: Fraction
    boxes: int
    pruned: dict[str, int]
    deepest: int
    depth_limit: int
    millis: float
    undecided_count: int
    undecided_sample: tuple[Box, ...] = ()
    note: str = ""

    @property
    def proved_empty(self) -> bool:
        return self.verdict is Verdict.PROVED_EMPTY

    def to_record(self) -> dict:
        return {
            "k": self.k,
            "t": self.t,
            "verdict": self.verdict.value,
            "delta": decimal_string(self.delta),
            "boxes": self.boxes,
            "depth": self.deepest,
            "millis": round(self.millis, 3),
        }


def decimal_string(x: Fraction) -> str:
    """Exact decimal form when the denominator is 2^a 5^b, else 'p/q'."""
    num, den = x.numerator, x.denominator
    d = den
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{num}/{den}"
    shift = max(twos, fives)
    scaled = abs(num) * 10**shift // den
    sign = "-" if num < 0 else ""
    digits = str(scaled).rjust(shift + 1, "0")
    if shift == 0:
        return f"{sign}{digits}"
    return f"{sign}{digits[:-shift]}.{digits[-shift:]}"


def infeasibility_certificate(
    k: int,
    t: int,
    delta: Fraction | float = DEFAULT_DELTA,
    max_depth: int = 40,
    constraints: Sequence[Constraint] | None = None,
    max_boxes: int = 2_000_000,
    undecided_cap: int = 64,
    bits: int = PRECISION_BITS,
) -> InfeasibilityCertificate:
    """Prove (or fail to prove) that the scenario system has no solution
    with r and s both in [delta, 1-delta].

    The starting square is widened outward to dyadic endpoints, so the
    proved region contains the requested one.  Subdivision bisects the
    wider dimension.  A depth or box-budget exhaustion yields UNDECIDED,
    never a false PROVED_EMPTY.
    """
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 100):
        raise ScenarioError(f"delta must lie in (0, 0.01], got {delta}")
    if not 1 <= max_depth <= MAX_DEPTH_LIMIT:
        raise ScenarioError(f"max_depth must lie in 1..{MAX_DEPTH_LIMIT}")
    if constraints is None:
        constraints = constraint_system(k, t)

    start = time.perf_counter()
    lo = floor_dyadic(delta, bits)
    hi = ceil_dyadic(1 - delta, bits)
    root: Box = (Interval(lo, hi), Interval(lo, hi))
    stack: list[tuple[Box, int]] = [(root, 0)]
    boxes = 0
    deepest = 0
    pruned: dict[str, int] = {c.name: 0 for c in constraints}
    undecided: list[Box] = []
    undecided_count = 0
    note = ""

    while stack:
        (box_r, box_s), depth = stack.pop()
        boxes += 1
        deepest = max(deepest, depth)
        if boxes > max_boxes:
            note = f"box budget {max_boxes} exhausted"
            undecided_count += 1 + len(stack)
            if len(undecided) < undecided_cap:
                undecided.append((box_r, box_s))
            break
        hit = None
        for c in constraints:
            if c.pruned_on(box_r, box_s, bits):
                hit = c.name
                break
        if hit is not None:
            pruned[hit] += 1
            continue
        if depth >= max_depth:
            undecided_count += 1
            if len(undecided) < undecided_cap:
                undecided.append((box_r, box_s))
            if undecided_count >= undecided_cap:
                note = note or f"stopped after {undecided_cap} surviving boxes"
                break
            continue
        if box_r.width() >= box_s.width():
            left, right = box_r.halves()
            stack.append(((left, box_s), depth + 1))
            stack.append(((right, box_s), depth + 1))
        else:
            left, right = box_s.halves()
            stack.append(((box_r, left), depth + 1))
            stack.append(((box_r, right), depth + 1))

    millis = (time.perf_counter() - start) * 1000.0
    verdict = Verdict.PROVED_EMPTY if undecided_count == 0 else Verdict.UNDECIDED
    return InfeasibilityCertificate(
        k=k,
        t=t,
        verdict=verdict,
        delta=delta,
        boxes=boxes,
        pruned=pruned,
        deepest=deepest,
        depth_limit=max_depth,
        millis=millis,
        undecided_count=undecided_count,
        undecided_sample=tuple(undecided),
        note=note,
    )


@dataclass(frozen=True)
class SweepReport:
    """Aggregated certificates over a (k, t) rectangle."""

    k_max: int
    t_max: int
    delta: Fraction
    certificates: tuple[InfeasibilityCertificate, ...]
    incomplete: bool
    skipped: tuple[tuple[int, int], ...]
    total_millis: float

    @property
    def all_proved(self) -> bool:
        return (
            not self.incomplete
            and all(c.proved_empty for c in self.certificates)
        )

    def to_records(self) -> list[dict]:
        return [c.to_record() for c in self.certificates]


def _certificate_worker(args: tuple) -> InfeasibilityCertificate:
    k, t, delta, max_depth = args
    return infeasibility_certificate(k, t, delta=delta, max_depth=max_depth)


def sweep(
    k_max: int,
    t_max: int,
    delta: Fraction | float = DEFAULT_DELTA,
    max_depth: int = 40,
    budget_seconds: float = 600.0,
    jobs: int = 1,
) -> SweepReport:
    """Run certificates for every 1 <= k <= k_max, 0 <= t <= t_max.

    Pairs are independent; with ``jobs`` > 1 they run in a process pool
    and are merged back in (k, t) order.  If the wall-clock budget runs
    out, the report is flagged incomplete and lists the skipped pairs.
    """
    if k_max < 1 or t_max < 0:
        raise ScenarioError("need k_max >= 1 and t_max >= 0")
    delta = Fraction(delta)
    pairs = [(k, t) for k in range(1, k_max + 1) for t in range(0, t_max + 1)]
    start = time.perf_counter()
    done: dict[tuple[int, int], InfeasibilityCertificate] = {}
    skipped: list[tuple[int, int]] = []

    if jobs > 1:
        import multiprocessing as mp

        with mp.Pool(processes=jobs) as pool:
            it = pool.imap_unordered(
                _certificate_worker, [(k, t, delta, max_depth) for k, t in pairs]
            )
            for cert in it:
                done[(cert.k, cert.t)] = cert
                if time.perf_counter() - start > budget_seconds:
                    pool.terminate()
                    break
        skipped = [p for p in pairs if p not in done]
    else:
        for k, t in pairs:
            if time.perf_counter() - start > budget_seconds:
                skipped.append((k, t))
                continue
            done[(k, t)] = infeasibility_certificate(k, t, delta=delta, max_depth=max_depth)

    certs = tuple(done[p] for p in pairs if p in done)
    return SweepReport(
        k_max=k_max,
        t_max=t_max,
        delta=delta,
        certificates=certs,
        incomplete=bool(skipped),
        skipped=tuple(sorted(skipped)),
        total_millis=(time.perf_counter() - start) * 1000.0,
    )


def grid_probe(
    k: int,
    t: int,
    drop: Iterable[str] = (),
    steps: int = 80,
    slack: float = 1e-9,
) -> list[tuple[float, float]]:
    """Dense-grid audit: points of (0,1)^2 where every kept constraint is
    satisfied within ``slack`` (relative to its largest coefficient).

    Independent of the interval path; used to confirm that dropping a
    constraint reopens a feasible set and that the full system shows no
    near-feasible grid point.
    """
    kept = [c for c in constraint_system(k, t) if c.name not in set(drop)]
    scales = [max(abs(x) for x in c.poly.coefficients()) for c in kept]
    found = []
    for i in range(1, steps):
        r = Fraction(i, steps)
        for j in range(1, steps):
            s = Fraction(j, steps)
            ok = True
            for c, sc in zip(kept, scales):
                v = c.poly.eval_exact(r, s) / sc
                if c.kind == "eq":
                    if abs(v) > slack:
                        ok = False
                        break
                elif v < -slack:
                    ok = False
                    break
            if ok:
                found.append((float(r), float(s)))
    return found


@dataclass(frozen=True)
class PlayerRatioReport:
    """Per-player conjecture evidence for the iterated game.

    ``ratio`` is the player's total P-type probability over their S
    probability (None when S is never played: vacuous).  ``tie_probe``
    is informational only: the expected number of other players tying
    with this player, conditioned on the player picking the deepest
    P-type object and winning.
    """

    player: int
    p_type_prob: float
    s_prob: float
    ratio: float | None
    satisfied: bool | None
    vacuous: bool
    tie_probe: float | None


def ptype_to_s_ratio_check(
    rule: GameRule, profile: MixedProfile, m: int | None = None
) -> list[PlayerRatioReport]:
    """Check P-type versus S play proportions in an equilibrium profile.

    For each player the ratio of total P-type probability to S
    probability is compared against m - 1; players who never play S are
    reported vacuous rather than passing or failing.
    """
    if rule.levels is None:
        raise GameError("rule carries no level metadata")
    if m is None:
        m = rule.m
    elif m != rule.m:
        raise GameError(f"profile is for {m} players but the game has {rule.m}")
    if profile.m != rule.m:
        raise GameError("profile size does not match the game")
    p_type = [i for i, lab in enumerate(rule.labels) if lab.startswith("P")]
    s_idx = rule.index_of("S")
    deepest_level = max(rule.levels[i] for i in p_type)
    deep_p = next(
        i for i in p_type if rule.levels[i] == deepest_level
    )

    reports = []
    for i, v in enumerate(profile.vectors):
        tp = float(sum(v[j] for j in p_type))
        ps = float(v[s_idx])
        others = [w for j, w in enumerate(profile.vectors) if j != i]
        num = 0.0
        den = 0.0
        for counts, pr in choice_count_distribution(others, rule.n).items():
            combined = list(counts)
            combined[deep_p] += 1
            out = eval_outcome(rule, combined)
            if out.winner == deep_p:
                den += float(pr)
                num += float(pr) * (out.winner_count - 1)
        probe = (num / den) if den > 0 else None
        if ps <= 0.0:
            reports.append(
                PlayerRatioReport(
                    player=i, p_type_prob=tp, s_prob=ps, ratio=None,
                    satisfied=None, vacuous=True, tie_probe=probe,
                )
            )
        else:
            ratio = tp / ps
            reports.append(
                PlayerRatioReport(
                    player=i, p_type_prob=tp, s_prob=ps, ratio=ratio,
                    satisfied=ratio >= (m - 1) - 1e-12, vacuous=False,
                    tie_probe=probe,
                )
            )
    return reports
