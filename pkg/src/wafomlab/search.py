"""Seeded random search over spans of d uniformly random matrices.

Every trial draws from its own PCG64 stream derived from ``(seed, trial)``,
so results do not depend on how trials are scheduled across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .abelian import GroupSpec
from .enumerator import INFINITE_WEIGHT, min_dick_weight
from .errors import PreconditionError
from .netfile import format_net
from .netgen import GeneratorSet, span
from .wafom import WafomReport, alpha, evaluate, existence_bound, existence_threshold, wafom_fast
from .weight import max_weight, volume

OBJECTIVES = ("min-wafom", "max-min-weight")


@dataclass(frozen=True)
class SearchConfig:
    group: GroupSpec
    s: int
    n: int
    d: int
    trials: int
    seed: int
    objective: str = "min-wafom"
    target_min_weight: int | None = None
    c: float = 1.0
    compute_min_weight: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.s < 1 or self.n < 1:
            raise ValueError("s and n must be >= 1")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        if self.c <= 0:
            raise PreconditionError("c must be positive")
        top = max_weight(self.s, self.n)
        if self.target_min_weight is not None and not 1 <= self.target_min_weight <= top:
            raise PreconditionError(
                f"target minimum weight {self.target_min_weight} is infeasible; it must lie in [1, {top}]")

    @property
    def needs_min_weight(self) -> bool:
        return (self.compute_min_weight or self.objective == "max-min-weight"
                or self.target_min_weight is not None)

    def to_json_dict(self) -> dict:
        return {
            "moduli": list(self.group.moduli), "s": self.s, "n": self.n, "d": self.d,
            "trials": self.trials, "seed": self.seed, "objective": self.objective,
            "target_min_weight": self.target_min_weight, "c": self.c,
            "compute_min_weight": self.needs_min_weight,
        }


@dataclass(frozen=True)
class TrialSummary:
    trial: int
    num_points: int
    wafom: float
    min_weight: int | float | None

    def to_json_dict(self) -> dict:
        mw = "inf" if self.min_weight == INFINITE_WEIGHT else self.min_weight
        return {"trial": self.trial, "num_points": self.num_points, "wafom": self.wafom, "min_weight": mw}


@dataclass
class SearchResult:
    config: SearchConfig
    best_trial: int
    best: WafomReport
    best_generators: GeneratorSet
    history: list[TrialSummary]
    existence_bound: float | None
    bound_met: bool | None
    successes: int | None = None
    success_bound: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "best_trial": self.best_trial,
            "best": self.best.to_json_dict(),
            "best_net": format_net(self.best_generators),
            "trials": [t.to_json_dict() for t in self.history],
            "existence_bound": self.existence_bound,
            "bound_met": self.bound_met,
            "target_successes": self.successes,
            "success_probability_bound": self.success_bound,
        }


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(trial,))))


def random_generator_set(rng: np.random.Generator, group: GroupSpec, s: int, n: int, d: int) -> GeneratorSet:
    """d matrices with independent entries uniform over G."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return GeneratorSet(group, s, n, rng.integers(0, group.order, size=(d, s, n)))


def success_probability_bound(b: int, p_b: int, s: int, n: int, d: int, M: int) -> float:
    """Lower bound max(0, 1 - (vol_{s,n}(M-1) - 1) p_b^-d) on P[delta >= M]."""
    if M < 1:
        raise ValueError("M must be >= 1")
    bound = 1 - Fraction(volume(b, s, n, M - 1) - 1, p_b ** d)
    return float(max(bound, Fraction(0)))


def _run_trial(cfg: SearchConfig, trial: int) -> tuple[TrialSummary, GeneratorSet]:
    gens = random_generator_set(trial_rng(cfg.seed, trial), cfg.group, cfg.s, cfg.n, cfg.d)
    pg = span(gens)
    mw = min_dick_weight(pg) if cfg.needs_min_weight else None
    return TrialSummary(trial, pg.order, wafom_fast(pg), mw), gens


def _rank_key(cfg: SearchConfig, t: TrialSummary):
    if cfg.objective == "max-min-weight":
        return (-t.min_weight, t.wafom, t.trial)
    return (t.wafom, t.trial)


def run_search(cfg: SearchConfig, threads: int = 1) -> SearchResult:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda k: _run_trial(cfg, k), range(cfg.trials)))
    else:
        outcomes = [_run_trial(cfg, k) for k in range(cfg.trials)]
    history = [o[0] for o in outcomes]
    best_summary = min(history, key=lambda t: _rank_key(cfg, t))
    best_gens = outcomes[best_summary.trial][1]
    report = evaluate(span(best_gens), with_min_weight=cfg.needs_min_weight, c=cfg.c, seed=cfg.seed)

    b, s, d = cfg.group.order, cfg.s, cfg.d
    p_b = cfg.group.smallest_prime_factor
    bound = met = None
    if d >= existence_threshold(b, s, alpha(b), cfg.c):
        bound = existence_bound(b, p_b, s, d, c=cfg.c)
        met = min(t.wafom for t in history) <= bound

    successes = prob = None
    if cfg.target_min_weight is not None:
        successes = sum(1 for t in history if t.min_weight >= cfg.target_min_weight)
        prob = success_probability_bound(b, p_b, s, cfg.n, d, cfg.target_min_weight)
    return SearchResult(cfg, best_summary.trial, report, best_gens, history, bound, met, successes, prob)


def binomial_floor(p: float, trials: int, sigmas: float = 3.0) -> float:
    """p - sigmas * sqrt(p(1-p)/trials), the one-sided acceptance floor."""
    return p - sigmas * math.sqrt(max(p * (1 - p), 0.0) / trials)
