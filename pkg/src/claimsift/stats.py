"""Streaming Pearson correlation with an exact two-sided p-value.

The accumulator keeps running co-moments (Welford update) so a correlation
over millions of pairs needs one pass and O(1) memory. The p-value uses the
exact t transform t = r * sqrt((n-2) / (1 - r^2)) and the regularized
incomplete beta function for the Student-t tail mass.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

from scipy.special import betainc


class ZeroVarianceError(ValueError):
    """Raised when either series is constant; r is undefined (0/0)."""


class PearsonAccumulator:
    """One-pass co-moment accumulator for (x, y) pairs."""

    __slots__ = ("n", "mean_x", "mean_y", "m2_x", "m2_y", "cov")

    def __init__(self) -> None:
        self.n = 0
        self.mean_x = 0.0
        self.mean_y = 0.0
        self.m2_x = 0.0
        self.m2_y = 0.0
        self.cov = 0.0

    def update(self, x: float, y: float) -> None:
        self.n += 1
        dx = x - self.mean_x
        self.mean_x += dx / self.n
        dy = y - self.mean_y
        self.mean_y += dy / self.n
        # dx is the pre-update residual, the second factor the post-update one
        self.m2_x += dx * (x - self.mean_x)
        self.m2_y += dy * (y - self.mean_y)
        self.cov += dx * (y - self.mean_y)

    def update_many(self, xs: Iterable[float], ys: Iterable[float]) -> None:
        for x, y in zip(xs, ys):
            self.update(x, y)

    def correlation(self) -> float:
        if self.n < 2:
            raise ValueError(f"need at least 2 pairs, got {self.n}")
        if self.m2_x <= 0.0 or self.m2_y <= 0.0:
            raise ZeroVarianceError(
                f"constant series (var_x={self.m2_x / self.n}, var_y={self.m2_y / self.n})"
            )
        r = self.cov / math.sqrt(self.m2_x * self.m2_y)
        # float round-off can push |r| a hair past 1
        return max(-1.0, min(1.0, r))


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    acc = PearsonAccumulator()
    acc.update_many(xs, ys)
    return acc.correlation()


def students_t_sf2(t: float, df: int) -> float:
    """Two-sided tail mass P(|T| >= t) for Student's t with df degrees of
    freedom, via the regularized incomplete beta identity."""
    if df <= 0:
        raise ValueError(f"df must be positive, got {df}")
    t = abs(float(t))
    if math.isinf(t):
        return 0.0
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def pearson_test(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Return (r, two-sided p) testing r == 0 under bivariate normality."""
    r = pearson_r(xs, ys)
    n = len(xs)
    if n < 3:
        raise ValueError(f"need at least 3 pairs for a p-value, got {n}")
    df = n - 2
    denom = 1.0 - r * r
    if denom <= 0.0:
        return r, 0.0
    t = r * math.sqrt(df / denom)
    return r, students_t_sf2(t, df)
