"""Numeric core: linguistic variables, triangular membership, Mamdani steps.

Everything here is a pure function of immutable inputs; instances can be
shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    MissingInputError,
    NoActivationError,
    OutOfUniverseError,
    UnknownTermError,
)

DEFAULT_RESOLUTION = 1001

KIND_INPUT = "input"
KIND_OUTPUT = "output"


@dataclass(frozen=True)
class TriangularMF:
    """Triangle (a, b, c): feet at a and c, peak at b.

    a == b is a left shoulder (membership 1 for x <= b), b == c a right
    shoulder (membership 1 for x >= b). Malformed vertices fail here, at
    construction, never during evaluation.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c):
            raise ValueError(
                f"triangle vertices must satisfy a <= b <= c, got "
                f"({self.a}, {self.b}, {self.c})"
            )


@dataclass(frozen=True)
class LinguisticTerm:
    name: str
    mf: TriangularMF


@dataclass(frozen=True)
class LinguisticVariable:
    """A named crisp universe carrying an ordered set of triangular terms.

    Invariants checked at construction: unique term names, every term's
    support inside the universe, and full coverage (every universe point has
    positive membership in at least one term).
    """

    name: str
    universe: tuple[float, float]
    terms: tuple[LinguisticTerm, ...]
    kind: str = KIND_INPUT

    def __post_init__(self):
        lo, hi = self.universe
        if not lo < hi:
            raise ValueError(f"universe of '{self.name}' must satisfy lo < hi")
        if self.kind not in (KIND_INPUT, KIND_OUTPUT):
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if not self.terms:
            raise ValueError(f"variable '{self.name}' declares no terms")
        seen = set()
        for term in self.terms:
            if term.name in seen:
                raise ValueError(
                    f"duplicate term '{term.name}' in variable '{self.name}'"
                )
            seen.add(term.name)
            if term.mf.a < lo or term.mf.c > hi:
                raise ValueError(
                    f"term '{term.name}' of '{self.name}' has support "
                    f"[{term.mf.a}, {term.mf.c}] outside the universe [{lo}, {hi}]"
                )
        self._check_coverage()

    def _check_coverage(self):
        # Membership functions are affine between breakpoints, so a coverage
        # gap (all terms zero somewhere) must include a breakpoint: checking
        # max membership at every breakpoint is exact, no sampling needed.
        lo, hi = self.universe
        points = {lo, hi}
        for term in self.terms:
            points.update(p for p in (term.mf.a, term.mf.b, term.mf.c) if lo <= p <= hi)
        for x in sorted(points):
            if all(tri_membership(x, t.mf) == 0.0 for t in self.terms):
                raise ValueError(
                    f"variable '{self.name}' does not cover its universe: "
                    f"no term has positive membership at x={x}"
                )

    @property
    def term_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.terms)

    def term(self, name: str) -> LinguisticTerm:
        for t in self.terms:
            if t.name == name:
                return t
        raise UnknownTermError(self.name, name, self.term_names)

    def check_in_universe(self, x: float) -> None:
        lo, hi = self.universe
        if not lo <= x <= hi:
            raise OutOfUniverseError(self.name, x, lo, hi)


@dataclass(frozen=True)
class TermActivation:
    """A consequent term clipped at a Mamdani firing level."""

    term: str
    level: float

    def __post_init__(self):
        if not 0.0 <= self.level <= 1.0:
            raise ValueError(f"activation level must be in [0, 1], got {self.level}")


@dataclass(frozen=True, eq=False)
class AggregatedOutput:
    """Discretized aggregated output set over a variable's universe."""

    variable: str
    xs: np.ndarray
    mus: np.ndarray

    def __post_init__(self):
        if self.xs.shape != self.mus.shape or self.xs.ndim != 1:
            raise ValueError("xs and mus must be 1-d arrays of equal length")
        if not np.all(np.diff(self.xs) > 0):
            raise ValueError("sample positions must be strictly increasing")
        if np.any(self.mus < 0.0) or np.any(self.mus > 1.0):
            raise ValueError("membership samples must lie in [0, 1]")
        self.xs.setflags(write=False)
        self.mus.setflags(write=False)

    @property
    def samples(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.xs.tolist(), self.mus.tolist()))


def tri_membership(x: float, mf: TriangularMF) -> float:
    """Piecewise-linear membership of x in a triangle, in [0, 1]."""
    a, b, c = mf.a, mf.b, mf.c
    if a == b and x <= b:  # left shoulder saturates
        return 1.0
    if b == c and x >= b:  # right shoulder saturates
        return 1.0
    if x <= a or x >= c:
        return 0.0
    if x <= b:
        return (x - a) / (b - a)
    return (c - x) / (c - b)


def tri_membership_grid(mf: TriangularMF, xs: np.ndarray) -> np.ndarray:
    """Vectorized tri_membership over a sample grid."""
    a, b, c = mf.a, mf.b, mf.c
    if a == b == c:
        return np.where(xs == b, 1.0, 0.0)
    if a == b:
        return np.interp(xs, [b, c], [1.0, 0.0], left=1.0, right=0.0)
    if b == c:
        return np.interp(xs, [a, b], [0.0, 1.0], left=0.0, right=1.0)
    return np.interp(xs, [a, b, c], [0.0, 1.0, 0.0], left=0.0, right=0.0)


def term_from_range(name: str, universe: tuple[float, float], rng: tuple[float, float]) -> LinguisticTerm:
    """Build a term from a declared value range via the shoulder rule.

    A range touching the universe's lower bound becomes a left shoulder
    (l, l, u), one touching the upper bound a right shoulder (l, u, u);
    interior ranges become symmetric triangles (l, (l+u)/2, u). A range
    touching both bounds takes the left-shoulder reading.
    """
    lo, hi = universe
    l, u = float(rng[0]), float(rng[1])
    if not (lo <= l < u <= hi):
        raise ValueError(
            f"range [{l}, {u}] of term '{name}' must satisfy "
            f"{lo} <= l < u <= {hi}"
        )
    if l == lo:
        mf = TriangularMF(l, l, u)
    elif u == hi:
        mf = TriangularMF(l, u, u)
    else:
        mf = TriangularMF(l, (l + u) / 2.0, u)
    return LinguisticTerm(name, mf)


def fuzzify(var: LinguisticVariable, x: float) -> dict[str, float]:
    """Evaluate every term of `var` at x. Degrees need not sum to 1."""
    var.check_in_universe(x)
    return {t.name: tri_membership(x, t.mf) for t in var.terms}


def firing_strength(
    antecedent: Sequence[tuple[str, str]],
    fuzzified: Mapping[str, Mapping[str, float]],
) -> float:
    """Mamdani AND: minimum clause degree over the antecedent."""
    strength = 1.0
    for attribute, term in antecedent:
        degrees = fuzzified.get(attribute)
        if degrees is None:
            raise MissingInputError(attribute)
        if term not in degrees:
            raise UnknownTermError(attribute, term, tuple(degrees))
        strength = min(strength, degrees[term])
    return strength


def clip_and_aggregate(
    var: LinguisticVariable,
    activations: Iterable[TermActivation],
    resolution: int = DEFAULT_RESOLUTION,
) -> AggregatedOutput:
    """Clip each activated term at its level and take the pointwise max.

    The grid is uniform with both universe endpoints included; `resolution`
    is the sample count (>= 2).
    """
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    lo, hi = var.universe
    xs = np.linspace(lo, hi, resolution)
    mus = np.zeros_like(xs)
    for act in activations:
        term = var.term(act.term)
        np.maximum(mus, np.minimum(act.level, tri_membership_grid(term.mf, xs)), out=mus)
    return AggregatedOutput(var.name, xs, mus)


def _segment_integrals(p, q, mu_p, mu_q):
    # exact area and first moment of a linear membership stretch on [p, q]
    area = 0.5 * (mu_p + mu_q) * (q - p)
    moment = (q - p) / 6.0 * (mu_p * (2 * p + q) + mu_q * (p + 2 * q))
    return area, moment


def defuzz_centroid(agg: AggregatedOutput) -> float:
    """Centroid of area of the sampled aggregate.

    The aggregate is piecewise linear and the samples are exact point
    evaluations, so integrating the sample polyline (trapezoid) is exact up
    to the kinks that fall between grid points. Those are recovered where
    possible: a cell whose neighboring slopes are locally stable but
    disagree hides exactly one kink, at the intersection of the two
    neighbor lines. Plain point-mass sums or bare trapezoid both miss the
    1e-3 convergence budget at the default resolution; this recovery meets
    it with margin.
    """
    xs, mus = agg.xs, agg.mus
    if not np.any(mus > 0.0):
        raise NoActivationError(
            f"aggregated output for '{agg.variable}' has zero area; nothing to defuzzify"
        )
    dx = np.diff(xs)
    areas = 0.5 * (mus[:-1] + mus[1:]) * dx
    moments = dx / 6.0 * (mus[:-1] * (2 * xs[:-1] + xs[1:]) + mus[1:] * (xs[:-1] + 2 * xs[1:]))
    area = float(areas.sum())
    moment = float(moments.sum())

    slopes = np.diff(mus) / dx
    n = len(xs)
    if n >= 7:
        idx = np.arange(2, n - 4)
        scale = np.maximum(1.0, np.maximum(np.abs(slopes[idx - 1]), np.abs(slopes[idx + 1])))
        tol = 1e-9 * scale
        candidates = idx[
            (np.abs(slopes[idx - 2] - slopes[idx - 1]) <= tol)
            & (np.abs(slopes[idx + 2] - slopes[idx + 1]) <= tol)
            & (np.abs(slopes[idx - 1] - slopes[idx + 1]) > tol)
        ]
        for i in candidates:
            p, q = xs[i], xs[i + 1]
            mu_p, mu_q = mus[i], mus[i + 1]
            s_left, s_right = slopes[i - 1], slopes[i + 1]
            x_star = (mu_q - mu_p + s_left * p - s_right * q) / (s_left - s_right)
            if not p < x_star < q:
                continue
            mu_star = min(1.0, max(0.0, mu_p + s_left * (x_star - p)))
            a1, m1 = _segment_integrals(p, x_star, mu_p, mu_star)
            a2, m2 = _segment_integrals(x_star, q, mu_star, mu_q)
            a0, m0 = _segment_integrals(p, q, mu_p, mu_q)
            area += a1 + a2 - a0
            moment += m1 + m2 - m0
    if area <= 0.0:
        raise NoActivationError(
            f"aggregated output for '{agg.variable}' has zero area; nothing to defuzzify"
        )
    crisp = moment / area
    nonzero = xs[mus > 0.0]
    return float(min(max(crisp, nonzero[0]), nonzero[-1]))


def label_crisp(var: LinguisticVariable, crisp: float) -> str:
    """Name of the term with maximum membership at `crisp`.

    Ties go to the earlier declared term.
    """
    var.check_in_universe(crisp)
    best_name = var.terms[0].name
    best_mu = tri_membership(crisp, var.terms[0].mf)
    for term in var.terms[1:]:
        mu = tri_membership(crisp, term.mf)
        if mu > best_mu:
            best_name, best_mu = term.name, mu
    return best_name
