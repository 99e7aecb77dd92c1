"""Threshold bound formulas and the conditional epsilon-bound machinery.

All logarithms are base 2. For nested families ``A ⊆ B`` the central object
is the epsilon-bound function

    g(p) = 1 - r(p) * (1 - ell0 * 2 ** (-p / (K q)))

where ``r`` is :func:`threshold_lab.measure.r_ratio`, and ``q`` and ``ell0``
belong to the up-closure of ``A``. Whenever ``eps > g(p)`` the conditional
probability ``P(X_p in A | X_p in B)`` exceeds ``1 - eps``.

Grid conventions: ``g`` is scanned on ``[delta, 1 - delta]`` with
``delta = 1e-9``; the scan resolution (default 10^4 points) plus root or
minimum refinement defines the reported precision.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import EndpointError, HypothesisNotMetError, ThresholdLabError, TrivialFamilyError
from .family import UpperSetFamily, up_closure
from .measure import Family, _check_nested, _explicit, profile
from .threshold import q_threshold

DEFAULT_K = 48.0
DELTA = 1e-9
DEFAULT_GRID = 10_000
ENDPOINT_TOL = 1e-10
BOUNDARY_TOL = 1e-6


def pp_bound(q: float, ell: int, K: float = DEFAULT_K) -> float:
    """Park-Pham upper bound ``K q log2(ell)`` on the critical probability."""
    return K * q * math.log2(ell)


def bell_bound(q: float, ell0: int) -> float:
    """Bell's explicit-constant bound ``8 q log2(2 ell0)``."""
    return 8.0 * q * math.log2(2 * ell0)


def bell_eps_bound(q: float, ell0: int, eps: float) -> float:
    """``48 q log2(ell0 / eps)``: above this p, P(X_p in F) > 1 - eps.

    Nonpositive when ``eps >= ell0``; returned as is.
    """
    return 48.0 * q * math.log2(ell0 / eps)


class EpsilonFloor(NamedTuple):
    value: float
    argmin: float
    boundary: bool
    warning: Optional[str]


@dataclass
class ConditionalReport:
    K: float
    q: float
    ell0: int
    gate: float
    epsilon_floor: float
    argmin_p: float
    boundary: bool
    eps: Optional[float]
    intervals: list[tuple[float, float]]
    multiple_intervals: bool
    status: str
    warnings: list[str] = field(default_factory=list)
    samples: list[tuple[float, float, float]] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def gate_ok(self) -> bool:
        return self.gate < 1.0

    def to_json(self) -> dict:
        out = asdict(self)
        out["intervals"] = [list(iv) for iv in self.intervals]
        out["samples"] = [list(s) for s in self.samples]
        out["gate_ok"] = self.gate_ok
        extra = out.pop("extra")
        out.update(extra)
        return out

    def samples_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["p", "r", "g"])
        for row in self.samples:
            writer.writerow([f"{v:.6g}" for v in row])
        return buf.getvalue()


class ConditionalProblem:
    """Cached quantities for one nested pair ``A ⊆ B`` and constant ``K``."""

    def __init__(self, A: Family, B: Family, K: float = DEFAULT_K, tol: float = 1e-12):
        a = _explicit(A)
        if not a.masks:
            raise ThresholdLabError("A must be nonempty")
        _check_nested(A, B)
        if K <= 0:
            raise ThresholdLabError("K must be positive")
        self.A = a
        self.B = _explicit(B)
        self.K = float(K)
        self.up: UpperSetFamily = up_closure(a)
        if self.up.is_trivial:
            raise TrivialFamilyError("up-closure of A is all of 2^X; q is undefined")
        self.q, self.cover = q_threshold(self.up, tol=tol)
        self.ell0 = self.up.ell0
        self._pa = profile(self.A)
        self._pup = profile(self.up)
        self._pb = profile(self.B)

    @property
    def gate(self) -> float:
        return self.K * self.q * math.log2(self.ell0)

    def r(self, ps) -> np.ndarray:
        ps = np.asarray(ps, dtype=float)
        if np.any((ps <= 0.0) | (ps >= 1.0)):
            raise EndpointError("endpoint: use one-sided limit evaluation")
        return self._pa.evaluate_many(ps) / self._pup.evaluate_many(ps) / self._pb.evaluate_many(ps)

    def g(self, ps) -> np.ndarray:
        ps = np.asarray(ps, dtype=float)
        decay = self.ell0 * np.exp2(-ps / (self.K * self.q))
        return 1.0 - self.r(ps) * (1.0 - decay)

    def conditional(self, ps) -> np.ndarray:
        ps = np.asarray(ps, dtype=float)
        return self._pa.evaluate_many(ps) / self._pb.evaluate_many(ps)

    def _g1(self, p: float) -> float:
        return float(self.g(np.array([p]))[0])

    def grid(self, points: int = DEFAULT_GRID) -> np.ndarray:
        return np.linspace(DELTA, 1.0 - DELTA, points)

    def epsilon_floor(self, points: int = DEFAULT_GRID) -> EpsilonFloor:
        ps = self.grid(points)
        gs = self.g(ps)
        i = int(np.argmin(gs))
        lo, hi = ps[max(i - 1, 0)], ps[min(i + 1, len(ps) - 1)]
        value, argmin = float(gs[i]), float(ps[i])
        res = minimize_scalar(self._g1, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        if res.fun < value:
            value, argmin = float(res.fun), float(res.x)
        boundary = argmin - DELTA < BOUNDARY_TOL or (1.0 - DELTA) - argmin < BOUNDARY_TOL
        warning = None
        if not self.gate < 1.0:
            warning = (
                f"gate K*q*log2(ell0) = {self.gate:.6g} >= 1; "
                "the floor is not guaranteed to be below 1"
            )
        return EpsilonFloor(value, argmin, bool(boundary), warning)

    def admissible_intervals(
        self, eps: float, points: int = DEFAULT_GRID, tol: float = ENDPOINT_TOL
    ) -> list[tuple[float, float]]:
        """Maximal open subintervals of (0, 1) on which ``g < eps``."""
        if not 0.0 < eps < 1.0:
            raise ThresholdLabError("eps must lie in (0, 1)")
        ps = self.grid(points)
        below = self.g(ps) < eps
        last = len(ps) - 1

        def crossing(a: float, b: float) -> float:
            return float(brentq(lambda p: self._g1(p) - eps, a, b, xtol=tol))

        out = []
        i = 0
        while i <= last:
            if not below[i]:
                i += 1
                continue
            j = i
            while j < last and below[j + 1]:
                j += 1
            lo = 0.0 if i == 0 else crossing(ps[i - 1], ps[i])
            hi = 1.0 if j == last else crossing(ps[j], ps[j + 1])
            out.append((lo, hi))
            i = j + 1
        if not out:
            # a dip narrower than the grid spacing
            floor = self.epsilon_floor(points)
            if floor.value < eps:
                step = ps[1] - ps[0]
                left = max(floor.argmin - step, DELTA)
                right = min(floor.argmin + step, 1.0 - DELTA)
                lo = 0.0 if self._g1(left) < eps else crossing(left, floor.argmin)
                hi = 1.0 if self._g1(right) < eps else crossing(floor.argmin, right)
                out.append((lo, hi))
        return out

    def report(
        self,
        eps: Optional[float] = None,
        points: int = DEFAULT_GRID,
        sample_points: int = 99,
        tol: float = ENDPOINT_TOL,
    ) -> ConditionalReport:
        floor = self.epsilon_floor(points)
        warnings = [floor.warning] if floor.warning else []
        intervals: list[tuple[float, float]] = []
        if not self.gate < 1.0:
            status = "theorem hypothesis unmet"
        elif eps is None:
            status = "ok"
        elif eps <= floor.value:
            status = f"eps below floor {floor.value:.6g}"
        else:
            status = "ok"
        if eps is not None and self.gate < 1.0:
            intervals = self.admissible_intervals(eps, points, tol)
        if len(intervals) > 1:
            warnings.append(f"admissible set splits into {len(intervals)} intervals")
        sample_ps = np.linspace(0.01, 0.99, sample_points)
        samples = [
            (float(p), float(r), float(g))
            for p, r, g in zip(sample_ps, self.r(sample_ps), self.g(sample_ps))
        ]
        return ConditionalReport(
            K=self.K,
            q=self.q,
            ell0=self.ell0,
            gate=self.gate,
            epsilon_floor=floor.value,
            argmin_p=floor.argmin,
            boundary=floor.boundary,
            eps=eps,
            intervals=intervals,
            multiple_intervals=len(intervals) > 1,
            status=status,
            warnings=warnings,
            samples=samples,
        )


def g_function(A: Family, B: Family, p: float, K: float = DEFAULT_K) -> float:
    if not 0.0 < p < 1.0:
        raise EndpointError("endpoint: use one-sided limit evaluation")
    return ConditionalProblem(A, B, K)._g1(p)


def epsilon_floor(
    A: Family, B: Family, K: float = DEFAULT_K, points: int = DEFAULT_GRID
) -> EpsilonFloor:
    """Minimum of ``g`` over (0, 1): scan, then bounded refinement."""
    return ConditionalProblem(A, B, K).epsilon_floor(points)


def admissible_intervals(
    A: Family,
    B: Family,
    eps: float,
    K: float = DEFAULT_K,
    points: int = DEFAULT_GRID,
    tol: float = ENDPOINT_TOL,
) -> list[tuple[float, float]]:
    return ConditionalProblem(A, B, K).admissible_intervals(eps, points, tol)


def conditional_report(
    A: Family,
    B: Family,
    K: float = DEFAULT_K,
    eps: Optional[float] = None,
    points: int = DEFAULT_GRID,
    tol: float = 1e-12,
) -> ConditionalReport:
    return ConditionalProblem(A, B, K, tol=tol).report(eps, points)


def check_basic_bound(A: Family, B: Family, p: float) -> bool:
    """Above Bell's threshold for ``<A>``, check ``P(A|B) > r(p) / 2``.

    Raises :class:`HypothesisNotMetError` when ``p`` does not exceed
    ``8 q log2(2 ell0)``; no claim is made there.
    """
    problem = ConditionalProblem(A, B)
    threshold = bell_bound(problem.q, problem.ell0)
    if not p > threshold:
        raise HypothesisNotMetError(
            f"hypothesis not met: p={p} does not exceed threshold {threshold:.6g}"
        )
    ps = np.array([p])
    return bool(problem.conditional(ps)[0] > problem.r(ps)[0] / 2.0)


def strengthened_upper_case(
    A: Family, B: Family, eps: float, points: int = DEFAULT_GRID
) -> float:
    """Smallest p guaranteed by the eps-dependent bound when ``r >= 1`` everywhere."""
    if not 0.0 < eps < 1.0:
        raise ThresholdLabError("eps must lie in (0, 1)")
    problem = ConditionalProblem(A, B)
    rs = problem.r(problem.grid(points))
    # r == 1 identically can land one ulp below 1
    if np.any(rs < 1.0 - 1e-12):
        raise HypothesisNotMetError("remark hypothesis fails: r < 1 somewhere on (0, 1)")
    return bell_eps_bound(problem.q, problem.ell0, eps)
