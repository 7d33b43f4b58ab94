"""Normal approximation quality for the unique-count and binomial distributions.

Two metrics are used.  MADCD is the largest absolute gap between the exact
CDF and the continuity-corrected normal CDF, ``Phi((k + 0.5 - mean) / sd)``,
over the outcomes with positive probability.  JSD compares the exact pmf
with the normal discretised onto the same support, where each cell gets the
corrected CDF difference and the two end cells absorb the tails.

The exact distributions are built from Python integers; floats only appear
when a cumulative count is divided by the total number of ordered samples,
which Python rounds correctly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .exact import unique_count_weights
from .moments import mean_unique, variance_unique

__all__ = [
    "ApproxReport",
    "BinomialSpec",
    "BoundaryPoint",
    "GridCell",
    "NormalApprox",
    "ZeroVarianceError",
    "acceptance_bounds",
    "approx_report",
    "binomial_pmf",
    "binomial_report",
    "binomial_rules",
    "boundary_scan",
    "boundary_trend",
    "discretize_normal",
    "heuristic_category",
    "heuristic_single",
    "jsd",
    "madcd",
    "madcd_grid",
    "normal_approx_for",
    "standard_normal_cdf",
]

CONTINUITY_SHIFT = 0.5
_SQRT2 = math.sqrt(2.0)


class ZeroVarianceError(ValueError):
    """The distribution is degenerate, so no normal approximation exists."""


def standard_normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT2)


def _normal_sf(x: float) -> float:
    return 0.5 * math.erfc(x / _SQRT2)


@dataclass(frozen=True)
class NormalApprox:
    mean: float
    sd: float
    continuity_shift: float = CONTINUITY_SHIFT

    def __post_init__(self) -> None:
        if not self.sd > 0:
            raise ZeroVarianceError(f"sd must be positive, got {self.sd}")
        if self.continuity_shift != CONTINUITY_SHIFT:
            raise ValueError("continuity shift is fixed at 0.5")

    def z(self, k: float) -> float:
        return (k + self.continuity_shift - self.mean) / self.sd

    def cdf(self, k: float) -> float:
        """Continuity-corrected P(X <= k)."""
        return standard_normal_cdf(self.z(k))


def normal_approx_for(N: int, A: int) -> NormalApprox:
    """Normal with the exact finite-(N, A) mean and standard deviation of k."""
    if N < 1 or A < 0:
        raise ValueError(f"invalid parameters N={N}, A={A}")
    var = variance_unique(N, A)
    if var <= 0:
        raise ZeroVarianceError(f"k is constant for N={N}, A={A} (zero variance)")
    return NormalApprox(float(mean_unique(N, A)), math.sqrt(var))


def madcd(exact_cdf: Sequence[float | Fraction], approx: NormalApprox, start: int = 0) -> float:
    """Max |F(k) - Phi((k + 0.5 - mean) / sd)| over k = start, start + 1, ...

    ``exact_cdf[i]`` is the exact CDF at support point ``start + i``.
    """
    if len(exact_cdf) == 0:
        raise ValueError("support must be non-empty")
    return max(abs(float(f) - approx.cdf(start + i)) for i, f in enumerate(exact_cdf))


def discretize_normal(approx: NormalApprox, support: range) -> list[float]:
    """Cell masses of the corrected normal on a contiguous integer support."""
    if len(support) == 0:
        raise ValueError("support must be non-empty")
    if support.step != 1:
        raise ValueError("support must be contiguous")
    lo, hi = support.start, support.stop - 1
    if lo == hi:
        return [1.0]
    edges = [approx.cdf(k) for k in range(lo, hi)]
    out = [edges[0]]
    out.extend(edges[i] - edges[i - 1] for i in range(1, len(edges)))
    out.append(_normal_sf(approx.z(hi - 1)))
    return out


def jsd(p: Sequence[float], q: Sequence[float], base: float = math.e) -> float:
    """Jensen-Shannon divergence; natural log unless ``base`` is given."""
    if len(p) != len(q):
        raise ValueError(f"length mismatch: {len(p)} vs {len(q)}")
    for name, vec in (("p", p), ("q", q)):
        if abs(math.fsum(vec) - 1.0) > 1e-9:
            raise ValueError(f"{name} does not sum to 1")
    total = 0.0
    for a, b in zip(p, q):
        a = float(a)
        b = float(b)
        s = a + b
        if a > 0:
            total += a * math.log(2.0 * a / s)
        if b > 0:
            total += b * math.log(2.0 * b / s)
    return max(0.0, 0.5 * total / math.log(base))


@dataclass(frozen=True)
class BinomialSpec:
    n_b: int
    p: Fraction

    def __post_init__(self) -> None:
        if self.n_b < 1:
            raise ValueError(f"n_b must be at least 1, got {self.n_b}")
        p = Fraction(self.p)
        if not 0 < p < 1:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        object.__setattr__(self, "p", p)

    @property
    def mean(self) -> float:
        return float(self.n_b * self.p)

    @property
    def sd(self) -> float:
        return math.sqrt(self.n_b * self.p * (1 - self.p))


def _binomial_weights(spec: BinomialSpec) -> tuple[list[int], int]:
    num, den = spec.p.numerator, spec.p.denominator
    n = spec.n_b
    fail = den - num
    # w_j = C(n, j) num^j fail^(n-j), built by w_{j+1} = w_j (n-j) num / ((j+1) fail)
    w = fail**n
    weights = [w]
    for j in range(n):
        w = w * (n - j) * num // ((j + 1) * fail)
        weights.append(w)
    return weights, den**n


def binomial_pmf(spec: BinomialSpec, j: int) -> Fraction:
    if not 0 <= j <= spec.n_b:
        raise ValueError(f"j={j} outside 0..{spec.n_b}")
    p = spec.p
    return math.comb(spec.n_b, j) * p**j * (1 - p) ** (spec.n_b - j)


def binomial_rules(spec: BinomialSpec, *, skew_sqrt: bool = True) -> tuple[bool, bool, bool]:
    """The two textbook rules of thumb and their conjunction.

    Rule 1: ``n p > 5`` and ``n (1 - p) > 5``.
    Rule 2: ``|1 - 2p| / sqrt(p (1 - p)) < 0.3 sqrt(n)`` and ``n > 5`` (the
    skewness rule).  ``skew_sqrt=False`` drops the square root from the
    denominator, giving a much stricter region.
    """
    n = spec.n_b
    p = float(spec.p)
    spread = p * (1 - p)
    if skew_sqrt:
        spread = math.sqrt(spread)
    rule1 = n * p > 5 and n * (1 - p) > 5
    rule2 = abs(1 - 2 * p) / spread < 0.3 * math.sqrt(n) and n > 5
    return rule1, rule2, rule1 and rule2


def heuristic_single(N: int, A: float) -> bool:
    return N > 5 and A > 5 and 1.4 * N**0.67 <= A <= 1.13 * N**1.19


def heuristic_category(N_s: int, a_bar_s: float) -> bool:
    """Rule for the unique count of one category with expected draws ``a_bar_s``."""
    if N_s <= 8:
        return False
    return 1.4 * N_s**0.67 <= a_bar_s <= 1.13 * (N_s - 8) ** 1.19


def _metrics(weights: Sequence[int], total: int, start: int, approx: NormalApprox,
             log_base: float) -> tuple[float, float]:
    cdf = []
    acc = 0
    for w in weights:
        acc += w
        cdf.append(acc / total)
    pmf = [w / total for w in weights]
    q = discretize_normal(approx, range(start, start + len(weights)))
    return madcd(cdf, approx, start), jsd(pmf, q, base=log_base)


@dataclass(frozen=True)
class ApproxReport:
    N: int
    A: int
    madcd: float
    jsd: float
    heuristic_pass: bool
    mean: float
    sd: float


def approx_report(N: int, A: int, log_base: float = math.e) -> ApproxReport:
    approx = normal_approx_for(N, A)
    weights = unique_count_weights(N, A)
    # k = 0 is impossible once A >= 1; the support starts at 1
    m, j = _metrics(weights[1:], N**A, 1, approx, log_base)
    return ApproxReport(N, A, m, j, heuristic_single(N, A), approx.mean, approx.sd)


def binomial_report(spec: BinomialSpec, log_base: float = math.e) -> tuple[float, float]:
    """(MADCD, JSD) of a binomial against its corrected normal."""
    weights, total = _binomial_weights(spec)
    approx = NormalApprox(spec.mean, spec.sd)
    return _metrics(weights, total, 0, approx, log_base)


@dataclass(frozen=True)
class GridCell:
    """One scan cell.  ``x, y`` are (N, A) or (n_b, p) depending on the mode.

    ``madcd`` and ``jsd`` are ``None`` when no approximation is defined; the
    reason is then in ``flag``.
    """

    x: int
    y: int | Fraction
    madcd: float | None
    jsd: float | None
    heuristic_pass: bool
    flag: str = ""


def _unique_cell(args: tuple[int, int, float]) -> GridCell:
    N, A, base = args
    passed = heuristic_single(N, A)
    try:
        r = approx_report(N, A, base)
    except ZeroVarianceError:
        return GridCell(N, A, None, None, passed, "zero-variance")
    return GridCell(N, A, r.madcd, r.jsd, passed)


def _binomial_cell(args: tuple[int, Fraction, float]) -> GridCell:
    n, p, base = args
    spec = BinomialSpec(n, p)
    m, j = binomial_report(spec, base)
    return GridCell(n, p, m, j, binomial_rules(spec)[2])


def madcd_grid(xs: Iterable[int], ys: Iterable[int | Fraction], mode: str = "exact", *,
               jobs: int = 1, log_base: float = math.e,
               cap: int | None = 150) -> list[GridCell]:
    """Scan MADCD/JSD over a parameter grid, row-major in ``(x, y)``.

    ``mode="exact"`` treats ``(x, y)`` as ``(N, A)``.  ``mode="binomial"``
    treats them as ``(n_b, p)`` and flags cells by the combined binomial rule.
    ``cap`` bounds ``N`` and ``A`` in exact mode (``None`` disables it).
    Results do not depend on ``jobs``.
    """
    xs = list(xs)
    ys = list(ys)
    if not xs or not ys:
        raise ValueError("grid ranges must be non-empty")
    if mode == "exact":
        if cap is not None and (max(xs) > cap or max(ys) > cap):
            raise ValueError(f"grid exceeds cap {cap}")
        fn = _unique_cell
        tasks = [(x, y, log_base) for x, y in product(xs, ys)]
    elif mode == "binomial":
        fn = _binomial_cell
        tasks = [(x, Fraction(y), log_base) for x, y in product(xs, ys)]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))


@dataclass(frozen=True)
class BoundaryPoint:
    N: int
    A_lower: int
    A_upper: int
    madcd_lower: float
    madcd_upper: float


def acceptance_bounds(N: int) -> tuple[int, int] | None:
    """Smallest and largest accepted A for this N, or None if none are."""
    if N <= 5:
        return None
    lo = max(6, math.ceil(1.4 * N**0.67) - 1)
    while not heuristic_single(N, lo):
        lo += 1
        if lo > 1.13 * N**1.19 + 1:
            return None
    hi = math.floor(1.13 * N**1.19) + 1
    while not heuristic_single(N, hi):
        hi -= 1
    return lo, hi


def _boundary_point(N: int) -> BoundaryPoint | None:
    bounds = acceptance_bounds(N)
    if bounds is None:
        return None
    lo, hi = bounds
    return BoundaryPoint(N, lo, hi, approx_report(N, lo).madcd, approx_report(N, hi).madcd)


def boundary_scan(Ns: Iterable[int], *, jobs: int = 1) -> list[BoundaryPoint]:
    """MADCD at the innermost integer A on each edge of the acceptance region."""
    Ns = list(Ns)
    if jobs <= 1:
        points = [_boundary_point(N) for N in Ns]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_boundary_point, Ns))
    return [p for p in points if p is not None]


def _slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


def boundary_trend(points: Sequence[BoundaryPoint]) -> dict[str, float]:
    """Least-squares slopes of boundary MADCD against N on both edges."""
    if len(points) < 2:
        raise ValueError("need at least two boundary points")
    Ns = [float(p.N) for p in points]
    return {
        "lower_slope": _slope(Ns, [p.madcd_lower for p in points]),
        "upper_slope": _slope(Ns, [p.madcd_upper for p in points]),
    }
