"""Dirichlet eigenvalues of deformed disks by the method of particular solutions.

Trial functions are ``J_n(omega r) cos(n theta)`` and ``J_n(omega r) sin(n theta)``.
For each frequency the stacked boundary/interior matrix is orthonormalised and
the smallest singular value of its boundary block (the sine of the subspace
angle) is minimised over omega.  Boundary samples come from the exact polar
radius, never from the second-order expansion, so the solver stays independent
of the formulas it is used to check.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import linalg, special

from .disk_spectrum import enumerate_spectrum
from .errors import DomainError, MatchError, ResolutionError
from .perturbation import predict
from .width_body import ConstantWidthBody, DeformationCoeffs

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SolverConfig:
    basis_size: int
    collocation_count: int
    interior_count: int
    search_window: tuple[float, float]
    scan_step: float = 0.01
    tol: float = 1e-10
    accept: float = 1e-3
    seed: int = 20240601

    def __post_init__(self):
        if self.collocation_count < 2 * self.basis_size:
            raise DomainError("collocation_count must be at least 2 * basis_size")
        if self.tol < 1e-10:
            raise DomainError("tol below 1e-10 is not supported")
        lo, hi = self.search_window
        if not 0 < lo < hi:
            raise DomainError(f"bad search window {self.search_window}")

    @classmethod
    def for_window(cls, lo: float, hi: float, **overrides) -> "SolverConfig":
        basis = overrides.pop("basis_size", max(30, math.ceil(1.5 * hi)))
        return cls(
            basis_size=basis,
            collocation_count=overrides.pop("collocation_count", 4 * basis),
            interior_count=overrides.pop("interior_count", basis),
            search_window=(lo, hi),
            **overrides,
        )

    @property
    def cluster_tol(self) -> float:
        return 50.0 * self.tol


@dataclass
class EigenResult:
    omegas: list[float]
    residuals: list[float]
    multiplicity_clusters: list[list[float]] = field(default_factory=list)

    @property
    def lambdas(self) -> list[float]:
        return [w * w for w in self.omegas]


class _Problem:
    """Sample points and the tension function for one body."""

    def __init__(self, body: ConstantWidthBody, config: SolverConfig):
        self.config = config
        n_b = config.collocation_count
        theta = 2.0 * np.pi * (np.arange(n_b) + 0.5) / n_b
        r_b = body.radius_exact(theta) if body.epsilon > 0 else np.ones_like(theta)
        rng = np.random.default_rng(config.seed)
        r_in = 0.9 * float(np.min(r_b)) * np.sqrt(rng.uniform(0.05, 1.0, config.interior_count))
        t_in = rng.uniform(0.0, 2.0 * np.pi, config.interior_count)
        self.n_boundary = n_b
        self.r = np.concatenate([r_b, r_in])
        self.theta = np.concatenate([theta, t_in])
        orders = np.arange(config.basis_size + 1)
        self.orders = orders
        self.cos = np.cos(np.outer(self.theta, orders))
        self.sin = np.sin(np.outer(self.theta, orders[1:]))
        self.r_max = float(np.max(r_b))

    def matrix(self, omega: float) -> np.ndarray:
        jn = special.jv(self.orders[None, :], omega * self.r[:, None])
        a = np.hstack([jn * self.cos, jn[:, 1:] * self.sin])
        norms = np.linalg.norm(a, axis=0)
        norms[norms == 0] = 1.0
        return a / norms

    def singular_values(self, omega: float, count: int = 2) -> np.ndarray:
        q, _ = linalg.qr(self.matrix(omega), mode="economic")
        s = linalg.svd(q[: self.n_boundary], compute_uv=False)
        return s[::-1][:count]

    def tension(self, omega: float) -> float:
        return float(self.singular_values(omega, 1)[0])


def _golden(fun, lo: float, hi: float, tol: float) -> tuple[float, float]:
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = fun(c), fun(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = fun(d)
    return (c, fc) if fc < fd else (d, fd)


def _refine(prob: _Problem, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Minimise the tension on [lo, hi], then sharpen with a V-fit.

    Near a simple root the tension is |omega - omega*| times a slope, so two
    secant lines through samples on either side cross at the root.
    """
    w, s = _golden(prob.tension, lo, hi, tol)
    h = max(20.0 * tol, 1e-8)
    left = [(w - 2 * h, prob.tension(w - 2 * h)), (w - h, prob.tension(w - h))]
    right = [(w + h, prob.tension(w + h)), (w + 2 * h, prob.tension(w + 2 * h))]
    sl = (left[1][1] - left[0][1]) / h
    sr = (right[1][1] - right[0][1]) / h
    if sl < 0 < sr:
        x = (right[0][1] - left[1][1] + sl * left[1][0] - sr * right[0][0]) / (sl - sr)
        if abs(x - w) < 2 * h:
            sx = prob.tension(x)
            if sx <= s * 1.5:
                return x, sx
    return w, s


def _resolve_cluster(prob: _Problem, w: float, s: float, config: SolverConfig) -> list[tuple[float, float]]:
    """Split a tension minimum into one or two eigenvalues.

    The second singular value at a root measures the distance to a nearby
    partner root; it is tiny when the eigenvalue is double.
    """
    s2 = float(prob.singular_values(w, 2)[1])
    h = config.scan_step
    slope = max(prob.tension(w + h), prob.tension(w - h)) / h
    if s2 > 0.5 * slope * h:
        return [(w, s)]
    if s2 < 10.0 * s + 1e-13:
        # both singular values at the noise floor: an exactly double root
        return [(w, s), (w, s2)]
    # partner expected about s2 / slope away; scan a local sub-grid for it
    d = s2 / slope
    sub = np.linspace(w - 4.0 * d, w + 4.0 * d, 81)
    vals = np.array([prob.tension(x) for x in sub])
    best = None
    for i in range(1, len(sub) - 1):
        if abs(sub[i] - w) < 0.25 * d:
            continue
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            x, sx = _refine(prob, sub[i - 1], sub[i + 1], config.tol)
            if best is None or sx < best[1]:
                best = (x, sx)
    if best is not None and best[1] < config.accept and abs(best[0] - w) > config.cluster_tol:
        return sorted([(w, s), best])
    return [(w, s)]


def solve_window(
    body: ConstantWidthBody, config: SolverConfig, regions: list[tuple[float, float]] | None = None
) -> EigenResult:
    """All Dirichlet frequencies of ``body`` inside ``config.search_window``.

    ``regions`` restricts the scan to sub-intervals already known to hold every
    root (used when re-solving with a larger basis).
    """
    lo, hi = config.search_window
    if hi > 0.8 * config.basis_size:
        raise ResolutionError(f"omega_hi={hi} exceeds 0.8 * basis_size={config.basis_size}")
    prob = _Problem(body, config)
    h = config.scan_step
    unique: list[tuple[float, float]] = []
    for a, b in regions or [(lo, hi)]:
        grid = np.arange(a - h, b + 1.5 * h, h)
        vals = np.array([prob.tension(w) for w in grid])
        for i in range(1, len(grid) - 1):
            if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
                w, s = _refine(prob, grid[i - 1], grid[i + 1], config.tol)
                if s >= config.accept:
                    continue
                # neighbouring grid minima can converge onto the same root
                if any(abs(w - u) < config.cluster_tol for u, _ in unique):
                    continue
                unique.extend(_resolve_cluster(prob, w, s, config))
    unique.sort()
    unique = [(w, s) for w, s in unique if lo <= w <= hi]
    if not unique:
        warnings.warn(f"no eigenvalue found in [{lo}, {hi}]", stacklevel=2)
    omegas = [float(w) for w, _ in unique]
    clusters: list[list[float]] = []
    for w in omegas:
        if clusters and w - clusters[-1][-1] <= config.cluster_tol:
            clusters[-1].append(w)
        else:
            clusters.append([w])
    return EigenResult(omegas, [float(s) for _, s in unique], clusters)


def _snap_to_gap(value: float, levels: list[float]) -> float:
    """Move a window edge to the midpoint of the disk-spectrum gap holding it."""
    below = [x for x in levels if x <= value]
    above = [x for x in levels if x > value]
    if not below or not above:
        return value
    return 0.5 * (below[-1] + above[0])


def index_window(kappa: int, eps: float) -> tuple[float, float, list[int]]:
    """Omega window around lambda_kappa of the disk and the indices it holds.

    The half-width in lambda is max(0.5, 10 eps j^2); both edges are then moved
    to mid-gap of the disk spectrum so that no eigenvalue sits near an edge.
    """
    table = enumerate_spectrum(min(512, kappa + 40))
    lam = table[kappa].lam
    half = max(0.5, 10.0 * eps * lam)
    levels = sorted({e.lam for e in table.entries})
    lo = _snap_to_gap(max(lam - half, 0.5 * levels[0]), levels)
    hi = _snap_to_gap(lam + half, levels)
    inside = [e.kappa for e in table.entries if lo < e.lam < hi]
    if inside and inside[-1] == len(table):
        raise ResolutionError("window reaches past the enumerated spectrum")
    return math.sqrt(lo), math.sqrt(hi), inside


# tension accepted as converged when escalating the basis
TARGET_RESIDUAL = 1e-9
MAX_BASIS = 160


def solve_index(body: ConstantWidthBody, kappa: int, **config_overrides) -> float:
    """Numerical lambda_kappa of ``body``, matched to disk indices by order.

    Starting from the default basis, the number of angular orders grows by half
    until the located roots carry tension below ``TARGET_RESIDUAL`` and their
    count matches the disk indices inside the window.
    """
    if not 1 <= kappa <= 50:
        raise DomainError(f"kappa must lie in 1..50, got {kappa}")
    lo, hi, inside = index_window(kappa, body.epsilon)
    config = SolverConfig.for_window(lo, hi, **config_overrides)
    regions = None
    while True:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            result = solve_window(body, config, regions)
        if len(result.omegas) == len(inside) and max(result.residuals, default=1.0) < TARGET_RESIDUAL:
            break
        if "basis_size" in config_overrides or config.basis_size >= MAX_BASIS:
            break
        if len(result.omegas) == len(inside) and regions is None:
            # roots are located; only their neighbourhoods need the larger basis
            h = 3.0 * config.scan_step
            regions = []
            for w in result.omegas:
                if regions and w - h <= regions[-1][1]:
                    regions[-1] = (regions[-1][0], w + h)
                else:
                    regions.append((w - h, w + h))
        basis = min(MAX_BASIS, math.ceil(1.5 * config.basis_size))
        config = replace(
            config,
            basis_size=basis,
            collocation_count=max(config.collocation_count, 4 * basis),
            interior_count=max(config.interior_count, basis),
        )
    if len(result.omegas) != len(inside):
        raise MatchError(
            f"found {len(result.omegas)} eigenvalues in [{lo:.4f}, {hi:.4f}], expected {len(inside)} "
            f"(indices {inside[0]}..{inside[-1]})"
        )
    return float(result.lambdas[kappa - inside[0]])


@dataclass(frozen=True)
class ConvergenceRow:
    eps: float
    lambda_num: float
    lambda_pred: float
    residual: float


@dataclass(frozen=True)
class ConvergenceStudy:
    kappa: int
    coeffs: DeformationCoeffs
    rows: tuple[ConvergenceRow, ...]
    slope: float | None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["eps", "lambda_num", "lambda_pred", "residual", "slope"])
        slope = "" if self.slope is None else repr(self.slope)
        for row in self.rows:
            writer.writerow([repr(row.eps), repr(row.lambda_num), repr(row.lambda_pred), repr(row.residual), slope])
        return buf.getvalue()


# residuals below this are solver noise and carry no convergence information
NOISE_FLOOR = 1e-11


def fitted_order(eps: list[float], residuals: list[float]) -> float | None:
    """Least-squares slope of log(residual) against log(eps)."""
    pts = [(math.log(e), math.log(r)) for e, r in zip(eps, residuals) if r > NOISE_FLOOR]
    if len(pts) < 2:
        return None
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def convergence_study(
    coeffs: DeformationCoeffs, kappa: int, eps_list: list[float], **config_overrides
) -> ConvergenceStudy:
    """Compare solver and second-order prediction over a descending eps list."""
    eps_list = [float(e) for e in eps_list]
    if len(eps_list) < 3:
        raise DomainError("need at least three eps values")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise DomainError("eps values must be strictly descending")
    rows = []
    for eps in eps_list:
        body = ConstantWidthBody(coeffs, eps)
        num = solve_index(body, kappa, **config_overrides)
        pred = predict(kappa, coeffs, eps).lambda_pred
        rows.append(ConvergenceRow(eps, num, pred, abs(num - pred)))
    slope = fitted_order([r.eps for r in rows], [r.residual for r in rows])
    return ConvergenceStudy(kappa, coeffs, tuple(rows), slope)
