"""Constant-width bodies from odd-harmonic support-function data.

The support function is ``h = 1 + eps f + eps^2 g`` with

    f(phi) = sum_{n odd} 2 Re(a_n e^{i n phi}),   g likewise with b_n.

Odd harmonics flip sign under ``phi -> phi + pi``, so ``h(phi) + h(phi + pi) = 2``
for every choice of data and the body has width 2 in all directions.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidBodyError

MAX_INDEX = 128
GRID = 4096
SAFETY = 0.99

_TERM = re.compile(r"^\s*([ab])(\d+)\s*=\s*(.+?)\s*$")


@dataclass(frozen=True)
class DeformationCoeffs:
    """Odd-indexed Fourier data ``a_n`` (first order) and ``b_n`` (second order)."""

    a: dict[int, complex] = field(default_factory=dict)
    b: dict[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("a", "b"):
            clean = {}
            for n, v in getattr(self, name).items():
                if int(n) != n or n < 1 or n % 2 == 0 or n > MAX_INDEX:
                    raise InvalidBodyError(f"{name}_{n}: index must be odd in [1, {MAX_INDEX}]")
                v = complex(v)
                if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                    raise InvalidBodyError(f"{name}_{n} is not finite")
                if v != 0:
                    clean[int(n)] = v
            object.__setattr__(self, name, dict(sorted(clean.items())))

    @property
    def truncation(self) -> int:
        return max([*self.a, *self.b], default=0)

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def a_full(self, n: int) -> complex:
        """a_n for any integer n, with a_{-n} = conj(a_n) and even entries zero."""
        if n < 0:
            return self.a.get(-n, 0j).conjugate()
        return self.a.get(n, 0j)

    def rotated(self, psi: float) -> "DeformationCoeffs":
        """Data of the body rotated by ``psi`` (a_n -> a_n e^{-i n psi})."""
        return DeformationCoeffs(
            {n: v * cmath.exp(-1j * n * psi) for n, v in self.a.items()},
            {n: v * cmath.exp(-1j * n * psi) for n, v in self.b.items()},
        )

    def format(self) -> str:
        parts = []
        for name, store in (("a", self.a), ("b", self.b)):
            for n, v in store.items():
                parts.append(f"{name}{n}={_format_complex(v)}")
        return ",".join(parts)


def _format_complex(v: complex) -> str:
    if v.imag == 0:
        return repr(v.real)
    if v.real == 0:
        return f"{v.imag!r}i"
    sign = "+" if v.imag >= 0 else "-"
    return f"{v.real!r}{sign}{abs(v.imag)!r}i"


def _parse_value(text: str) -> complex:
    t = text.replace(" ", "")
    if not t or "j" in t.lower().replace("i", ""):
        raise InvalidBodyError(f"bad coefficient value {text!r}")
    if t.endswith("i"):
        t = t[:-1] + "j"
        if t in ("j", "+j", "-j"):
            t = t.replace("j", "1j")
    try:
        return complex(t)
    except ValueError:
        raise InvalidBodyError(f"bad coefficient value {text!r}") from None


def parse_coeffs(text: str | list[str]) -> DeformationCoeffs:
    """Parse ``a3=0.1,a5=0.02+0.01i,b3=-0.05`` (or a list of such terms)."""
    items = text.split(",") if isinstance(text, str) else [s for part in text for s in part.split(",")]
    a: dict[int, complex] = {}
    b: dict[int, complex] = {}
    for item in items:
        if not item.strip():
            continue
        match = _TERM.match(item)
        if match is None:
            raise InvalidBodyError(f"cannot parse coefficient {item!r}")
        name, idx, value = match.groups()
        n = int(idx)
        if n % 2 == 0 or n < 1 or n > MAX_INDEX:
            raise InvalidBodyError(f"{name}{n}: index must be odd in [1, {MAX_INDEX}]")
        store = a if name == "a" else b
        if n in store:
            raise InvalidBodyError(f"{name}{n} given twice")
        store[n] = _parse_value(value)
    return DeformationCoeffs(a, b)


def _harmonic_sum(store: dict[int, complex], phi: np.ndarray, deriv: int) -> np.ndarray:
    """d^deriv/dphi^deriv of sum 2 Re(c_n e^{i n phi})."""
    out = np.zeros_like(phi, dtype=float)
    for n, c in store.items():
        out += 2.0 * np.real(c * (1j * n) ** deriv * np.exp(1j * n * phi))
    return out


def fourier_series(store: dict[int, complex], phi, deriv: int = 0):
    phi = np.asarray(phi, dtype=float)
    return _harmonic_sum(store, phi, deriv)


def _grid(n: int = GRID) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def _first_positive_root(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Smallest t > 0 with 1 + t p + t^2 q = 0 (inf if none), elementwise."""
    disc = p * p - 4.0 * q
    out = np.full(p.shape, np.inf)
    lin = q == 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(lin & (p < 0), -1.0 / p, out)
        sq = np.sqrt(np.where(disc >= 0, disc, 0.0))
        # roots 2 / (-p -+ sq); the larger denominator gives the smaller root
        r1 = 2.0 / (-p + sq)
        r2 = 2.0 / (-p - sq)
        cand = np.where(r1 > 0, r1, np.inf)
        cand = np.minimum(cand, np.where(r2 > 0, r2, np.inf))
    quad = ~lin & (disc >= 0)
    return np.where(quad, cand, out)


def epsilon_max(coeffs: DeformationCoeffs) -> float:
    """Convexity bound on epsilon, times the 0.99 safety factor.

    The threshold is the smallest positive root in epsilon of
    ``1 + eps (f + f'') + eps^2 (g + g'')`` over a 4096-point grid, with the
    worst grid angles refined by a bounded scalar search.
    """
    if coeffs.is_zero():
        return math.inf

    def rho_terms(phi):
        p = _harmonic_sum(coeffs.a, phi, 0) + _harmonic_sum(coeffs.a, phi, 2)
        q = _harmonic_sum(coeffs.b, phi, 0) + _harmonic_sum(coeffs.b, phi, 2)
        return p, q

    phi = _grid()
    p, q = rho_terms(phi)
    if np.all(np.abs(p) < 1e-15) and np.all(np.abs(q) < 1e-15):
        return math.inf
    roots = _first_positive_root(p, q)
    best = float(np.min(roots))
    if not math.isfinite(best):
        return math.inf
    step = 2.0 * np.pi / GRID
    for i in np.argsort(roots)[:8]:
        # golden-section on the root as a function of phi, near grid minima
        lo, hi = phi[i] - step, phi[i] + step
        inv = (math.sqrt(5.0) - 1.0) / 2.0

        def root_at(t):
            pp, qq = rho_terms(np.array([t]))
            return float(_first_positive_root(pp, qq)[0])

        c, d = hi - inv * (hi - lo), lo + inv * (hi - lo)
        fc, fd = root_at(c), root_at(d)
        for _ in range(60):
            if fc < fd:
                hi, d, fd = d, c, fc
                c = hi - inv * (hi - lo)
                fc = root_at(c)
            else:
                lo, c, fc = c, d, fd
                d = lo + inv * (hi - lo)
                fd = root_at(d)
        best = min(best, fc, fd)
    return SAFETY * best


@dataclass(frozen=True)
class ConstantWidthBody:
    coeffs: DeformationCoeffs
    epsilon: float
    epsilon_max: float = field(init=False)

    def __post_init__(self):
        if not (self.epsilon >= 0) or not math.isfinite(self.epsilon):
            raise InvalidBodyError(f"epsilon must be finite and >= 0, got {self.epsilon}")
        emax = epsilon_max(self.coeffs)
        object.__setattr__(self, "epsilon_max", emax)
        if self.epsilon > 0 and not self.epsilon < emax:
            raise InvalidBodyError(f"epsilon {self.epsilon} is not below epsilon_max {emax:.6g}")
        h, _, h2 = self.support(_grid())
        if np.any(h <= 0) or np.any(h + h2 <= 0):
            raise InvalidBodyError("support function fails h > 0 or h + h'' > 0 on the grid")

    def support(self, phi):
        """(h, h', h'') at the support angle(s) ``phi``."""
        phi = np.asarray(phi, dtype=float)
        e = self.epsilon
        a, b = self.coeffs.a, self.coeffs.b
        h = 1.0 + e * _harmonic_sum(a, phi, 0) + e * e * _harmonic_sum(b, phi, 0)
        h1 = e * _harmonic_sum(a, phi, 1) + e * e * _harmonic_sum(b, phi, 1)
        h2 = e * _harmonic_sum(a, phi, 2) + e * e * _harmonic_sum(b, phi, 2)
        return h, h1, h2

    def curvature_radius(self, phi):
        h, _, h2 = self.support(phi)
        return h + h2

    def boundary_point(self, phi):
        """Boundary point whose outward normal is (cos phi, sin phi)."""
        phi = np.asarray(phi, dtype=float)
        h, h1, _ = self.support(phi)
        c, s = np.cos(phi), np.sin(phi)
        return h * c - h1 * s, h * s + h1 * c

    def radius_exact(self, theta):
        """Polar radius R(theta) of the boundary.

        The polar angle of the boundary point is monotone in the support angle
        and differs from it by less than pi/2, so ``[theta - pi/2, theta + pi/2]``
        always brackets the preimage; 56 vectorised bisection steps pin it.
        """
        theta = np.asarray(theta, dtype=float)
        scalar = theta.ndim == 0
        theta = np.atleast_1d(theta)
        lo = theta - 0.5 * np.pi
        hi = theta + 0.5 * np.pi

        def offset(phi):
            x, y = self.boundary_point(phi)
            return np.angle(np.exp(1j * (np.arctan2(y, x) - theta)))

        for _ in range(56):
            mid = 0.5 * (lo + hi)
            neg = offset(mid) < 0
            lo = np.where(neg, mid, lo)
            hi = np.where(neg, hi, mid)
        x, y = self.boundary_point(0.5 * (lo + hi))
        r = np.hypot(x, y)
        return float(r[0]) if scalar else r

    def radius_second_order(self, theta):
        theta = np.asarray(theta, dtype=float)
        e = self.epsilon
        f = _harmonic_sum(self.coeffs.a, theta, 0)
        f1 = _harmonic_sum(self.coeffs.a, theta, 1)
        g = _harmonic_sum(self.coeffs.b, theta, 0)
        r = 1.0 + e * f + e * e * (g - 0.5 * f1 * f1)
        return float(r) if r.ndim == 0 else r

    def width_and_diameter(self, n: int = GRID) -> tuple[float, float, float]:
        """(min width, max width, diameter) sampled on ``n`` support angles.

        For a convex body the diameter is realised between the two contact
        points of a pair of parallel support lines, so it is the maximum over
        phi of the distance from X(phi) to X(phi + pi).
        """
        phi = _grid(n)
        h, _, _ = self.support(phi)
        hopp, _, _ = self.support(phi + np.pi)
        w = h + hopp
        x0, y0 = self.boundary_point(phi)
        x1, y1 = self.boundary_point(phi + np.pi)
        diam = float(np.max(np.hypot(x0 - x1, y0 - y1)))
        return float(np.min(w)), float(np.max(w)), diam

    def area(self) -> float:
        """Area 1/2 * integral of (h^2 - h'^2); the trapezoid rule is exact here."""
        n = max(GRID, 8 * self.coeffs.truncation + 8)
        h, h1, _ = self.support(_grid(n))
        return float(np.pi * np.mean(h * h - h1 * h1))

    def polygon(self, n: int = 720) -> np.ndarray:
        x, y = self.boundary_point(_grid(n))
        return np.column_stack([x, y])

    def to_svg(self, n: int = 720) -> str:
        pts = self.polygon(n)
        path = " ".join(f"{'M' if i == 0 else 'L'}{x:.6f},{-y:.6f}" for i, (x, y) in enumerate(pts))
        return (
            '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.5 -1.5 3 3">\n'
            f'<path d="{path} Z" fill="none" stroke="black" stroke-width="0.01"/>\n'
            "</svg>\n"
        )

    def radius_csv(self, n: int = 360) -> str:
        theta = _grid(n)
        exact = self.radius_exact(theta)
        approx = self.radius_second_order(theta)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["theta", "r_exact", "r_second_order"])
        for row in zip(theta, exact, approx):
            writer.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def random_coeffs(
    rng: np.random.Generator,
    max_index: int = 9,
    scale: float = 0.1,
    second_order: bool = True,
) -> DeformationCoeffs:
    """Random odd-harmonic data with moduli decaying like 1/n^3 (n >= 3)."""
    a, b = {}, {}
    for n in range(3, max_index + 1, 2):
        size = scale * 27.0 / n**3
        a[n] = complex(rng.normal(scale=size), rng.normal(scale=size))
        if second_order:
            b[n] = complex(rng.normal(scale=size), rng.normal(scale=size))
    return DeformationCoeffs(a, b)
