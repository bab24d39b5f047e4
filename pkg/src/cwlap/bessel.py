"""Bessel functions of the first kind, their zeros and log-derivative ratios.

Evaluation uses the ascending series where its terms do not cancel badly and
Miller's backward recurrence (normalised by ``J_0 + 2 sum J_2k = 1``)
everywhere else.  Zeros of ``J_m`` and ``J_m'`` are bracketed by interlacing
and polished with a safeguarded Newton iteration.
"""

from __future__ import annotations

import decimal
import math
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from .errors import ConvergenceError, DomainError, PoleError

MAX_ORDER = 64
MAX_ARG = 200.0
MAX_ZERO_INDEX = 64

# |J_n(x)| below this fraction of hypot(J_n, J_n') counts as sitting on a zero.
DEGENERACY_TOL = 1e-9
ZERO_TOL = 1e-12
NEWTON_MAXIT = 60

DEFAULT_CACHE = Path("cache") / "bessel_zeros.csv"

# Past this |F_n| the double-precision ratio has lost too many digits to the
# cancellation in J_n and is recomputed in decimal arithmetic.
STEEP_RATIO = 100.0

_RATIO_KINDS = ("m-1", "m+1", "m-3", "m+3", "m-5", "m+5")


# ---------------------------------------------------------------------------
# evaluation


def _series(n: int, x: float) -> float:
    half = 0.5 * x
    q = -half * half
    term = math.exp(n * math.log(half) - math.lgamma(n + 1))
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (n + k))
        total += term
        if abs(term) <= 1e-17 * abs(total) or term == 0.0:
            return total
        if k > 500:
            return total


def _use_series(n: int, x: float) -> bool:
    # terms decrease monotonically once x^2/4 < n+1; below x=6 the worst
    # cancellation costs < 2 digits.
    return x <= 6.0 or 0.25 * x * x <= n + 1


def _miller(nmax: int, x: float) -> list[float]:
    """J_0..J_nmax by backward recurrence."""
    start = max(nmax, int(x)) + 20 + int(math.sqrt(60.0 * max(nmax, x, 1.0)))
    start += start % 2
    vals = [0.0] * (nmax + 1)
    jp1, j = 0.0, 1.0
    norm = 0.0
    two_over_x = 2.0 / x
    for k in range(start, 0, -1):
        jm1 = k * two_over_x * j - jp1
        jp1, j = j, jm1
        order = k - 1
        if order <= nmax:
            vals[order] = j
        if order == 0:
            norm += j
        elif order % 2 == 0:
            norm += 2.0 * j
        if abs(j) > 1e200:
            j *= 1e-200
            jp1 *= 1e-200
            norm *= 1e-200
            for i in range(order, nmax + 1):
                vals[i] *= 1e-200
    return [v / norm for v in vals]


def _orders(nlo: int, nhi: int, x: float) -> list[float]:
    """J_nlo..J_nhi for 0 <= nlo <= nhi (no range checks)."""
    if all(_use_series(n, x) for n in range(nlo, nhi + 1)):
        return [_series(n, x) for n in range(nlo, nhi + 1)]
    return _miller(nhi, x)[nlo:]


def _jn(n: int, x: float) -> float:
    sign = 1.0
    if n < 0:
        n = -n
        sign = -1.0 if n % 2 else 1.0
    return sign * _orders(n, n, x)[0]


def _triplet(n: int, x: float) -> tuple[float, float, float]:
    """(J_{n-1}, J_n, J_{n+1}) for n >= 0."""
    if n == 0:
        j0, j1 = _orders(0, 1, x)
        return -j1, j0, j1
    a, b, c = _orders(n - 1, n + 1, x)
    return a, b, c


def _check_args(n: int, x: float) -> None:
    if int(n) != n or not 0 <= n <= MAX_ORDER:
        raise DomainError(f"order must be an integer in [0, {MAX_ORDER}], got {n}")
    if not (x > 0.0) or x > MAX_ARG or not math.isfinite(x):
        raise DomainError(f"argument must lie in (0, {MAX_ARG}], got {x}")


def bessel_j(n: int, x: float) -> float:
    """Return J_n(x) for integer 0 <= n <= 64 and 0 < x <= 200."""
    _check_args(n, x)
    return _jn(int(n), float(x))


def bessel_j_prime(n: int, x: float) -> float:
    """Return J_n'(x) from ``2 J_n' = J_{n-1} - J_{n+1}``."""
    _check_args(n, x)
    jm, _, jp = _triplet(int(n), float(x))
    return 0.5 * (jm - jp)


def _decimal_series(n: int, x, prec: int) -> decimal.Decimal:
    with decimal.localcontext() as ctx:
        ctx.prec = prec
        half = decimal.Decimal(x) / 2
        q = -half * half
        term = half**n / math.factorial(n)
        total = term
        tiny = decimal.Decimal(10) ** -(prec - 5) * abs(term)
        k = 0
        while abs(term) > tiny or k <= half:
            k += 1
            term = term * q / (k * (n + k))
            total += term
        return total


def _decimal_prec(n: int, x: float) -> int:
    # the series terms peak near e^x: carry that many digits plus guard digits
    return 30 + int(0.45 * x) + int(0.5 * math.log10(n + 2))


def _decimal_logderiv(n: int, x, prec: int) -> decimal.Decimal:
    with decimal.localcontext() as ctx:
        ctx.prec = prec
        x = decimal.Decimal(x)
        return n - x * _decimal_series(n + 1, x, prec) / _decimal_series(n, x, prec)


def _logderiv(n: int, x: float) -> float:
    n = abs(n)
    jm, jn, jp = _triplet(n, x)
    amp = math.hypot(jn, 0.5 * (jm - jp))
    if abs(jn) < DEGENERACY_TOL * amp:
        raise PoleError(f"J_{n}({x!r}) = {jn:.3e} is numerically zero")
    value = n - x * jp / jn
    if abs(value) > STEEP_RATIO:
        value = float(_decimal_logderiv(n, x, _decimal_prec(n, x)))
    return value


def log_derivative(n: int, x: float) -> float:
    """F_n(x) = x J_n'(x) / J_n(x).

    Negative orders are folded (``J_{-n} = (-1)^n J_n`` leaves the ratio
    unchanged).  Orders above 64 are accepted here because the perturbation
    sums reach ``k + m`` for large stored harmonics.

    Raises
    ------
    PoleError
        If ``x`` sits within the degeneracy tolerance of a zero of ``J_n``.
    """
    if int(n) != n:
        raise DomainError(f"order must be an integer, got {n}")
    if not (x > 0.0) or x > MAX_ARG:
        raise DomainError(f"argument must lie in (0, {MAX_ARG}], got {x}")
    return _logderiv(int(n), float(x))


def log_derivative_at_zero(n: int, m: int, j: float) -> float:
    """F_n at the zero of J_m that the double ``j`` approximates.

    Where F_n is steep, one ulp in ``j`` moves F_n by more than 1e-8, so the
    zero is polished in decimal arithmetic before the ratio is taken.
    """
    value = log_derivative(n, j)
    if abs(value) <= STEEP_RATIO:
        return value
    n = abs(int(n))
    prec = _decimal_prec(max(n, m), j)
    with decimal.localcontext() as ctx:
        ctx.prec = prec
        x = decimal.Decimal(j)
        for _ in range(3):
            jm = _decimal_series(m, x, prec)
            slope = m / x * jm - _decimal_series(m + 1, x, prec)
            x -= jm / slope
        return float(_decimal_logderiv(n, x, prec))


@dataclass(frozen=True)
class BesselPoint:
    order: int
    argument: float
    value: float
    derivative: float
    logderiv: float | None


def bessel_point(n: int, x: float) -> BesselPoint:
    _check_args(n, x)
    jm, jn, jp = _triplet(int(n), float(x))
    d = 0.5 * (jm - jp)
    try:
        f = _logderiv(int(n), float(x))
    except PoleError:
        f = None
    return BesselPoint(int(n), float(x), jn, d, f)


# ---------------------------------------------------------------------------
# closed-form ratios at a zero j of J_m


def ratio_closed_form(kind: str, m: int, j: float) -> float:
    """F_{m+s}(j) as a rational function of j^2, valid when J_m(j) = 0.

    ``kind`` is one of ``"m-1", "m+1", "m-3", "m+3", "m-5", "m+5"``.
    """
    if kind not in _RATIO_KINDS:
        raise DomainError(f"unknown ratio kind {kind!r}")
    j2 = j * j

    def _div(num: float, den: float, scale: float) -> float:
        if abs(den) < DEGENERACY_TOL * scale:
            raise PoleError(f"closed form {kind} at m={m}: denominator {den:.3e} vanishes")
        return num / den

    if kind == "m-1":
        return float(m - 1)
    if kind == "m+1":
        return float(-(m + 1))
    if kind == "m-3":
        c = 4.0 * (m - 2) * (m - 1)
        return (m - 3) - _div(2.0 * (m - 1) * j2, c - j2, max(abs(c), j2))
    if kind == "m+3":
        c = 4.0 * (m + 2) * (m + 1)
        return -(m + 3) + _div(2.0 * (m + 1) * j2, c - j2, max(abs(c), j2))
    if kind == "m+5":
        num = j2 * (8.0 * (m + 3) * (m + 2) * (m + 1) - 4.0 * j2 * (m + 2))
        c0 = 16.0 * (m + 4) * (m + 3) * (m + 2) * (m + 1)
        c1 = 4.0 * (m + 2) * (3 * m + 9)
        den = c0 - c1 * j2 + j2 * j2
        return -(m + 5) + _div(num, den, max(abs(c0), abs(c1) * j2, j2 * j2))
    # m-5
    num = j2 * (8.0 * (m - 3) * (m - 2) * (m - 1) - 4.0 * j2 * (m - 2))
    c0 = 16.0 * (m - 4) * (m - 3) * (m - 2) * (m - 1)
    c1 = 4.0 * (m - 2) * (3 * m - 9)
    den = c0 - c1 * j2 + j2 * j2
    return (m - 5) - _div(num, den, max(abs(c0), abs(c1) * j2, j2 * j2))


def closed_form_kind(order: int, m: int) -> str | None:
    """Ratio kind expressing F_order at a zero of J_m, or None."""
    shift = abs(order) - m
    if shift in (-5, -3, -1, 1, 3, 5):
        return f"m{shift:+d}"
    return None


# ---------------------------------------------------------------------------
# zeros


class ZeroTable:
    """Cache of Bessel zeros, optionally backed by an append-only CSV file.

    Each line reads ``m,p,value,kind`` with kind ``zero`` or ``prime_zero``.
    Reads are lock-free; writes go through a single lock.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else None
        self.zeros: dict[tuple[int, int], float] = {}
        self.derivative_zeros: dict[tuple[int, int], float] = {}
        self.precision = 0.0
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._load()

    def _store(self, kind: str) -> dict[tuple[int, int], float]:
        return self.zeros if kind == "zero" else self.derivative_zeros

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                m, p, value, kind = line.split(",")
                if kind not in ("zero", "prime_zero"):
                    raise ValueError(f"bad cache record {line!r}")
                self._store(kind).setdefault((int(m), int(p)), float(value))

    def get(self, m: int, p: int, kind: str = "zero") -> float | None:
        return self._store(kind).get((m, p))

    def put(self, m: int, p: int, value: float, kind: str = "zero", precision: float = 0.0) -> float:
        with self._lock:
            store = self._store(kind)
            if (m, p) in store:
                return store[(m, p)]
            store[(m, p)] = value
            self.precision = max(self.precision, precision)
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
                    fh.write(f"{m},{p},{value:.17g},{kind}\n")
        return value

    def check_invariants(self) -> list[str]:
        """Interlacing, the Watson lower bound and j'_{m,1} <= j_{m,1}."""
        problems = []
        z = self.zeros
        for (m, p), v in sorted(z.items()):
            nxt = z.get((m + 1, p))
            if nxt is not None and not v < nxt:
                problems.append(f"j_{m},{p} >= j_{m + 1},{p}")
            after = z.get((m, p + 1))
            if nxt is not None and after is not None and not nxt < after:
                problems.append(f"j_{m + 1},{p} >= j_{m},{p + 1}")
            if p == 1 and v < math.sqrt(m * (m + 2)):
                problems.append(f"j_{m},1 below sqrt(m(m+2))")
        for (m, p), v in sorted(self.derivative_zeros.items()):
            if p == 1 and m >= 1 and (m, 1) in z and v > z[(m, 1)]:
                problems.append(f"j'_{m},1 > j_{m},1")
        return problems


_table = ZeroTable()


def zero_table() -> ZeroTable:
    return _table


def configure_cache(path: str | os.PathLike | None) -> ZeroTable:
    """Replace the module zero table; ``None`` gives a memory-only table."""
    global _table
    _table = ZeroTable(path)
    return _table


def _safeguarded_newton(fun, a: float, b: float, x0: float | None = None) -> tuple[float, float]:
    """Root of ``fun`` (returning value, slope) inside a sign-change bracket."""
    fa = fun(a)[0]
    fb = fun(b)[0]
    if fa == 0.0:
        return a, 0.0
    if fb == 0.0:
        return b, 0.0
    if fa * fb > 0:
        raise ConvergenceError(f"no sign change on [{a}, {b}]")
    x = 0.5 * (a + b) if x0 is None or not a < x0 < b else x0
    step = b - a
    for _ in range(NEWTON_MAXIT):
        f, df = fun(x)
        if f == 0.0:
            return x, 0.0
        if (f > 0) == (fa > 0):
            a, fa = x, f
        else:
            b = x
        xn = x - f / df if df != 0.0 else 0.5 * (a + b)
        if not a < xn < b:
            xn = 0.5 * (a + b)
        step = abs(xn - x)
        x = xn
        if step <= 4e-16 * max(1.0, abs(x)) or b - a <= 4e-16 * max(1.0, abs(x)):
            return x, step
    raise ConvergenceError(f"safeguarded Newton stalled on [{a}, {b}] (last step {step:.3e})")


def _j_and_prime(m: int):
    def fun(x: float) -> tuple[float, float]:
        jm, jn, jp = _triplet(m, x)
        return jn, 0.5 * (jm - jp)

    return fun


def _prime_and_second(m: int):
    def fun(x: float) -> tuple[float, float]:
        jm, jn, jp = _triplet(m, x)
        d = 0.5 * (jm - jp)
        return d, -d / x - (1.0 - (m * m) / (x * x)) * jn

    return fun


def _mcmahon(m: int, p: int) -> float:
    mu = 4.0 * m * m
    beta = (p + 0.5 * m - 0.25) * math.pi
    e = 8.0 * beta
    return beta - (mu - 1) / e - 4 * (mu - 1) * (7 * mu - 31) / (3 * e**3)


def _check_zero_args(m: int, p: int) -> None:
    if int(m) != m or not 0 <= m <= MAX_ORDER:
        raise DomainError(f"order must be in [0, {MAX_ORDER}], got {m}")
    if int(p) != p or not 1 <= p <= MAX_ZERO_INDEX:
        raise DomainError(f"zero index must be in [1, {MAX_ZERO_INDEX}], got {p}")


def _zero(m: int, p: int) -> float:
    cached = _table.get(m, p, "zero")
    if cached is not None:
        return cached
    fun = _j_and_prime(m)
    if m == 0:
        guess = _mcmahon(0, p)
        a, b = guess - 0.3, guess + 0.3
        while fun(a)[0] * fun(b)[0] > 0:
            a, b = a - 0.1, b + 0.1
            if b - a > 2.0:
                raise ConvergenceError(f"could not bracket j_0,{p}")
    else:
        # interlacing: j_{m-1,p} < j_{m,p} < j_{m-1,p+1}
        a, b = _zero(m - 1, p), _zero(m - 1, p + 1)
        guess = None
    x, step = _safeguarded_newton(fun, a, b, guess)
    value, slope = fun(x)
    if abs(value) > ZERO_TOL * max(abs(slope), 1e-300):
        raise ConvergenceError(f"j_{m},{p}: residual {value:.3e} above tolerance")
    return _table.put(m, p, x, "zero", precision=max(step, abs(value / slope)))


def bessel_zero(m: int, p: int) -> float:
    """p-th positive zero j_{m,p} of J_m (cached)."""
    _check_zero_args(m, p)
    return _zero(int(m), int(p))


def _prime_zero(m: int, p: int) -> float:
    cached = _table.get(m, p, "prime_zero")
    if cached is not None:
        return cached
    if m == 0:
        # J_0' = -J_1; x = 0 is not counted
        return _table.put(0, p, _zero(1, p), "prime_zero")
    fun = _prime_and_second(m)
    a = float(m) if p == 1 else _zero(m, p - 1)
    b = _zero(m, p)
    x, step = _safeguarded_newton(fun, a, b)
    value, slope = fun(x)
    if abs(value) > ZERO_TOL * max(abs(slope), 1e-300):
        raise ConvergenceError(f"j'_{m},{p}: residual {value:.3e} above tolerance")
    return _table.put(m, p, x, "prime_zero", precision=step)


def bessel_prime_zero(m: int, p: int) -> float:
    """p-th positive zero j'_{m,p} of J_m' (cached).

    For m = 0 the root at x = 0 is skipped, so ``j'_{0,p} = j_{1,p}``.
    """
    _check_zero_args(m, p)
    return _prime_zero(int(m), int(p))


def landau_cutoff(j: float, limit: int = 4 * MAX_ORDER) -> int:
    """Smallest order n with j <= j'_{n,1}; then F_q(j) >= 0 for all q >= n."""
    for n in range(1, limit + 1):
        if j <= _prime_zero(n, 1):
            return n
    raise ConvergenceError(f"no derivative zero above {j} up to order {limit}")
