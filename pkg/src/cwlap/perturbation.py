"""Second-order eigenvalue expansions about the unit disk.

Every log-derivative ratio below is ``F_n(x) = x J_n'(x) / J_n(x)`` taken at a
disk frequency ``j = j_{m,p}``.  When the order is ``m +- 1, 3, 5`` the rational
closed form in ``j^2`` is used, otherwise the ratio is evaluated directly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import bessel
from .disk_spectrum import Mode, SpectrumTable, mode_of_index
from .errors import DomainError, InvalidBodyError, MatchError
from .width_body import DeformationCoeffs, epsilon_max


def ratio_at_zero(order: int, m: int, j: float, closed_forms: bool = True) -> float:
    """F_order(j) where j is a zero of J_m; negative orders fold to |order|."""
    order = abs(order)
    if closed_forms:
        kind = bessel.closed_form_kind(order, m)
        if kind is not None:
            return bessel.ratio_closed_form(kind, m, j)
    return bessel.log_derivative_at_zero(order, m, j)


def c_coeff(k: int, m: int, j: float, closed_forms: bool = True) -> float:
    """C_{k,m}(j) = 1 + k^2 + F_{k+m}(j) + F_{|k-m|}(j)."""
    if k % 2 == 0 or k <= 0:
        raise DomainError(f"k must be a positive odd integer, got {k}")
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    return 1.0 + k * k + ratio_at_zero(k + m, m, j, closed_forms) + ratio_at_zero(k - m, m, j, closed_forms)


def simple_weight(l: int, j: float, closed_forms: bool = True) -> float:
    """Weight of |a_l|^2 in the radial-mode correction: 1/2 + l^2/2 + F_l(j)."""
    return 0.5 + 0.5 * l * l + ratio_at_zero(l, 0, j, closed_forms)


def omega2_simple(p: int, coeffs: DeformationCoeffs, closed_forms: bool = True) -> float:
    """omega_2 for the simple eigenvalue j_{0,p}^2; the b_n do not enter."""
    j = bessel.bessel_zero(0, p)
    total = sum(simple_weight(l, j, closed_forms) * abs(a) ** 2 for l, a in coeffs.a.items())
    return 2.0 * j * total


def upsilon(m: int, j: float, coeffs: DeformationCoeffs, closed_forms: bool = True) -> complex:
    """Off-diagonal sum over integers l with |l| != m of
    (1/2 - (m^2 - l^2)/2 + F_|l|(j)) a_{m+l} a_{m-l}."""
    n_max = coeffs.truncation
    total = 0j
    for l in range(-(n_max + m), n_max + m + 1):
        if abs(l) == m:
            continue
        prod = coeffs.a_full(m + l) * coeffs.a_full(m - l)
        if prod == 0:
            continue
        weight = 0.5 - 0.5 * (m * m - l * l) + ratio_at_zero(l, m, j, closed_forms)
        total += weight * prod
    return total


def gamma_and_upsilon(m: int, p: int, coeffs: DeformationCoeffs, closed_forms: bool = True) -> tuple[float, float]:
    """(Gamma, |Upsilon|) for the double eigenvalue j_{m,p}^2, m >= 1."""
    if m < 1:
        raise DomainError("gamma_and_upsilon needs m >= 1; use omega2_simple for m = 0")
    j = bessel.bessel_zero(m, p)
    gamma = sum(c_coeff(k, m, j, closed_forms) * abs(a) ** 2 for k, a in coeffs.a.items())
    return gamma, abs(upsilon(m, j, coeffs, closed_forms))


@dataclass(frozen=True)
class ExpansionPrediction:
    kappa: int
    mode: Mode
    branch: str
    omega0: float
    gamma: float
    upsilon_mag: float
    omega2_branches: tuple[float, ...]
    eps: float
    omega1: float = 0.0

    @property
    def omega2(self) -> float:
        if self.branch == "upper":
            return self.omega2_branches[1]
        return self.omega2_branches[0]

    def lambda_at(self, eps: float) -> float:
        """omega0^2 + 2 eps^2 omega0 omega2 (omega1 vanishes)."""
        return self.omega0**2 + 2.0 * eps * eps * self.omega0 * self.omega2

    def branch_lambdas(self, eps: float) -> tuple[float, ...]:
        return tuple(self.omega0**2 + 2.0 * eps * eps * self.omega0 * w for w in self.omega2_branches)

    @property
    def lambda_pred(self) -> float:
        return self.lambda_at(self.eps)

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "m": self.mode.m,
            "p": self.mode.p,
            "j": self.omega0,
            "branch": self.branch,
            "gamma": self.gamma,
            "upsilon_mag": self.upsilon_mag,
            "omega2": self.omega2,
            "lambda_pred": self.lambda_pred,
            "eps": self.eps,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def predict(
    kappa: int,
    coeffs: DeformationCoeffs,
    eps: float,
    table: SpectrumTable | None = None,
    branch: str | None = None,
    closed_forms: bool = True,
) -> ExpansionPrediction:
    """Second-order prediction for lambda_kappa of the deformed body.

    For a double mode the minus branch goes to the smaller index of the pair.
    """
    if not eps >= 0 or not math.isfinite(eps):
        raise InvalidBodyError(f"eps must be finite and >= 0, got {eps}")
    emax = epsilon_max(coeffs)
    if eps > 0 and not eps < emax:
        raise InvalidBodyError(f"eps {eps} is not below epsilon_max {emax:.6g}")
    mode, tag = mode_of_index(kappa, table)
    if branch is not None and branch != tag:
        raise MatchError(f"kappa {kappa} carries branch {tag!r}, not {branch!r}")
    j = mode.zero
    if mode.m == 0:
        gamma = omega2_simple(mode.p, coeffs, closed_forms) / j
        ups = 0.0
        branches = (j * gamma,)
    else:
        gamma, ups = gamma_and_upsilon(mode.m, mode.p, coeffs, closed_forms)
        branches = (j * (gamma - ups), j * (gamma + ups))
    return ExpansionPrediction(kappa, mode, tag, j, gamma, ups, branches, float(eps))
