"""Signed certificates for the C_{k,m} coefficients and the classification of
disk eigenvalues as local minimisers among constant-width bodies.

A certificate carries a point value and an enclosure ``[lo, hi]`` built from an
outward error budget: a relative evaluation error, the propagated error of the
Bessel zero, and the disagreement between the closed-form and the direct
log-derivative evaluation.  The sign is only declared when the enclosure clears
``MARGIN``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from . import bessel
from .disk_spectrum import enumerate_spectrum
from .errors import ClassificationError, DomainError, PoleError, SuiteViolation
from .perturbation import c_coeff, gamma_and_upsilon
from .width_body import DeformationCoeffs

MARGIN = 1e-6
EVAL_REL_ERR = 1e-8
ZERO_ERR = 1e-12

NEGATIVE = "Negative"
ZERO = "Zero"
POSITIVE = "Positive"
INDETERMINATE = "Indeterminate"

CLOSED_FORM = "ClosedForm"
LANDAU = "LandauBound"
NUMERIC = "Numeric"
IDENTITY = "Identity"

LOCAL_MIN = "LocalMin"
NOT_LOCAL_MIN = "NotLocalMin"
OPEN = "Open"

# double modes whose coefficients are all non-negative
LEMMA6_ZEROS = ((1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (5, 2), (6, 2), (7, 1))
# left open although the same positivity question could be asked
OPEN_MODES = ((7, 2),)


@dataclass(frozen=True)
class SignCertificate:
    kind: str  # "C", "C>=", "m3_plus", "m3_minus"
    k: int
    m: int
    p: int
    sign: str
    lo: float
    hi: float
    method: str
    value: float
    claim: str | None = None
    note: str = ""

    @property
    def quantity(self) -> str:
        if self.kind == "C":
            return f"C[{self.k},{self.m}](j_{self.m},{self.p})"
        if self.kind == "C>=":
            return f"C[k>={self.k},{self.m}](j_{self.m},{self.p})"
        return f"{self.kind}(j_{self.m},{self.p})"

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "kind": self.kind,
            "k": self.k,
            "m": self.m,
            "p": self.p,
            "claim": self.claim,
            "sign": self.sign,
            "lo": self.lo,
            "hi": self.hi,
            "value": self.value,
            "method": self.method,
            "note": self.note,
        }


def sign_of(lo: float, hi: float) -> str:
    if hi < -MARGIN:
        return NEGATIVE
    if lo > MARGIN:
        return POSITIVE
    return INDETERMINATE


def _generic_slope(k: int, m: int, j: float) -> float:
    # plain log-derivatives: the at-zero route would polish j +- h back onto the zero
    h = 1e-6 * j

    def c_at(x: float) -> float:
        return 1.0 + k * k + bessel.log_derivative(k + m, x) + bessel.log_derivative(k - m, x)

    return (c_at(j + h) - c_at(j - h)) / (2 * h)


def certify_c_sign(k: int, m: int, p: int, claim: str | None = None) -> SignCertificate:
    """Certificate for the sign of C_{k,m}(j_{m,p})."""
    if k % 2 == 0 or k < 1:
        raise DomainError(f"k must be a positive odd integer, got {k}")
    if m < 0 or p < 1:
        raise DomainError(f"invalid mode ({m},{p})")
    j = bessel.bessel_zero(m, p)
    zero_err = max(ZERO_ERR, bessel.zero_table().precision)
    try:
        closed = c_coeff(k, m, j, closed_forms=True)
        direct = c_coeff(k, m, j, closed_forms=False)
        slope = _generic_slope(k, m, j)
    except PoleError as exc:
        return SignCertificate("C", k, m, p, INDETERMINATE, -math.inf, math.inf, NUMERIC, math.nan, claim, str(exc))
    scale = max(1.0, 1.0 + k * k, abs(closed))
    err = EVAL_REL_ERR * scale + abs(slope) * zero_err + abs(closed - direct)
    both_closed = all(bessel.closed_form_kind(n, m) is not None for n in (k + m, k - m))
    if k == 1:
        # 2 + F_{m+1} + F_{m-1} = 2 - (m+1) + (m-1) at every zero of J_m
        return SignCertificate("C", k, m, p, ZERO, closed - err, closed + err, IDENTITY, closed, claim)
    lo, hi = closed - err, closed + err
    method = CLOSED_FORM if both_closed else NUMERIC
    return SignCertificate("C", k, m, p, sign_of(lo, hi), lo, hi, method, closed, claim)


def landau_certificate(m: int, p: int) -> SignCertificate:
    """C_{k,m}(j) >= 1 + k^2 for every odd k >= m + n*, with n* the Landau cutoff.

    For such k both orders k +- m are at least n*, and j <= j'_{n*,1} <= j'_{q,1}
    puts j in the range where every F_q(j) is non-negative.
    """
    j = bessel.bessel_zero(m, p)
    n_star = bessel.landau_cutoff(j)
    k0 = m + n_star
    k0 += 1 - k0 % 2
    gap = bessel.bessel_prime_zero(n_star, 1) - j
    note = f"n*={n_star}, j'_{n_star},1 - j = {gap:.6g}"
    sign = POSITIVE if gap > ZERO_ERR else INDETERMINATE
    bound = 1.0 + k0 * k0
    return SignCertificate("C>=", k0, m, p, sign, bound, math.inf, LANDAU, bound, None, note)


def positivity_suite(m: int, p: int) -> list[SignCertificate]:
    """Explicit certificates for odd k below the Landau cutoff plus the tail bound."""
    tail = landau_certificate(m, p)
    certs = [certify_c_sign(k, m, p) for k in range(1, tail.k, 2) if k != 2 * m]
    certs.append(tail)
    return certs


def _require(certs: list[SignCertificate], allowed: tuple[str, ...], label: str) -> list[SignCertificate]:
    bad = [c for c in certs if c.sign not in allowed]
    if bad:
        detail = "; ".join(f"{c.quantity}: {c.sign} [{c.lo:.6g}, {c.hi:.6g}] {c.note}" for c in bad)
        raise SuiteViolation(f"{label}: {len(bad)} certificate(s) violate the claim: {detail}", bad)
    return certs


def lemma6_suite(strict: bool = True) -> list[SignCertificate]:
    """Non-negativity of every C_{k,m} at the eight distinguished zeros."""
    certs = [c for m, p in LEMMA6_ZEROS for c in positivity_suite(m, p)]
    if strict:
        _require(certs, (POSITIVE, ZERO), "lemma6 suite")
    return certs


def _i_set(m: int, j: float) -> bool:
    return math.sqrt(m * (m + 2)) <= j < 2 * math.sqrt((m - 1) * (m - 2)) or j >= 2 * math.sqrt((m + 1) * (m + 2))


def _v_set(m: int, j: float) -> bool:
    return 2 * math.sqrt((m - 1) * (m - 2)) <= j <= 2 * math.sqrt((m + 1) * (m + 2))


def m3_branch_coefficients(p: int) -> tuple[float, float]:
    """(Gamma + |Upsilon|, Gamma - |Upsilon|) at j_{3,p} for the single mode a_3 = 1."""
    if p < 2:
        raise DomainError("the m = 3 branch formulas need p >= 2")
    j2 = bessel.bessel_zero(3, p) ** 2
    for root in (8.0, 80.0):
        if abs(j2 - root) < 1e-9 * root:
            raise PoleError(f"j_3,{p}^2 sits on the pole {root}")
    plus = -576.0 * j2 / ((8.0 - j2) * (80.0 - j2))
    minus = 640.0 / (80.0 - j2)
    return plus, minus


def m3_certificates(p: int) -> list[SignCertificate]:
    plus, minus = m3_branch_coefficients(p)
    gamma, ups = gamma_and_upsilon(3, p, DeformationCoeffs({3: 1.0}), closed_forms=False)
    j = bessel.bessel_zero(3, p)
    certs = []
    for kind, value, direct in (("m3_plus", plus, gamma + ups), ("m3_minus", minus, gamma - ups)):
        err = EVAL_REL_ERR * max(1.0, abs(value)) + abs(value - direct) + 1e3 * ZERO_ERR * j
        lo, hi = value - err, value + err
        certs.append(SignCertificate(kind, 3, 3, p, sign_of(lo, hi), lo, hi, CLOSED_FORM, value, "m3"))
    return certs


# (k, m, first p, last p or None for p_cap, claim id)
_SPECIFIC = (
    (3, 1, 2, None, "C31"),
    (3, 2, 2, None, "C32"),
    (3, 3, 2, None, "C33"),
    (5, 3, 5, None, "C53"),
    (3, 4, 2, None, "C34"),
    (3, 5, 3, None, "C35"),
    (5, 6, 1, 1, "C56"),
    (3, 6, 3, None, "C36"),
    (3, 7, 3, None, "C37"),
    (3, 8, 3, None, "C38"),
    (3, 8, 1, 1, "C38-1"),
    (5, 8, 2, 2, "C58"),
)


def appendix_c_suite(m_cap: int = 20, p_cap: int = 10, strict: bool = True) -> list[SignCertificate]:
    """Every claimed negative coefficient within the caps, as certificates."""
    if not 4 <= m_cap <= 40 or not 1 <= p_cap <= 20:
        raise DomainError("need 4 <= m_cap <= 40 and 1 <= p_cap <= 20")
    certs: list[SignCertificate] = []
    for m in range(4, m_cap + 1):
        for p in range(1, p_cap + 1):
            j = bessel.bessel_zero(m, p)
            if _i_set(m, j):
                certs.append(certify_c_sign(3, m, p, claim="C3m-I"))
            if m >= 9 and _v_set(m, j):
                certs.append(certify_c_sign(5, m, p, claim="C5m-V"))
    for k, m, p0, p1, claim in _SPECIFIC:
        if m > m_cap:
            continue
        for p in range(p0, (p1 or p_cap) + 1):
            certs.append(certify_c_sign(k, m, p, claim=claim))
    for p in (2, 3, 4):
        certs.extend(m3_certificates(p))
    if strict:
        _require(certs, (NEGATIVE,), "appendix-c suite")
    return certs


@dataclass(frozen=True)
class Classification:
    kappa: int
    m: int
    p: int
    branch: str
    verdict: str
    witness: str
    certificates: tuple[SignCertificate, ...] = field(default=(), repr=False)
    witness_k: int | None = None

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "m": self.m,
            "p": self.p,
            "branch": self.branch,
            "verdict": self.verdict,
            "witness": self.witness,
        }


def _negative_witness(m: int, p: int, k_max: int = 15) -> SignCertificate | None:
    """First odd k != m with C_{k,m}(j_{m,p}) certified negative (single mode, Upsilon = 0)."""
    for k in range(3, k_max + 1, 2):
        if k == m:
            continue
        cert = certify_c_sign(k, m, p)
        if cert.sign == NEGATIVE:
            return cert
    return None


def classify_mode(kappa: int, m: int, p: int, branch: str) -> Classification:
    if m == 0 and p == 1:
        certs = _require(positivity_suite(0, 1), (POSITIVE, ZERO), "kappa=1")
        return Classification(kappa, m, p, branch, LOCAL_MIN, "C_{k,0}(j_{0,1}) >= 0 for all odd k", tuple(certs))
    if m == 0:
        cert = certify_c_sign(3, 0, p)
        if cert.sign != NEGATIVE:
            raise ClassificationError(f"kappa={kappa}: C_3,0(j_0,{p}) not certified negative")
        witness = f"C_{{3,0}}(j_{{0,{p}}}) = 32/(8-j^2) = {cert.value:.6g} < 0, single-mode a_3"
        return Classification(kappa, m, p, branch, NOT_LOCAL_MIN, witness, (cert,), 3)
    if (m, p) in OPEN_MODES:
        return Classification(kappa, m, p, branch, OPEN, f"({m},{p}) left open; branch signs not decided")
    if (m, p) in LEMMA6_ZEROS:
        certs = _require(positivity_suite(m, p), (POSITIVE, ZERO), f"kappa={kappa}")
        if branch == "upper":
            return Classification(
                kappa, m, p, branch, LOCAL_MIN, "all C_{k,m} >= 0, so Gamma + |Upsilon| >= 0", tuple(certs)
            )
        return Classification(kappa, m, p, branch, OPEN, "all C_{k,m} >= 0 but sign of Gamma - |Upsilon| unknown")
    if m == 3 and p in (2, 3, 4):
        certs = m3_certificates(p)
        if any(c.sign != NEGATIVE for c in certs):
            raise ClassificationError(f"kappa={kappa}: m = 3 branch coefficients not both negative")
        witness = (
            f"single-mode a_3 at m=3: Gamma+|Upsilon| = {certs[0].value:.6g}, "
            f"Gamma-|Upsilon| = {certs[1].value:.6g}, both < 0"
        )
        return Classification(kappa, m, p, branch, NOT_LOCAL_MIN, witness, tuple(certs), 3)
    cert = _negative_witness(m, p)
    if cert is None:
        raise ClassificationError(f"kappa={kappa}: no certified negative C_{{k,{m}}}(j_{{{m},{p}}}) for k != m")
    witness = f"C_{{{cert.k},{m}}}(j_{{{m},{p}}}) = {cert.value:.6g} < 0, single-mode a_{cert.k}, Upsilon=0"
    return Classification(kappa, m, p, branch, NOT_LOCAL_MIN, witness, (cert,), cert.k)


def classify(kappa_max: int = 50) -> list[Classification]:
    if not 1 <= kappa_max <= 50:
        raise DomainError("kappa_max must lie in 1..50")
    table = enumerate_spectrum(kappa_max + 1)
    out = []
    for kappa in range(1, kappa_max + 1):
        entry = table[kappa]
        out.append(classify_mode(kappa, entry.mode.m, entry.mode.p, entry.branch))
    return out


def certificates_csv(certs: list[SignCertificate]) -> str:
    buf = io.StringIO()
    fields = ["quantity", "claim", "sign", "lo", "hi", "value", "method", "note"]
    writer = csv.DictWriter(buf, fields, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for c in certs:
        row = c.to_dict()
        writer.writerow({**row, "lo": repr(row["lo"]), "hi": repr(row["hi"]), "value": repr(row["value"])})
    return buf.getvalue()


def certificates_json(certs: list[SignCertificate]) -> str:
    return json.dumps([c.to_dict() for c in certs], indent=2)


def classification_csv(rows: list[Classification]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, ["kappa", "m", "p", "branch", "verdict", "witness"], lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r.to_dict())
    return buf.getvalue()
