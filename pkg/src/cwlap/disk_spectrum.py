"""Dirichlet spectrum of the unit disk, flattened to eigenvalue indices."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import lru_cache

from . import bessel
from .errors import DomainError, SpectrumTieError

MAX_COUNT = 512
TIE_TOL = 1e-9


@dataclass(frozen=True, order=True)
class Mode:
    m: int
    p: int
    zero: float
    multiplicity: int

    @classmethod
    def of(cls, m: int, p: int) -> "Mode":
        return cls(m, p, bessel.bessel_zero(m, p), 1 if m == 0 else 2)

    @property
    def eigenvalue(self) -> float:
        return self.zero * self.zero


@dataclass(frozen=True)
class SpectrumEntry:
    kappa: int
    mode: Mode
    lam: float
    branch: str  # "simple", "lower" or "upper"


@dataclass(frozen=True)
class SpectrumTable:
    entries: tuple[SpectrumEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, kappa: int) -> SpectrumEntry:
        """Entry at the 1-based index ``kappa``."""
        if not 1 <= kappa <= len(self.entries):
            raise IndexError(f"kappa {kappa} outside 1..{len(self.entries)}")
        return self.entries[kappa - 1]

    def rows(self) -> list[dict]:
        return [
            {
                "kappa": e.kappa,
                "m": e.mode.m,
                "p": e.mode.p,
                "j": e.mode.zero,
                "lambda": e.lam,
                "branch": e.branch,
            }
            for e in self.entries
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, ["kappa", "m", "p", "j", "lambda", "branch"], lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow({**row, "j": repr(row["j"]), "lambda": repr(row["lambda"])})
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.rows(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SpectrumTable":
        entries = []
        for row in json.loads(text):
            mode = Mode(row["m"], row["p"], row["j"], 1 if row["m"] == 0 else 2)
            entries.append(SpectrumEntry(row["kappa"], mode, row["lambda"], row["branch"]))
        return cls(tuple(entries))


def _modes_below(threshold: float) -> list[Mode]:
    modes = []
    m = 0
    while bessel.bessel_zero(m, 1) <= threshold:
        p = 1
        while bessel.bessel_zero(m, p) <= threshold:
            modes.append(Mode.of(m, p))
            p += 1
        m += 1
    return modes


@lru_cache(maxsize=None)
def _spectrum(count: int) -> SpectrumTable:
    big_p = 1
    while True:
        # every zero of every order at or below this threshold is collected
        threshold = bessel.bessel_zero(0, big_p) + 1.0
        modes = _modes_below(threshold)
        if sum(md.multiplicity for md in modes) >= count:
            break
        big_p += 1
    modes.sort(key=lambda md: md.zero)
    for a, b in zip(modes, modes[1:]):
        if b.zero - a.zero < TIE_TOL:
            raise SpectrumTieError(f"j_{a.m},{a.p} and j_{b.m},{b.p} agree to {b.zero - a.zero:.2e}")
    entries: list[SpectrumEntry] = []
    for md in modes:
        branches = ("simple",) if md.multiplicity == 1 else ("lower", "upper")
        for branch in branches:
            if len(entries) == count:
                break
            entries.append(SpectrumEntry(len(entries) + 1, md, md.eigenvalue, branch))
    return SpectrumTable(tuple(entries))


def enumerate_spectrum(count: int) -> SpectrumTable:
    """First ``count`` disk eigenvalues with multiplicity, ascending.

    A double mode cut at the end of the list keeps only its lower index.
    """
    if int(count) != count or not 1 <= count <= MAX_COUNT:
        raise DomainError(f"count must be in [1, {MAX_COUNT}], got {count}")
    return _spectrum(int(count))


def mode_of_index(kappa: int, table: SpectrumTable | None = None) -> tuple[Mode, str]:
    """Mode and branch tag (``simple``, ``lower`` or ``upper``) of index kappa."""
    if table is None:
        if int(kappa) != kappa or not 1 <= kappa <= MAX_COUNT:
            raise IndexError(f"kappa {kappa} outside 1..{MAX_COUNT}")
        # one extra slot so the partner of a trailing double mode is present
        table = enumerate_spectrum(min(MAX_COUNT, int(kappa) + 1))
    entry = table[kappa]
    return entry.mode, entry.branch


def indices_of_mode(m: int, p: int, table: SpectrumTable | None = None) -> list[int]:
    if table is None:
        table = enumerate_spectrum(MAX_COUNT)
    found = [e.kappa for e in table.entries if e.mode.m == m and e.mode.p == p]
    if not found:
        raise IndexError(f"mode ({m},{p}) not in the enumerated range")
    return found
