"""Published four-decimal tables of Bessel zeros and of the disk spectrum.

Transcribed verbatim, known typos included; the code never reads these as
truth.  ``compare_*`` helpers report where they disagree with computation.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import bessel
from .disk_spectrum import enumerate_spectrum

# row m, column p-1: j_{m,p}
ZEROS: dict[int, tuple[float, ...]] = {
    0: (2.4048, 5.5201, 8.6537, 11.7915, 14.9309, 18.0711, 21.2116, 24.3525, 27.4935),
    1: (3.8317, 7.0156, 10.1735, 13.3237, 16.4706, 19.6159, 22.7601, 25.9037, 29.0468),
    2: (5.1356, 8.4172, 11.6198, 14.796, 21.117, 27.4206, 30.5692, 33.7165, 40.0084),
    3: (6.3802, 9.761, 13.0152, 16.2235, 19.4094, 22.5827, 25.7482, 28.9084, 32.0649),
    4: (7.5883, 11.0647, 14.3725, 17.616, 20.8269, 24.019, 27.1991, 30.371, 33.5371),
    5: (8.7715, 12.3386, 15.7002, 18.9801, 22.2178, 25.4303, 28.6266, 31.8117, 34.9888),
    6: (9.9361, 13.5893, 17.0038, 20.3208, 23.5861, 26.8202, 30.0337, 33.233, 36.422),
    7: (11.0864, 14.8213, 18.2876, 21.6415, 24.9349, 28.1912, 31.4228, 34.6371, 37.8387),
    8: (12.2251, 16.0378, 19.5545, 22.9452, 26.2668, 29.5457, 32.7958, 36.0256, 39.2404),
}

# row m, column p-1: j'_{m,p}; row 0 starts with the trivial root x = 0
PRIME_ZEROS: dict[int, tuple[float, ...]] = {
    0: (0.0, 3.8317, 7.0156, 10.1735, 13.3237, 16.4706, 19.6159, 22.7601),
    1: (1.8411, 5.3314, 8.5363, 11.706, 14.8635, 18.0155, 21.1643, 24.3113),
    2: (3.0542, 6.7061, 9.9694, 13.1703, 16.3475, 19.5129, 22.6715, 25.826),
    3: (4.2011, 8.0152, 11.3459, 14.5858, 17.7887, 20.9724, 24.1448, 27.31),
    4: (5.3175, 9.2823, 12.6819, 15.9641, 19.196, 22.401, 21.6415, 28.7678),
    5: (6.4156, 10.5198, 13.9871, 17.3128, 20.5755, 23.8035, 25.5897, 30.2028),
    6: (7.5012, 11.7349, 15.2681, 18.6374, 21.9317, 25.1839, 27.0103, 31.6178),
    7: (8.5778, 12.9323, 16.5293, 19.9418, 23.268, 26.545, 29.7907, 33.0151),
    8: (9.6474, 14.1155, 17.774, 21.229, 24.5871, 27.8892, 31.1553, 34.3966),
    9: (10.7114, 15.2867, 19.0045, 22.5013, 25.8912, 29.2185, 32.5052, 35.7637),
    10: (11.7709, 16.4479, 20.223, 23.7607, 27.182, 30.5345, 33.842, 37.118),
    11: (12.8265, 17.0603, 21.4309, 25.0085, 28.4609, 31.8384, 35.1667, 38.4604),
    12: (13.8788, 18.7451, 22.6293, 26.246, 29.729, 33.1314, 36.4805, 39.7919),
    13: (14.9284, 19.8832, 23.8194, 27.4743, 30.9874, 34.4145, 37.7844, 41.1135),
}

# (first index, multiplicity, m, p)
SPECTRUM: tuple[tuple[int, int, int, int], ...] = (
    (1, 1, 0, 1),
    (2, 2, 1, 1),
    (4, 2, 2, 1),
    (6, 1, 0, 2),
    (7, 2, 3, 1),
    (9, 2, 1, 2),
    (11, 2, 4, 1),
    (13, 2, 2, 2),
    (15, 1, 0, 3),
    (16, 2, 5, 1),
    (18, 2, 3, 2),
    (20, 2, 6, 1),
    (22, 2, 1, 3),
    (24, 2, 4, 2),
    (26, 2, 7, 1),
    (28, 2, 2, 3),
    (30, 1, 0, 4),
    (31, 2, 8, 1),
    (33, 2, 5, 2),
    (35, 2, 3, 3),
    (37, 2, 1, 4),
    (39, 2, 9, 1),
    (41, 2, 6, 2),
    (43, 2, 4, 3),
    (45, 2, 10, 1),
    (47, 2, 2, 4),
    (49, 2, 7, 2),
    (51, 1, 0, 5),
    (52, 2, 11, 1),
    (54, 2, 5, 3),
    (56, 2, 8, 2),
    (58, 2, 3, 4),
    (60, 2, 1, 5),
    (62, 2, 1, 5),
    (64, 2, 12, 1),
    (66, 2, 6, 3),
    (68, 2, 9, 2),
    (70, 2, 4, 4),
    (72, 2, 13, 1),
    (74, 2, 2, 5),
    (76, 1, 0, 6),
    (77, 2, 7, 3),
    (79, 2, 10, 2),
    (81, 2, 14, 1),
    (83, 2, 5, 4),
    (85, 2, 3, 5),
    (87, 2, 8, 3),
    (89, 2, 1, 6),
    (91, 2, 11, 2),
    (93, 2, 15, 1),
    (95, 2, 6, 4),
    (97, 2, 12, 2),
    (99, 2, 9, 3),
    (101, 2, 4, 5),
    (103, 2, 16, 1),
)


@dataclass(frozen=True)
class Mismatch:
    table: str
    row: int
    col: int
    listed: float
    computed: float
    interlacing_ok: bool

    def __str__(self) -> str:
        flag = "" if self.interlacing_ok else " (listed value breaks interlacing)"
        return f"{self.table}[{self.row},{self.col}]: listed {self.listed}, computed {self.computed:.4f}{flag}"


def _interlaced(table: dict[int, tuple[float, ...]], m: int, i: int) -> bool:
    """Does entry (m, i) sit strictly between its neighbours in the p and m directions?"""
    row = table[m]
    v = row[i]
    ok = (i == 0 or row[i - 1] < v) and (i == len(row) - 1 or v < row[i + 1])
    if m - 1 in table and i < len(table[m - 1]):
        ok &= table[m - 1][i] < v
    if m + 1 in table and i < len(table[m + 1]):
        ok &= v < table[m + 1][i]
    return ok


def compare_zeros(tol: float = 1e-4) -> list[Mismatch]:
    """Entries of both zero tables that differ from computation by more than ``tol``.

    The derivative table truncates rather than rounds, hence the default of one
    unit in the last place.
    """
    out = []
    for m, row in ZEROS.items():
        for i, listed in enumerate(row):
            value = bessel.bessel_zero(m, i + 1)
            if abs(value - listed) > tol:
                out.append(Mismatch("zeros", m, i + 1, listed, value, _interlaced(ZEROS, m, i)))
    for m, row in PRIME_ZEROS.items():
        for i, listed in enumerate(row):
            if m == 0 and i == 0:
                continue
            # row 0 counts x = 0 as the first root
            value = bessel.bessel_prime_zero(m, i if m == 0 else i + 1)
            if abs(value - listed) > tol:
                out.append(Mismatch("prime_zeros", m, i + 1, listed, value, _interlaced(PRIME_ZEROS, m, i)))
    return out


def compare_spectrum() -> list[str]:
    """Flat indices whose listed mode differs from the computed enumeration."""
    last = max(first + mult - 1 for first, mult, _, _ in SPECTRUM)
    table = enumerate_spectrum(last + 1)
    issues = []
    for first, mult, m, p in SPECTRUM:
        for kappa in range(first, first + mult):
            mode = table[kappa].mode
            if (mode.m, mode.p) != (m, p):
                issues.append(f"kappa={kappa}: listed ({m},{p}), computed ({mode.m},{mode.p})")
    return issues
