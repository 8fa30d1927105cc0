"""Hand-worked M=5, N=3 expansion used as an independent check.

The amplitude tables below are written out term by term for the four
successive SCS applications on ``|00111>``.  Angles are evaluated by brute
force enumeration, without touching :mod:`agpprep.esp`.
"""
from itertools import combinations
from math import prod, sqrt

M, N = 5, 3

# (ket, factors); ("t", p, q) is theta_pq, ("tb", p, q) its complement
AFTER_SCS = {
    "SCS[5,3]": [
        ("00111", [("t", 5, 3)]),
        ("01110", [("tb", 5, 3)]),
    ],
    "SCS[4,3]": [
        ("00111", [("t", 4, 2), ("t", 5, 3)]),
        ("01101", [("tb", 4, 2), ("t", 5, 3)]),
        ("01110", [("t", 4, 3), ("tb", 5, 3)]),
        ("11100", [("tb", 4, 3), ("tb", 5, 3)]),
    ],
    "SCS[3,2]": [
        ("00111", [("t", 3, 1), ("t", 4, 2), ("t", 5, 3)]),
        ("01011", [("tb", 3, 1), ("t", 4, 2), ("t", 5, 3)]),
        ("01101", [("t", 3, 2), ("tb", 4, 2), ("t", 5, 3)]),
        ("11001", [("tb", 3, 2), ("tb", 4, 2), ("t", 5, 3)]),
        ("01110", [("t", 3, 2), ("t", 4, 3), ("tb", 5, 3)]),
        ("11010", [("tb", 3, 2), ("t", 4, 3), ("tb", 5, 3)]),
        ("11100", [("tb", 4, 3), ("tb", 5, 3)]),
    ],
    "SCS[2,1]": [
        ("00111", [("t", 3, 1), ("t", 4, 2), ("t", 5, 3)]),
        ("01011", [("t", 2, 1), ("tb", 3, 1), ("t", 4, 2), ("t", 5, 3)]),
        ("10011", [("tb", 2, 1), ("tb", 3, 1), ("t", 4, 2), ("t", 5, 3)]),
        ("01101", [("t", 2, 1), ("t", 3, 2), ("tb", 4, 2), ("t", 5, 3)]),
        ("10101", [("tb", 2, 1), ("t", 3, 2), ("tb", 4, 2), ("t", 5, 3)]),
        ("11001", [("tb", 3, 2), ("tb", 4, 2), ("t", 5, 3)]),
        ("01110", [("t", 2, 1), ("t", 3, 2), ("t", 4, 3), ("tb", 5, 3)]),
        ("10110", [("tb", 2, 1), ("t", 3, 2), ("t", 4, 3), ("tb", 5, 3)]),
        ("11010", [("tb", 3, 2), ("t", 4, 3), ("tb", 5, 3)]),
        ("11100", [("tb", 4, 3), ("tb", 5, 3)]),
    ],
}

# final table: ket -> orbitals whose |eta| multiply its amplitude
FINAL = {
    "00111": (1, 2, 3), "01011": (1, 2, 4), "10011": (1, 2, 5), "01101": (1, 3, 4),
    "10101": (1, 3, 5), "11001": (1, 4, 5), "01110": (2, 3, 4), "10110": (2, 3, 5),
    "11010": (2, 4, 5), "11100": (3, 4, 5),
}


def _esp_brute(x, n):
    return sum(prod(c) for c in combinations(x, n))


def _suffix_esp(mags, p, q):
    # over |eta_{M-p+1}|^2 .. |eta_M|^2
    return _esp_brute([m * m for m in mags[M - p:]], q)


def theta(mags, p, q):
    return abs(mags[M - p]) * sqrt(_suffix_esp(mags, p - 1, q - 1) / _suffix_esp(mags, p, q))


def theta_bar(mags, p, q):
    return sqrt(_suffix_esp(mags, p - 1, q) / _suffix_esp(mags, p, q))


def intermediate_amplitudes(mags, stage):
    """Expected ket -> amplitude after the SCS named ``stage``."""
    f = {"t": theta, "tb": theta_bar}
    return {ket: prod(f[k](mags, p, q) for k, p, q in factors)
            for ket, factors in AFTER_SCS[stage]}


def final_amplitudes(mags):
    s = _esp_brute([m * m for m in mags], N)
    return {ket: prod(abs(mags[p - 1]) for p in orb) / sqrt(s) for ket, orb in FINAL.items()}
