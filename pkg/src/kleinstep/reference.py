"""Slow high-precision reference implementations (>= 30 significant digits).

Golden values for the fast double-precision special functions are generated
here.  The algorithms are deliberately naive and self-contained — Stirling's
series with exact Bernoulli numbers for log-Gamma, the defining Taylor series
for 2F1 — with mpmath supplying only the big-float arithmetic.  Keep this
module independent of :mod:`kleinstep.special`; it is the other leg of the
dual-route check.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .errors import DomainError, NonConvergence, PoleError

#: working precision in decimal digits; results are good to ~dps-10 digits
DPS = 60

_STIRLING_SHIFT = 40   # push |z| at least this far right before Stirling
_STIRLING_TERMS = 30   # Bernoulli B_2..B_60


@lru_cache(maxsize=None)
def bernoulli_even(k: int) -> Fraction:
    """Exact Bernoulli number B_{2k} from the defining recurrence."""
    n = 2 * k
    table = _bernoulli_table(n)
    return table[n]


@lru_cache(maxsize=1)
def _binomials():
    return {}


def _binom(n: int, j: int) -> int:
    import math
    return math.comb(n, j)


@lru_cache(maxsize=None)
def _bernoulli_table(nmax: int):
    # sum_{j=0}^{n} C(n+1, j) B_j = 0 for n >= 1, B_0 = 1
    b = [Fraction(1)]
    for n in range(1, nmax + 1):
        s = Fraction(0)
        for j in range(n):
            s += _binom(n + 1, j) * b[j]
        b.append(-s / (n + 1))
    return b


def _is_nonpositive_int(z: mp.mpc, tol) -> bool:
    if abs(mp.im(z)) > tol:
        return False
    re = mp.re(z)
    n = mp.nint(re)
    return n <= 0 and abs(re - n) <= tol


def _stirling_log_gamma(w: mp.mpc) -> mp.mpc:
    # valid for large |w| with Re(w) > 0
    acc = (w - mp.mpf(1) / 2) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
    w2 = w * w
    wp = w
    for k in range(1, _STIRLING_TERMS + 1):
        b = bernoulli_even(k)
        acc += mp.mpf(b.numerator) / (mp.mpf(b.denominator) * (2 * k) * (2 * k - 1) * wp)
        wp *= w2
    return acc


def _log_gamma_right(z: mp.mpc) -> mp.mpc:
    # Re(z) >= 0.5: recurrence shift into the Stirling zone
    shift = int(max(0, mp.ceil(_STIRLING_SHIFT - mp.re(z))))
    acc = mp.mpc(0)
    for j in range(shift):
        acc += mp.log(z + j)
    return _stirling_log_gamma(z + shift) - acc


def log_gamma(z, dps: int = DPS) -> mp.mpc:
    """Principal-branch log-Gamma at >= 30 significant digits.

    Uses Stirling's asymptotic series after an upward recurrence shift; for
    Re(z) < 1/2 the reflection formula with an unwound log-sin keeps the
    branch principal (continuous off the cut along the negative real axis,
    approached from above on the cut itself).
    """
    with mp.workdps(dps):
        zz = mp.mpc(z)
        if _is_nonpositive_int(zz, mp.mpf(10) ** (-dps + 5)):
            raise PoleError(complex(zz), "reference log_gamma")
        if mp.re(zz) >= mp.mpf(1) / 2:
            out = _log_gamma_right(zz)
        elif mp.im(zz) < 0:
            out = mp.conj(log_gamma(mp.conj(zz), dps=dps))
        else:
            # log sin(pi z) = i pi/2 - log 2 - i pi z + log(1 - e^{2 pi i z}),
            # single-valued for Im(z) >= 0
            logsin = (1j * mp.pi / 2 - mp.log(2) - 1j * mp.pi * zz
                      + mp.log(1 - mp.exp(2j * mp.pi * zz)))
            out = mp.log(mp.pi) - logsin - _log_gamma_right(1 - zz)
        return +out


def gamma(z, dps: int = DPS) -> mp.mpc:
    with mp.workdps(dps):
        return mp.exp(log_gamma(z, dps=dps))


def hyp2f1(a, b, c, y, dps: int = DPS, max_terms: int = 500_000) -> mp.mpc:
    """Gauss 2F1 by direct Taylor summation at high precision.

    Converges for 0 <= y < 1 but the term budget limits practical use to
    y <= ~0.97.  Independent of any connection formula by construction.
    """
    if not 0 <= y < 1:
        raise DomainError(f"reference 2F1 needs 0 <= y < 1, got y={y}")
    with mp.workdps(dps):
        aa, bb, cc, yy = mp.mpc(a), mp.mpc(b), mp.mpc(c), mp.mpf(y)
        if _is_nonpositive_int(cc, mp.mpf(10) ** (-dps + 5)):
            raise PoleError(complex(cc), "reference hyp2f1 parameter c")
        term = mp.mpc(1)
        total = mp.mpc(1)
        eps = mp.mpf(10) ** (-dps - 5)
        small = 0
        for n in range(max_terms):
            term = term * (aa + n) * (bb + n) / ((cc + n) * (n + 1)) * yy
            total += term
            if abs(term) < eps * abs(total):
                small += 1
                if small >= 3:
                    return +total
            else:
                small = 0
        raise NonConvergence(
            f"reference 2F1 series exceeded {max_terms} terms at y={y}")
