"""Physical inputs and derived spectral quantities for the 1D barrier problem.

Units: natural units (hbar = c = 1). The electrostatic coupling enters only
through the single combination u = e*V0, so e and V0 are never separated.

Conventions:
    k1^2 = E^2 - m^2          (k1 > 0, incident side)
    k2^2 = (E-u)^2 - m^2      (transmitted side; branch depends on regime)
    mu = -i*r*k1,  nu = -i*r*k2
    v1 = 1 + 2i*r*u,  v2 = 1 - 2i*r*u = conj(v1)

Regimes for E > m:
    R1  E > u + m        k2 real > 0, ordinary transmission
    R2  u - m < E < u+m  k2 = i*|k2| (evanescent), total reflection
    R3  m < E < u - m    k2 real < 0 (Klein zone, needs u > 2m)
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError, ThresholdError

#: Default relative width of the exclusion zone around spectral thresholds.
THRESHOLD_TOL = 1e-12


class EnergyRegime(enum.Enum):
    R1_Transmission = "R1"
    R2_TotalReflection = "R2"
    R3_Klein = "R3"
    SubBarrierInvalid = "sub"


@dataclass(frozen=True)
class PhysicalParams:
    """Immutable physical inputs.

    ``C1, D1, C2, D2`` are the arbitrary normalization constants of the four
    scalar basis functions; the defaults give the conventional unit-amplitude
    solution.  ``threshold_tol`` is the relative exclusion tolerance around
    the singular energies {m, u-m, u+m, u}; set it to 0 to disable the check
    (needed e.g. to probe the special boundary point E = u).
    """

    m: float
    u: float
    E: float
    r: float = 0.0
    C1: complex = 1.0 + 0.0j
    D1: complex = 1.0 + 0.0j
    C2: complex = 1.0 + 0.0j
    D2: complex = 1.0 + 0.0j
    threshold_tol: float = THRESHOLD_TOL

    def __post_init__(self):
        if self.m <= 0:
            raise DomainError(f"mass must be positive, got m={self.m}")
        if self.u < 0:
            raise DomainError(f"coupling must be non-negative, got u={self.u}")
        if self.r < 0:
            raise DomainError(f"smoothness must be non-negative, got r={self.r}")
        if self.threshold_tol > 0:
            t = nearest_threshold(self.m, self.u, self.E, self.threshold_tol)
            if t is not None:
                raise ThresholdError(
                    f"E={self.E} within relative {self.threshold_tol} of "
                    f"threshold {t[1]}={t[0]}"
                )

    @property
    def is_step(self) -> bool:
        return self.r == 0.0

    @property
    def amplitudes(self) -> tuple[complex, complex, complex, complex]:
        return (complex(self.C1), complex(self.D1), complex(self.C2), complex(self.D2))


def _thresholds(m: float, u: float) -> list[tuple[float, str]]:
    return [(m, "m"), (u - m, "u-m"), (u + m, "u+m"), (u, "u")]


def nearest_threshold(m, u, E, tol=THRESHOLD_TOL):
    """Return (value, name) of a threshold within ``tol`` (relative) of E, else None."""
    for t, name in _thresholds(m, u):
        scale = max(1.0, abs(E), abs(t))
        if abs(E - t) <= tol * scale:
            return (t, name)
    return None


@dataclass(frozen=True)
class DerivedParams:
    """Spectral quantities derived from (m, u, E, r) with explicit branches."""

    k1: float
    k2: complex
    mu: complex
    nu: complex
    v1: complex
    v2: complex
    regime: EnergyRegime
    # inputs carried along so downstream evaluators are self-contained
    m: float = field(default=0.0, repr=False)
    u: float = field(default=0.0, repr=False)
    E: float = field(default=0.0, repr=False)
    r: float = field(default=0.0, repr=False)

    @property
    def k2_is_real(self) -> bool:
        return self.k2.imag == 0.0


def classify(m: float, u: float, E: float, tol: float = THRESHOLD_TOL) -> EnergyRegime:
    """Classify the energy regime of (m, u, E).

    Total on the open intervals; raises ThresholdError within ``tol`` of a
    threshold endpoint.  For u <= 2m the Klein interval is empty and only
    R1/R2 (or sub-barrier) can occur.
    """
    if m <= 0:
        raise DomainError(f"mass must be positive, got m={m}")
    if u < 0:
        raise DomainError(f"coupling must be non-negative, got u={u}")
    if tol > 0:
        t = nearest_threshold(m, u, E, tol)
        if t is not None:
            raise ThresholdError(f"E={E} at threshold {t[1]}={t[0]}")
    if E < m:
        return EnergyRegime.SubBarrierInvalid
    if E > u + m:
        return EnergyRegime.R1_Transmission
    if E > u - m:
        return EnergyRegime.R2_TotalReflection
    return EnergyRegime.R3_Klein


def derive(params: PhysicalParams, klein_branch: int = -1) -> DerivedParams:
    """Compute wavenumbers, exponents and spin parameters with fixed branches.

    ``klein_branch`` selects the sign of the real k2 in the Klein zone; the
    default -1 matches the transmitted-wave case analysis of the step limit
    ("k2 real negative" for m < E < u-m).  Pass +1 to flip the convention.
    """
    m, u, E, r = params.m, params.u, params.E, params.r
    if klein_branch not in (-1, 1):
        raise DomainError(f"klein_branch must be +-1, got {klein_branch}")
    if params.threshold_tol > 0:
        t = nearest_threshold(m, u, E, params.threshold_tol)
        if t is not None:
            raise ThresholdError(f"E={E} at threshold {t[1]}={t[0]}")
    if E <= m:
        raise DomainError(f"need E > m for a propagating incident wave, got E={E}, m={m}")

    regime = classify(m, u, E, tol=0.0)
    k1 = math.sqrt((E - m) * (E + m))
    q2 = (E - u) ** 2 - m * m  # k2^2
    if regime is EnergyRegime.R1_Transmission:
        k2 = complex(math.sqrt(q2), 0.0)
    elif regime is EnergyRegime.R3_Klein:
        k2 = complex(klein_branch * math.sqrt(q2), 0.0)
    else:
        # evanescent transmitted wave: Im(k2) > 0 so exp(i*k2*x) decays
        k2 = complex(0.0, math.sqrt(-q2))

    mu = -1j * r * k1
    nu = -1j * r * k2
    v1 = complex(1.0, 2.0 * r * u)
    v2 = v1.conjugate()
    return DerivedParams(k1=k1, k2=k2, mu=mu, nu=nu, v1=v1, v2=v2,
                         regime=regime, m=m, u=u, E=E, r=r)


def hyp_parameter_sets(derived: DerivedParams):
    """The two (a, b, c) parameter triples of the basis functions.

    Returns ``(set_v1, set_v2)`` where set_v1 belongs to psi_xi^s (and
    psi_eta^d) and set_v2 to psi_xi^d (and psi_eta^s).  c is common.
    """
    mu, nu = derived.mu, derived.nu
    h = mu + nu + 0.5
    c = 1.0 + 2.0 * nu
    set_v1 = (h - derived.v1 / 2.0, h + derived.v1 / 2.0, c)
    set_v2 = (h + derived.v2 / 2.0, h - derived.v2 / 2.0, c)
    return set_v1, set_v2


def spin0_derived(derived: DerivedParams) -> DerivedParams:
    """Variant with the spin contribution removed from the v parameters.

    Drops the imaginary 4i*r*u part of v1^2 and v2^2, keeping the real
    1 - 4 r^2 u^2 term, which collapses both hypergeometric equations onto
    the single spin-0 equation.
    """
    v2sq = 1.0 - 4.0 * derived.r ** 2 * derived.u ** 2
    v = cmath.sqrt(v2sq)
    return DerivedParams(k1=derived.k1, k2=derived.k2, mu=derived.mu,
                         nu=derived.nu, v1=v, v2=v, regime=derived.regime,
                         m=derived.m, u=derived.u, E=derived.E, r=derived.r)
