"""8x8 matrix structure of the Feshbach-Villars spin-1/2 formalism.

Component order is psi = (psi_1..psi_8) with the xi sector in slots 1-4 and
the eta sector in slots 5-8; gamma^0 is fixed to the Weyl representation
(off-diagonal 2x2 identity blocks).  Spinors are plain complex ndarrays of
shape (8,); sampled fields are (n, 8).

The charge density rho = psi^dag tau5 psi is indefinite in sign — its jump
across the step encodes pair creation — and the inner product uses tau4, so
the state space is not a Hilbert space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import GridMismatch

if TYPE_CHECKING:
    from .step import StepSolution

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)
PAULI1 = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI3 = np.array([[1, 0], [0, -1]], dtype=complex)

#: gamma^0 in the Weyl representation
GAMMA0 = np.block([[_Z2, _I2], [_I2, _Z2]])

#: tau4 = tau3 (x) gamma^0 — metric of the indefinite inner product
TAU4 = np.kron(PAULI3, GAMMA0)

#: tau5 = tau1 (x) (tau3 (x) 1_2) — density metric, rho = psi^dag tau5 psi
TAU5 = np.kron(PAULI1, np.kron(PAULI3, _I2))

#: O = 1_2 (x) (tau3 + i tau2) (x) 1_2 — current vertex; nilpotent, O^2 = 0
OCUR = np.kron(_I2, np.kron(PAULI3 + 1j * PAULI2, _I2))

#: charge-conjugation matrix tau1 (x) gamma^0 (applied to the conjugated spinor)
CCMAT = np.kron(PAULI1, GAMMA0)

_I8 = np.eye(8, dtype=complex)


def matrix_identity_residuals() -> dict[str, float]:
    """Max-abs deviation of the defining algebraic identities; all ~1e-16."""
    return {
        "tau4_squared": float(np.abs(TAU4 @ TAU4 - _I8).max()),
        "tau5_squared": float(np.abs(TAU5 @ TAU5 - _I8).max()),
        "tau4_hermitian": float(np.abs(TAU4 - TAU4.conj().T).max()),
        "tau5_hermitian": float(np.abs(TAU5 - TAU5.conj().T).max()),
        "ocur_nilpotent": float(np.abs(OCUR @ OCUR).max()),
        "charge_conjugation_squared": float(np.abs(CCMAT @ CCMAT - _I8).max()),
    }


def density(psi: np.ndarray) -> float:
    """Charge density rho = psi^dag tau5 psi (real; either sign)."""
    psi = np.asarray(psi, dtype=complex)
    return float(np.real(psi.conj() @ TAU5 @ psi))


def density_field(psi: np.ndarray) -> np.ndarray:
    """rho on a sampled field of shape (n, 8)."""
    psi = np.asarray(psi, dtype=complex)
    return np.real(np.einsum("ni,ij,nj->n", psi.conj(), TAU5, psi))


def current(psi: np.ndarray, dpsi_dx: np.ndarray, m: float) -> float:
    """One-dimensional current j = (1/2im)[psibar O psi' - psibar' O psi], A = 0."""
    psi = np.asarray(psi, dtype=complex)
    dpsi = np.asarray(dpsi_dx, dtype=complex)
    t5o = TAU5 @ OCUR
    val = (psi.conj() @ t5o @ dpsi - dpsi.conj() @ t5o @ psi) / (2j * m)
    return float(val.real)


def current_field(psi: np.ndarray, dpsi_dx: np.ndarray, m: float) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    dpsi = np.asarray(dpsi_dx, dtype=complex)
    t5o = TAU5 @ OCUR
    a = np.einsum("ni,ij,nj->n", psi.conj(), t5o, dpsi)
    b = np.einsum("ni,ij,nj->n", dpsi.conj(), t5o, psi)
    return np.real((a - b) / (2j * m))


def charge_conjugate(psi: np.ndarray) -> np.ndarray:
    """psi_c = (tau1 (x) gamma^0) conj(psi); flips rho, preserves j.

    The conjugation acts componentwise on the column spinor (the dagger in
    the defining relation is read as complex conjugation).
    """
    return CCMAT @ np.asarray(psi, dtype=complex).conj()


def inner_product(psi_a: np.ndarray, psi_b: np.ndarray, grid: np.ndarray) -> complex:
    """Indefinite inner product (psi_a, psi_b) = int psi_a^dag tau4 psi_b dx.

    Trapezoidal quadrature over a shared grid; intended for square-integrable
    test spinors.  Raises GridMismatch if the samplings differ.
    """
    psi_a = np.asarray(psi_a, dtype=complex)
    psi_b = np.asarray(psi_b, dtype=complex)
    grid = np.asarray(grid, dtype=float)
    if psi_a.shape != psi_b.shape or psi_a.ndim != 2 or psi_a.shape[1] != 8:
        raise GridMismatch(f"field shapes {psi_a.shape} vs {psi_b.shape}")
    if grid.shape != (psi_a.shape[0],):
        raise GridMismatch(f"grid shape {grid.shape} does not match field {psi_a.shape}")
    integrand = np.einsum("ni,ij,nj->n", psi_a.conj(), TAU4, psi_b)
    return complex(np.trapz(integrand, grid))


#: (j, k) pairing of FV components (psi_j, psi_{j+2}) with KG-1/2 component phi_k
FV_PAIRS = ((1, 1), (2, 2), (5, 3), (6, 4))


def fv_reconstruct(psi: np.ndarray, E: float, v: float, m: float) -> np.ndarray:
    """Four-component KG-1/2 wave function phi_k = (psi_j + psi_{j+2})/sqrt(2).

    ``v`` is the local potential value; it only enters the consistency check
    (see fv_consistency_residual), not the reconstruction itself.
    """
    psi = np.asarray(psi, dtype=complex)
    return np.array([(psi[j - 1] + psi[j + 1]) / np.sqrt(2.0) for j, _ in FV_PAIRS])


def fv_consistency_residual(psi: np.ndarray, E: float, v: float, m: float) -> float:
    """Max |(E - v) phi_k - (m/sqrt 2)(psi_j - psi_{j+2})| over the four pairs."""
    psi = np.asarray(psi, dtype=complex)
    phi = fv_reconstruct(psi, E, v, m)
    res = 0.0
    for idx, (j, _) in enumerate(FV_PAIRS):
        diff = (E - v) * phi[idx] - m / np.sqrt(2.0) * (psi[j - 1] - psi[j + 1])
        res = max(res, abs(diff))
    return res


def boundary_matrix(E: float, u: float) -> np.ndarray:
    """2x2 step transfer matrix [[1-u/2E, u/2E], [u/2E, 1-u/2E]].

    Rows sum to one; reduces to the swap at E = u/2 and to the averaging
    projector at E = u.
    """
    x = u / (2.0 * E)
    return np.array([[1.0 - x, x], [x, 1.0 - x]])


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


@dataclass(frozen=True)
class VerifyReport:
    """Named residuals of the boundary-condition / conservation checks."""

    checks: tuple[CheckResult, ...]
    flags: dict

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


BOUNDARY_TOL = 1e-10


def check_boundary(step: "StepSolution", tol: float = BOUNDARY_TOL) -> VerifyReport:
    """Verify the step boundary conditions on one-sided limits at x = 0.

    Residual families (all relative to a natural scale):
      matrix_condition   M(E,u) [psi_j, psi_{j+2}](0-) = [psi_j, psi_{j+2}](0+)
      sum_continuity     psi_I + psi_II continuous
      diff_jump          psi_I - psi_II jumps by (E-u)/E
      density_jump       rho(0+) = (E-u)/E rho(0-)
      current_continuity j(0+) = j(0-)
    """
    prm = step.params
    E, u, m = prm.E, prm.u, prm.m
    ratio = (E - u) / E

    pm = step.spinor_limit(-1)
    pp = step.spinor_limit(+1)
    dm = step.spinor_dx_limit(-1)
    dp = step.spinor_dx_limit(+1)
    scale = max(float(np.abs(pm).max()), float(np.abs(pp).max()), 1e-300)

    M = boundary_matrix(E, u)
    res_matrix = 0.0
    for j, _ in FV_PAIRS:
        lo = np.array([pm[j - 1], pm[j + 1]])
        hi = np.array([pp[j - 1], pp[j + 1]])
        res_matrix = max(res_matrix, float(np.abs(M @ lo - hi).max()))

    idx_i = [0, 1, 4, 5]
    idx_ii = [2, 3, 6, 7]
    psi_i_m, psi_ii_m = pm[idx_i].sum(), pm[idx_ii].sum()
    psi_i_p, psi_ii_p = pp[idx_i].sum(), pp[idx_ii].sum()
    res_sum = abs((psi_i_p + psi_ii_p) - (psi_i_m + psi_ii_m))
    res_diff = abs((psi_i_p - psi_ii_p) - ratio * (psi_i_m - psi_ii_m))

    rho_m, rho_p = density(pm), density(pp)
    rho_scale = max(abs(rho_m), abs(rho_p), scale * scale, 1e-300)
    res_rho = abs(rho_p - ratio * rho_m)

    j_m = current(pm, dm, m)
    j_p = current(pp, dp, m)
    j_scale = max(abs(j_m), abs(j_p), 1e-300)
    res_j = abs(j_p - j_m)

    checks = (
        CheckResult("matrix_condition", res_matrix / scale, tol),
        CheckResult("sum_continuity", res_sum / scale, tol),
        CheckResult("diff_jump", res_diff / scale, tol),
        CheckResult("density_jump", res_rho / rho_scale, tol),
        CheckResult("current_continuity", res_j / j_scale, tol),
    )
    flags = {
        "pair_creation": bool(rho_p * rho_m < 0.0),
        "density_ratio": ratio,
        "rho_left": rho_m,
        "rho_right": rho_p,
    }
    return VerifyReport(checks=checks, flags=flags)
