"""
Brute-force second-order current of a doped Dirac layer.

The density-matrix expression for the current at omega1 + omega2 is summed
over all band triples and integrated over a polar k grid. Occupations are
taken relative to the undoped layer, so the integrand vanishes outside the
Fermi circles of k, k + q1 and k - q2 and no cutoff tail remains.
"""
from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from app.core.constants import E, HBAR
from app.core.exceptions import ConvergenceError, SingularInputError
from app.models.chi2_model import Broadening, Chi2Component, ConvergenceRow, KGridSpec, Polarization
from app.models.material_model import MaterialParams
from app.utils.logger import logger

Vector = Tuple[float, float]

# Geometric refinement around each resonance ring, in units of its width
POLE_BANDS = 4.0 ** np.arange(7)
ANGULAR_ORDER = 16
RADIAL_PANELS_PER_ORDER = 16


def _as_vector(q) -> np.ndarray:
    if np.isscalar(q):
        return np.array([float(q), 0.0])
    return np.asarray(q, dtype=float).reshape(2)


def _phase(x: np.ndarray, y: np.ndarray, r: np.ndarray) -> np.ndarray:
    """(x + iy) / r, set to 1 at the origin"""
    z = x + 1j * y
    return np.divide(z, r, out=np.ones_like(z), where=r > 0)


class Chi2OracleService:
    """Polar-grid quadrature of the general second-order current integral"""

    def _occupation(self, band: int, k: np.ndarray, mat: MaterialParams) -> np.ndarray:
        """Occupation of band s relative to the undoped layer"""
        if band != mat.s_F:
            return np.zeros_like(k)
        inside = (k < mat.k_F).astype(float)
        return inside if band == 1 else -inside

    def _circle_radii(self, center: np.ndarray, ux: np.ndarray, uy: np.ndarray, k_F: float) -> np.ndarray:
        """Outer radius along each ray of the circle |k - center| = k_F"""
        cu = center[0] * ux + center[1] * uy
        disc = cu ** 2 - center @ center + k_F ** 2
        return np.where(disc >= 0, cu + np.sqrt(np.clip(disc, 0, None)), 0.0)

    def _ellipse_radii(self, a: np.ndarray, b: np.ndarray, L: float,
                       ux: np.ndarray, uy: np.ndarray) -> np.ndarray:
        """Radius along each ray where |k + a| + |k + b| = L, zero where there is none"""
        if L <= np.linalg.norm(a - b):
            return np.zeros_like(ux)
        a_u = a[0] * ux + a[1] * uy
        b_u = b[0] * ux + b[1] * uy
        alpha = b_u - a_u
        beta = 0.5 * (L ** 2 + b @ b - a @ a)
        qa = L ** 2 - alpha ** 2
        qb = 2 * L ** 2 * b_u - 2 * alpha * beta
        qc = L ** 2 * (b @ b) - beta ** 2
        disc = np.clip(qb ** 2 - 4 * qa * qc, 0, None)
        root = (-qb + np.sqrt(disc)) / (2 * qa)
        valid = (root > 0) & (beta + root * alpha >= 0)
        return np.where(valid, root, 0.0)

    def _angular_nodes(self, centers: Sequence[np.ndarray], grid: KGridSpec,
                       k_F: float) -> Tuple[np.ndarray, np.ndarray]:
        edges = list(np.linspace(0.0, 2 * np.pi, max(grid.n_angular // ANGULAR_ORDER, 1) + 1))
        for i, c_a in enumerate(centers):
            for c_b in centers[i + 1:]:
                d = np.linalg.norm(c_b - c_a)
                if d < 1e-12 * k_F or d >= 2 * k_F:
                    continue
                mid = 0.5 * (c_a + c_b)
                normal = np.array([-(c_b - c_a)[1], (c_b - c_a)[0]]) / d
                h = np.sqrt(k_F ** 2 - 0.25 * d ** 2)
                for point in (mid + h * normal, mid - h * normal):
                    edges.append(np.arctan2(point[1], point[0]) % (2 * np.pi))
        edges = np.unique(np.round(np.asarray(edges), 14))

        x, w = leggauss(ANGULAR_ORDER)
        lo, hi = edges[:-1, None], edges[1:, None]
        theta = lo + 0.5 * (hi - lo) * (x + 1)
        weight = 0.5 * (hi - lo) * w
        return theta.ravel(), weight.ravel()

    def _radial_nodes(self, theta: np.ndarray, q1: np.ndarray, q2: np.ndarray,
                      omegas: Tuple[float, float, float], mat: MaterialParams,
                      grid: KGridSpec) -> Tuple[np.ndarray, np.ndarray]:
        k_F = mat.k_F
        ux, uy = np.cos(theta), np.sin(theta)
        zero = np.zeros(2)

        circles = [self._circle_radii(c, ux, uy, k_F) for c in (zero, -q1, q2, -q2, q1)]
        support = np.minimum(np.max(circles, axis=0), grid.k_max * k_F)

        omega1, omega2, omega3 = omegas
        rings = []
        for omega, pairs in (
            (omega3, ((q1, -q2), (q2, -q1))),
            (omega2, ((zero, -q2), (q2, zero))),
            (omega1, ((q1, zero), (zero, -q1))),
        ):
            for a, b in pairs:
                rings.append(self._ellipse_radii(a, b, abs(omega) / mat.v_F, ux, uy))

        width = grid.eta / (2 * mat.v_F)
        breaks = [np.zeros_like(theta), support]
        for r in circles:
            breaks += [r, r * (1 - grid.refine_width), r * (1 + grid.refine_width)]
        for r in rings:
            present = r > 0
            for band in POLE_BANDS:
                breaks += [np.where(present, r - band * width, 0.0), np.where(present, r + band * width, 0.0)]
            breaks.append(r)
        edges = np.sort(np.clip(np.stack(breaks, axis=1), 0.0, support[:, None]), axis=1)

        order = max(grid.n_radial // RADIAL_PANELS_PER_ORDER, 4)
        x, w = leggauss(order)
        lo, hi = edges[:, :-1, None], edges[:, 1:, None]
        radius = lo + 0.5 * (hi - lo) * (x + 1)
        weight = 0.5 * (hi - lo) * w
        n = theta.size
        return radius.reshape(n, -1), weight.reshape(n, -1)

    def _current_density(self, kx: np.ndarray, ky: np.ndarray, eta_a: Polarization, eta_b: Polarization,
                         w_a: complex, w_b: complex, w3: complex, qa: np.ndarray, qb: np.ndarray,
                         mat: MaterialParams) -> Tuple[np.ndarray, np.ndarray]:
        """Band-summed integrand with field a entering first; returns (x, y) parts"""
        v_F = mat.v_F
        mx, my = kx + qa[0], ky + qa[1]
        nx, ny = kx - qb[0], ky - qb[1]
        r_l = np.hypot(kx, ky)
        r_m = np.hypot(mx, my)
        r_n = np.hypot(nx, ny)
        e_l = _phase(kx, ky, r_l)
        e_m = _phase(mx, my, r_m)
        e_n = _phase(nx, ny, r_n)

        a_minus = eta_a.eta_x - 1j * eta_a.eta_y
        a_plus = eta_a.eta_x + 1j * eta_a.eta_y
        b_minus = eta_b.eta_x - 1j * eta_b.eta_y
        b_plus = eta_b.eta_x + 1j * eta_b.eta_y

        occupation = {(s, label): self._occupation(s, r, mat)
                      for s in (1, -1) for label, r in (("l", r_l), ("m", r_m), ("n", r_n))}

        total_x = np.zeros(kx.shape, dtype=complex)
        total_y = np.zeros(kx.shape, dtype=complex)
        for s_m, s_n, s_l in product((1, -1), repeat=3):
            f_l, f_m, f_n = occupation[(s_l, "l")], occupation[(s_m, "m")], occupation[(s_n, "n")]
            if not (f_l.any() or f_m.any() or f_n.any()):
                continue
            d3 = w3 - v_F * (s_m * r_m - s_n * r_n)
            d2 = w_b - v_F * (s_l * r_l - s_n * r_n)
            d1 = w_a - v_F * (s_m * r_m - s_l * r_l)
            populations = (f_n - f_l) / d2 - (f_l - f_m) / d1

            m1 = a_minus * s_m * e_l + a_plus * s_l * np.conj(e_m)
            m2 = b_minus * s_l * e_n + b_plus * s_n * np.conj(e_l)
            common = m1 * m2 * populations / d3

            out_plus = s_m * np.conj(e_n)
            out_minus = s_n * e_m
            total_x += common * (out_plus + out_minus)
            total_y += common * 1j * (out_plus - out_minus)
        return total_x, total_y

    def sigma2_numeric(self, eta1: Polarization, eta2: Polarization, omega1: float, omega2: float,
                       q1, q2, mat: MaterialParams, grid: KGridSpec,
                       tol: Optional[float] = None) -> np.ndarray:
        """
        Second-order conductivity vector (sigma_x, sigma_y) by direct quadrature.

        The current at omega1 + omega2 is divided by the two field
        amplitudes. Every frequency, including those in the prefactor,
        carries +i*eta.

        Args:
            eta1, eta2: Polarizations of the two driving fields
            omega1, omega2: Signed frequencies (rad/s)
            q1, q2: In-plane wave vectors, 2-sequences or scalars along x (1/cm)
            mat: Material of the layer
            grid: Quadrature grid
            tol: If given, the grid is doubled and a relative change above tol
                raises ConvergenceError

        Returns:
            np.ndarray: Complex array [sigma_x, sigma_y]
        """
        if tol is not None:
            coarse = self.sigma2_numeric(eta1, eta2, omega1, omega2, q1, q2, mat, grid)
            fine = self.sigma2_numeric(eta1, eta2, omega1, omega2, q1, q2, mat, grid.doubled())
            change = np.linalg.norm(fine - coarse) / max(np.linalg.norm(fine), np.finfo(float).tiny)
            if change > tol:
                logger.error(f"Oracle grid doubling changed the result by {change:.3e} > {tol:.3e}")
                raise ConvergenceError(f"Grid doubling changed sigma2 by {change:.3e}",
                                       coarse=complex(coarse[0]), fine=complex(fine[0]))
            return fine

        q1 = _as_vector(q1)
        q2 = _as_vector(q2)
        w1 = omega1 + 1j * grid.eta
        w2 = omega2 + 1j * grid.eta
        w3 = omega1 + omega2 + 1j * grid.eta
        if abs(omega1 + omega2) < np.finfo(float).eps * (abs(omega1) + abs(omega2)):
            raise SingularInputError("Mixing frequency must be nonzero")

        zero = np.zeros(2)
        theta, w_theta = self._angular_nodes((zero, -q1, q2, -q2, q1), grid, mat.k_F)
        radius, w_radius = self._radial_nodes(theta, q1, q2, (omega1, omega2, omega1 + omega2), mat, grid)
        kx = radius * np.cos(theta)[:, None]
        ky = radius * np.sin(theta)[:, None]
        weight = w_radius * radius * w_theta[:, None]
        # zero-width panels collapse onto repeated breakpoints
        live = weight > 0
        kx, ky, weight = kx[live], ky[live], weight[live]

        forward = self._current_density(kx, ky, eta1, eta2, w1, w2, w3, q1, q2, mat)
        swapped = self._current_density(kx, ky, eta2, eta1, w2, w1, w3, q2, q1, mat)

        prefactor = mat.g * mat.n_layers * E ** 3 * mat.v_F ** 3 / (64 * np.pi ** 2 * HBAR ** 2 * w1 * w2)
        sigma = np.array([
            np.sum(weight * (forward[0] + swapped[0])),
            np.sum(weight * (forward[1] + swapped[1])),
        ])
        return prefactor * sigma

    def sigma2_component(self, indices: Tuple[str, str, str], omega1: float, omega2: float,
                         q1: float, q2: float, mat: MaterialParams, grid: KGridSpec) -> complex:
        """sigma^(2)_ijk for linear polarizations and wave vectors along x"""
        out, first, second = indices
        sigma = self.sigma2_numeric(Polarization.along(first), Polarization.along(second),
                                    omega1, omega2, q1, q2, mat, grid)
        return complex(sigma[0 if out == "x" else 1])

    def chi2_component(self, indices: Tuple[str, str, str], omega1: float, omega2: float,
                       q1: float, q2: float, mat: MaterialParams, grid: KGridSpec) -> Chi2Component:
        """chi^(2)_ijk = i sigma / (omega1 + omega2 + i eta) as a tagged component"""
        sigma = self.sigma2_component(indices, omega1, omega2, q1, q2, mat, grid)
        value = 1j * sigma / (omega1 + omega2 + 1j * grid.eta)
        return Chi2Component(indices=indices, omega1=omega1, omega2=omega2, q1=q1, q2=q2,
                             value=value, broadening=Broadening.uniform(grid.eta))

    def evaluate_partner(self, partner: Chi2Component, mat: MaterialParams, grid: KGridSpec) -> complex:
        """Independently computed value of a relabeled component"""
        return self.chi2_component(partner.indices, partner.omega1, partner.omega2,
                                   partner.q1, partner.q2, mat, grid).value

    def convergence_study(self, eta1: Polarization, eta2: Polarization, omega1: float, omega2: float,
                          q1, q2, mat: MaterialParams, grids: List[KGridSpec],
                          component: str = "x") -> List[ConvergenceRow]:
        """
        Evaluate the same conductivity on a sequence of grids.

        Args:
            grids: At least two grid specifications, coarse to fine
            component: Output component to tabulate

        Returns:
            List[ConvergenceRow]: One row per grid with the change from the previous one
        """
        if len(grids) < 2:
            raise ValueError("A convergence study needs at least two grids")
        index = 0 if component == "x" else 1
        rows: List[ConvergenceRow] = []
        previous = None
        for grid in grids:
            value = complex(self.sigma2_numeric(eta1, eta2, omega1, omega2, q1, q2, mat, grid)[index])
            delta = None if previous is None else abs(value - previous)
            rows.append(ConvergenceRow(grid=grid, value=value, delta=delta))
            logger.info(f"Oracle grid {grid.n_radial}x{grid.n_angular}: {value:.6e}")
            previous = value
        return rows


chi2_oracle_service = Chi2OracleService()
