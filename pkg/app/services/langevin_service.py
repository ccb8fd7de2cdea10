"""
Stochastic c-number model of the plasmon amplitude along a line.

da/dt + v_s da/dx + (gamma_s - Re G) a = F is advanced with a first-order
upwind shift, an exact exponential decay per step and complex Gaussian
increments. The reservoir strength 2 gamma_s n_thermal makes the noise-only
stationary occupation equal the thermal plasmon occupation.
"""
import math
from typing import List

import numpy as np
from scipy import integrate

from app.core.config import LANGEVIN_BLOCK_SIZE
from app.core.exceptions import CFLViolationError
from app.models.langevin_model import LangevinProfile, LineSpec
from app.utils.logger import logger

# Steps of noise drawn per call on each trajectory stream
NOISE_CHUNK = 64


class LangevinService:
    """Ensemble simulation of the driven, damped plasmon transport equation"""

    def _decay(self, spec: LineSpec) -> float:
        with np.errstate(over="ignore"):
            return float(np.exp(-(spec.gamma_s - spec.ReG) * spec.dt))

    def _calibration(self, spec: LineSpec) -> float:
        """Ratio between the exact-advection stationary variance and the upwind one"""
        courant = spec.courant
        kappa = spec.gamma_s - spec.ReG
        if courant >= 1.0 or kappa <= 0:
            return 1.0
        d2 = self._decay(spec) ** 2

        def inverse_gap(k: float) -> float:
            gain = d2 * ((1 - courant) ** 2 + courant ** 2 + 2 * courant * (1 - courant) * math.cos(k))
            return 1.0 / (1.0 - gain)

        upwind, _ = integrate.quad(inverse_gap, 0.0, math.pi, limit=200)
        upwind /= math.pi
        return 1.0 / ((1.0 - d2) * upwind)

    def noise_variance(self, spec: LineSpec) -> float:
        """
        E|xi|^2 of the increment added to one cell in one step.

        Args:
            spec: Line and ensemble parameters

        Returns:
            float: Increment variance; zero when the noise is switched off and
                inf when the growth over one step overflows
        """
        if not spec.noise:
            return 0.0
        strength = 2.0 * spec.gamma_s * spec.n_thermal
        kappa = spec.gamma_s - spec.ReG
        if kappa == 0:
            base = strength * spec.dt
        else:
            with np.errstate(over="ignore"):
                base = float(strength * -np.expm1(-2.0 * kappa * spec.dt) / (2.0 * kappa))
        return base * self._calibration(spec)

    def _generator(self, seed: int, trajectory: int) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trajectory,))))

    def _draws(self, generators: List[np.random.Generator], n_cells: int) -> np.ndarray:
        """Complex standard normals for the next NOISE_CHUNK steps, one stream per trajectory"""
        z = np.stack([rng.standard_normal((NOISE_CHUNK, n_cells, 2)) for rng in generators])
        return (z[..., 0] + 1j * z[..., 1]) / math.sqrt(2.0)

    def simulate(self, spec: LineSpec) -> LangevinProfile:
        """
        Run the ensemble and return <a+a>(x) with Monte-Carlo errors.

        Trajectory t draws from its own counter-based stream keyed by
        (seed, t). Trajectories are advanced LANGEVIN_BLOCK_SIZE at a time and
        reduced together at the end, so the block size never changes the result.

        Args:
            spec: Line and ensemble parameters

        Returns:
            LangevinProfile: Final-time occupation profile and a per-transit trace
        """
        if spec.courant > 1.0 + 1e-12:
            raise CFLViolationError(f"Courant number {spec.courant:.4f} exceeds 1")

        courant = min(spec.courant, 1.0)
        decay = self._decay(spec)
        variance = self.noise_variance(spec)
        noise_scale = math.sqrt(variance)
        boundary_scale = math.sqrt(spec.n_thermal_boundary)
        n_steps = spec.n_steps or 10 * max(spec.transit_steps, 1)
        trace_every = max(spec.transit_steps, 1)

        occupation = np.zeros((spec.n_traj, spec.n_cells))
        trace_sums = np.zeros((spec.n_traj, n_steps // trace_every))
        truncated = not (math.isfinite(decay) and math.isfinite(variance))
        steps_run = n_steps
        n_done = 0

        for start in range(0, spec.n_traj, LANGEVIN_BLOCK_SIZE):
            stop = min(start + LANGEVIN_BLOCK_SIZE, spec.n_traj)
            generators = [self._generator(spec.seed, t) for t in range(start, stop)]
            field = np.zeros((stop - start, spec.n_cells), dtype=complex)
            with np.errstate(over="ignore", invalid="ignore"):
                for step in range(n_steps):
                    if step % NOISE_CHUNK == 0:
                        draws = self._draws(generators, spec.n_cells)
                    z = draws[:, step % NOISE_CHUNK]
                    upstream = np.empty_like(field)
                    upstream[:, 1:] = field[:, :-1]
                    upstream[:, 0] = 0.0
                    field = ((1.0 - courant) * field + courant * upstream) * decay
                    if variance > 0:
                        field += noise_scale * z
                    field[:, 0] = boundary_scale * z[:, 0]
                    if truncated or (step + 1) % trace_every == 0:
                        if not np.all(np.isfinite(field)):
                            truncated = True
                            steps_run = min(steps_run, step + 1)
                            break
                        index = (step + 1) // trace_every - 1
                        if index < trace_sums.shape[1]:
                            trace_sums[start:stop, index] = np.sum(np.abs(field) ** 2, axis=1)
                occupation[start:stop] = np.abs(field) ** 2
            n_done = stop
            if truncated:
                break

        if truncated:
            logger.warning(f"Langevin run overflowed after {steps_run} steps; profile truncated")

        with np.errstate(over="ignore", invalid="ignore"):
            done = occupation[:n_done]
            mean = done.mean(axis=0)
            stderr = done.std(axis=0, ddof=1) / math.sqrt(n_done)
            trace: List[float] = list(trace_sums[:n_done].sum(axis=0) / (n_done * spec.n_cells))
        logger.info(f"Langevin ensemble of {n_done} trajectories over {steps_run} steps finished")
        return LangevinProfile(
            x=list(np.arange(spec.n_cells) * spec.dx),
            mean_occupation=list(mean),
            stderr=list(stderr),
            stationarity=trace,
            truncated=truncated,
            steps_run=steps_run,
        )


langevin_service = LangevinService()
