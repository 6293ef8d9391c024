"""Steady-state opinions and the influence quantities built on them.

Within a phase every node repeats::

    z <- W z + w0 * z_prev + wg * x - wb * y

which converges to ``(I - W)^-1 (w0 * z_prev + wg * x - wb * y)`` whenever
each row of ``W`` has absolute sum below one. The inverse ``delta`` and the
vectors derived from it (``r``, ``s``, ``b``, ``c``) are collected in a
:class:`CentralityBundle`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from .errors import ConvergenceError, NumericalError, ValidationError
from .graph import Network

#: Max-norm bound on ``(I - W) @ delta - I``.
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CentralityBundle:
    """Influence quantities of one network.

    Attributes
    ----------
    delta : (n, n) ndarray
        ``(I - W)^-1``; ``delta[i, j]`` is the walk-summed influence of ``j`` on ``i``.
    r : (n,) ndarray
        Column sums of ``delta`` (Katz-style influencing power).
    s : (n,) ndarray
        Two-phase Katz centrality, ``s[i] = sum_j r[j] w0[j] delta[j, i]``.
    b : (n, n) ndarray
        ``b[j, i] = r[j] w0[j] delta[j, i]``.
    c : (n,) ndarray
        ``w0 * z0``.
    w0 : (n,) ndarray
        Self-weights the bundle was computed with.
    """

    delta: np.ndarray
    r: np.ndarray
    s: np.ndarray
    b: np.ndarray
    c: np.ndarray
    w0: np.ndarray

    @property
    def n(self) -> int:
        return self.r.shape[0]

    @cached_property
    def bc(self) -> np.ndarray:
        """``bc[j] = sum_i b[j, i] c[i]``."""
        return self.b @ self.c

    @cached_property
    def constant(self) -> float:
        """Opinion sum after two phases without any investment."""
        return float(self.c @ self.s)

    def with_bias(self, z0) -> "CentralityBundle":
        """Same network, different initial bias: only ``c`` changes."""
        z0 = np.broadcast_to(np.asarray(z0, dtype=float), (self.n,))
        return CentralityBundle(self.delta, self.r, self.s, self.b, self.w0 * z0, self.w0)


@dataclass(frozen=True, eq=False)
class PhaseInputs:
    """Bias entering a phase and both camps' investments during it."""

    prior_opinion: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        for name in ("prior_opinion", "x", "y"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.prior_opinion.shape
        if self.x.shape != n or self.y.shape != n:
            raise ValidationError("prior_opinion, x and y must have equal length")
        if (self.x < 0).any() or (self.y < 0).any():
            raise ValidationError("investments must be nonnegative")


def camp_weights(network: Network, prior_opinion) -> tuple[np.ndarray, np.ndarray]:
    """Weightage each node gives to the good and bad camp in a phase.

    The larger of the two is computed directly and the smaller as the
    remainder, so ``wg + wb == theta`` holds exactly whenever
    ``|w0 * z| <= 1``.
    """
    lean = network.w0 * np.asarray(prior_opinion, dtype=float)
    if lean.shape != (network.n,):
        raise ValidationError(f"prior opinion must have length {network.n}")
    theta = network.theta
    wg = np.empty_like(lean)
    wb = np.empty_like(lean)
    pos = lean >= 0
    wg[pos] = theta[pos] * (1.0 + lean[pos]) / 2.0
    wb[pos] = theta[pos] - wg[pos]
    wb[~pos] = theta[~pos] * (1.0 - lean[~pos]) / 2.0
    wg[~pos] = theta[~pos] - wb[~pos]
    return wg, wb


def _phase_source(network: Network, inputs: PhaseInputs) -> np.ndarray:
    if inputs.prior_opinion.shape != (network.n,):
        raise ValidationError(f"phase inputs must have length {network.n}")
    wg, wb = camp_weights(network, inputs.prior_opinion)
    return network.w0 * inputs.prior_opinion + wg * inputs.x - wb * inputs.y


def steady_state(network: Network, bundle: CentralityBundle, inputs: PhaseInputs) -> np.ndarray:
    """Converged opinions at the end of a phase."""
    if bundle.n != network.n:
        raise ValidationError("bundle and network sizes differ")
    return bundle.delta @ _phase_source(network, inputs)


def iterate_to_convergence(network: Network, inputs: PhaseInputs, tol: float = 1e-12, max_iter: int = 100_000) -> np.ndarray:
    """Run the update rule from ``z = prior_opinion`` until a step is below ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    source = _phase_source(network, inputs)
    W = network.W
    z = inputs.prior_opinion.copy()
    for _ in range(max_iter):
        z_next = W @ z + source
        if not np.all(np.isfinite(z_next)):
            break
        step = np.max(np.abs(z_next - z), initial=0.0)
        z = z_next
        if step < tol:
            return z
    raise ConvergenceError(f"no convergence within {max_iter} iterations (tol={tol})")


def centralities(network: Network) -> CentralityBundle:
    """Invert ``I - W`` once and derive ``r``, ``s``, ``b`` and ``c``."""
    n = network.n
    M = np.eye(n) - network.W.toarray()
    with warnings.catch_warnings():
        warnings.simplefilter("error", sla.LinAlgWarning)
        try:
            lu, piv = sla.lu_factor(M, check_finite=True)
            delta = sla.lu_solve((lu, piv), np.eye(n))
        except (sla.LinAlgError, sla.LinAlgWarning, ValueError) as exc:
            raise NumericalError(f"I - W is singular or ill-conditioned: {exc}") from exc
    residual = np.max(np.abs(M @ delta - np.eye(n)))
    if not np.isfinite(residual) or residual > RESIDUAL_TOL:
        raise NumericalError(f"inverse residual {residual:.3e} exceeds {RESIDUAL_TOL:g}")

    r = delta.sum(axis=0)
    b = (r * network.w0)[:, None] * delta
    s = b.sum(axis=0)
    c = network.w0 * network.z0
    return CentralityBundle(delta=delta, r=r, s=s, b=b, c=c, w0=network.w0.copy())


def _check_vectors(n: int, *vectors) -> list[np.ndarray]:
    out = []
    for v in vectors:
        v = np.asarray(v, dtype=float)
        if v.shape != (n,):
            raise ValidationError(f"investment vectors must have length {n}, got {v.shape}")
        out.append(v)
    return out


def two_phase_objective(network: Network, bundle: CentralityBundle, x1, y1, x2, y2) -> float:
    """Sum of opinions after phase two, from the closed form in ``r, s, b, c``."""
    x1, y1, x2, y2 = _check_vectors(network.n, x1, y1, x2, y2)
    half = network.theta / 2.0
    c, r, s, bc = bundle.c, bundle.r, bundle.s, bundle.bc
    # influence routed through phase-two investments
    ahead = s + bundle.b.T @ (half * (x2 + y2))
    return float(
        bundle.constant
        + x2 @ (half * (bc + r))
        + y2 @ (half * (bc - r))
        + x1 @ (half * (1.0 + c) * ahead)
        - y1 @ (half * (1.0 - c) * ahead)
    )


def simulate_two_phases(network: Network, bundle: CentralityBundle, x1, y1, x2, y2) -> tuple[np.ndarray, np.ndarray]:
    """Opinion vectors after phase one and phase two, phase by phase."""
    x1, y1, x2, y2 = _check_vectors(network.n, x1, y1, x2, y2)
    z1 = steady_state(network, bundle, PhaseInputs(network.z0, x1, y1))
    z2 = steady_state(network, bundle, PhaseInputs(z1, x2, y2))
    return z1, z2


def phase_one_sum(network: Network, bundle: CentralityBundle, x1, y1) -> float:
    """Opinion sum after phase one."""
    x1, y1 = _check_vectors(network.n, x1, y1)
    wg, wb = camp_weights(network, network.z0)
    return float(bundle.r @ (bundle.c + wg * x1 - wb * y1))
