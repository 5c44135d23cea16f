"""First-order optimality checks: multiplier recovery and stationarity residuals.

At a candidate maximizer the per-point identity

    sum_{j != k} 1/(z_j - z_k) = sum_{pairs {j,k} active} lambda_{jk} (conj z_j - conj z_k)

must hold with nonnegative multipliers supported on the active pairs
(squared distance within tolerance of 4).  Multipliers are recovered by
nonnegative least squares on the 2n real equations; the stationarity
residual is the largest per-point modulus of the unexplained part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, SingularConfigError
from .geometry import PointConfig, pairwise_distances

Pair = tuple[int, int]


@dataclass(frozen=True)
class KKTReport:
    n: int
    active_set: tuple
    multipliers: dict
    stationarity_residual: float
    residual_norm2: float
    min_multiplier: float
    complementarity_violation: float
    zero_degree_points: tuple

    @property
    def structural_failure(self) -> bool:
        """True when some point has no incident active pair (stationarity impossible)."""
        return len(self.zero_degree_points) > 0


def active_set(config: PointConfig, rel_tol: float = 1e-9) -> list[Pair]:
    """Pairs with squared distance at least 4 (1 - rel_tol).

    The configuration is expected to be normalized to diameter 2.
    """
    n = config.n
    if n < 2:
        return []
    d2 = pairwise_distances(config.as_complex) ** 2
    cut = 4.0 * (1.0 - rel_tol)
    iu = np.triu_indices(n, 1)
    return [(int(i), int(j)) for i, j in zip(*iu) if d2[i, j] >= cut]


def stationarity_lhs(z: np.ndarray) -> np.ndarray:
    """Per-point sums L_k = sum_{j != k} 1/(z_j - z_k)."""
    diff = z[None, :] - z[:, None]  # [k, j] = z_j - z_k
    np.fill_diagonal(diff, 1.0)
    inv = 1.0 / diff
    np.fill_diagonal(inv, 0.0)
    return inv.sum(axis=1)


def _constraint_columns(z: np.ndarray, active) -> np.ndarray:
    """Complex (n, m) matrix whose column for pair {a,b} holds conj(z_b - z_a) at
    row a and its negative at row b."""
    n = len(z)
    M = np.zeros((n, len(active)), dtype=complex)
    for c, (a, b) in enumerate(active):
        M[a, c] = np.conj(z[b]) - np.conj(z[a])
        M[b, c] = np.conj(z[a]) - np.conj(z[b])
    return M


def _nnls_project_resolve(A: np.ndarray, y: np.ndarray, rounds: int) -> np.ndarray:
    """Least squares with nonnegativity by clamp-and-resolve iteration."""
    lam, *_ = np.linalg.lstsq(A, y, rcond=None)
    for _ in range(rounds):
        if (lam >= -1e-12).all():
            break
        support = lam > 1e-12
        refit = np.zeros_like(lam)
        if support.any():
            sol, *_ = np.linalg.lstsq(A[:, support], y, rcond=None)
            refit[support] = sol
        lam = refit
    return np.maximum(lam, 0.0)


def recover_multipliers(config: PointConfig, active) -> tuple[dict, float]:
    """Nonnegative multipliers best explaining the stationarity identity.

    Returns (multipliers keyed by pair, max per-point residual modulus).
    With an empty active set the residual is simply the size of the
    left-hand side: no stationarity is possible unless the gradient vanishes.
    """
    if not config.is_distinct():
        raise SingularConfigError("coincident points")
    z = config.as_complex
    L = stationarity_lhs(z)
    active = [(min(a, b), max(a, b)) for a, b in active]
    if not active:
        return {}, float(np.abs(L).max())
    M = _constraint_columns(z, active)
    A = np.vstack([M.real, M.imag])
    y = np.concatenate([L.real, L.imag])
    lam = _nnls_project_resolve(A, y, rounds=len(active) + 2)
    resid = L - M @ lam
    return dict(zip(active, lam.tolist())), float(np.abs(resid).max())


def residual_norms(config: PointConfig, multipliers: dict) -> tuple[float, float]:
    """(max per-point modulus, 2-norm) of the stationarity residual."""
    z = config.as_complex
    active = sorted(multipliers)
    lam = np.array([multipliers[e] for e in active])
    L = stationarity_lhs(z)
    resid = L if not active else L - _constraint_columns(z, active) @ lam
    return float(np.abs(resid).max()), float(np.linalg.norm(resid))


def verify(config: PointConfig, rel_tol: float = 1e-9) -> KKTReport:
    """Full first-order report: active set, multipliers, residuals, slackness."""
    if config.n < 2:
        raise InvalidConfigError("need n >= 2")
    if not config.is_distinct():
        raise SingularConfigError("coincident points")
    act = active_set(config, rel_tol)
    multipliers, _ = recover_multipliers(config, act)
    res_max, res_2 = residual_norms(config, multipliers)
    z = config.as_complex
    comp = 0.0
    for (a, b), lam in multipliers.items():
        g = abs(z[a] - z[b]) ** 2 - 4.0
        comp = max(comp, abs(lam * g))
    degree = {k: 0 for k in range(config.n)}
    for a, b in act:
        degree[a] += 1
        degree[b] += 1
    zero_deg = tuple(k for k, c in degree.items() if c == 0)
    return KKTReport(
        n=config.n,
        active_set=tuple(sorted(act)),
        multipliers=multipliers,
        stationarity_residual=res_max,
        residual_norm2=res_2,
        min_multiplier=min(multipliers.values(), default=0.0),
        complementarity_violation=comp,
        zero_degree_points=zero_deg,
    )
