"""Constrained maximization of log Delta over diameter-bounded configurations.

Each start perturbs a regular n-gon and climbs an augmented-Lagrangian
merit function in which every pair carries the inequality |z_i - z_j|^2 <= 4
(equality targets on prescribed graph edges).  The multiplier estimates then
seed an active-set Newton solve of the first-order system, which polishes
the configuration to stationarity near machine precision.  Starts are
independent and reproducible from (seed, start index).
"""

from __future__ import annotations

import concurrent.futures
import math
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kkt
from .diamgraph import DiameterGraph
from .errors import InvalidConfigError
from .geometry import PointConfig, complex_gradient, log_delta_bar, pairwise_distances

TERM_CONVERGED = "gradient-converged"
TERM_ITERATION_CAP = "iteration-cap"
TERM_STALLED = "stalled"


@dataclass(frozen=True)
class OptimizeOptions:
    seed: int = 0
    starts: int = 32
    max_iters: int = 2000
    step_init: float = 1e-2
    penalty_init: float = 10.0
    penalty_growth: float = 10.0
    tol_gradient: float = 1e-8
    tol_constraint: float = 1e-10
    graph: Optional[DiameterGraph] = None
    threads: int = 1
    record_trace: bool = False

    def __post_init__(self):
        if self.starts < 1:
            raise InvalidConfigError("starts must be >= 1")
        if min(self.tol_gradient, self.tol_constraint, self.step_init) <= 0:
            raise InvalidConfigError("tolerances and step must be positive")
        if self.penalty_growth <= 1.0:
            raise InvalidConfigError("penalty growth must exceed 1")


@dataclass(frozen=True)
class StartSummary:
    index: int
    log_delta_bar: float
    kkt_residual: float
    iterations: int
    termination: str
    active_set: tuple
    trace: tuple = ()


@dataclass(frozen=True)
class OptimizeResult:
    config: PointConfig
    log_delta_bar: float
    iterations: int
    termination: str
    active_set: tuple
    kkt_residual: float
    multipliers: dict
    starts: tuple
    requested_graph: Optional[DiameterGraph] = None
    achieved_matches_request: Optional[bool] = None
    graph_infeasible: bool = False

    @property
    def delta_bar(self) -> float:
        return math.exp(self.log_delta_bar)


def _rescale(z: np.ndarray) -> np.ndarray:
    d = pairwise_distances(z)
    return z * (2.0 / d.max())


def _start_config(n: int, seed: int, index: int, eq_edges=None) -> np.ndarray:
    """Perturbed regular n-gon: radial noise U(-0.1, 0.1), angular U(-pi/n, pi/n).

    With target edges, the points are first assigned to polygon slots so the
    requested pairs start long (a greedy swap search); otherwise labels are
    irrelevant and the identity assignment is used.
    """
    rng = np.random.default_rng([seed, index])
    radius = 1.0 if n % 2 == 0 else 1.0 / math.cos(math.pi / (2 * n))
    rad = rng.uniform(-0.1, 0.1, n)
    ang = rng.uniform(-math.pi / n, math.pi / n, n)
    z = (radius + rad) * np.exp(1j * (2 * math.pi * np.arange(n) / n + ang))
    if eq_edges:
        slots = np.exp(1j * (2 * math.pi * np.arange(n) / n))
        perm = _edge_stretching_permutation(n, eq_edges, slots, rng)
        z = z[perm]
    return _rescale(z)


def _edge_stretching_permutation(n, edges, slots, rng):
    """Assignment of graph vertices to polygon slots making the edges long.

    Hill-climbs total edge length over vertex-slot swaps from a random
    assignment; deterministic given the generator state.
    """
    perm = rng.permutation(n)

    def edge_len(p):
        return sum(abs(slots[p[a]] - slots[p[b]]) for a, b in edges)

    best = edge_len(perm)
    improved = True
    while improved:
        improved = False
        for i in range(n):
            for j in range(i + 1, n):
                perm[i], perm[j] = perm[j], perm[i]
                val = edge_len(perm)
                if val > best + 1e-12:
                    best = val
                    improved = True
                else:
                    perm[i], perm[j] = perm[j], perm[i]
    return perm


def _merit_value(z, lam, mu, eq_mask, eye):
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    q = np.abs(diff) ** 2
    g = q - 4.0
    logq = np.log(q)
    np.fill_diagonal(logq, 0.0)
    f = logq.sum() / 2.0
    pen = np.where(eq_mask, lam * g + 0.5 * mu * g * g,
                   (np.maximum(0.0, lam + mu * g) ** 2 - lam * lam) / (2.0 * mu))
    pen[eye] = 0.0
    return f - pen.sum() / 2.0


def _merit_gradient(z, lam, mu, eq_mask, eye):
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    q = np.abs(diff) ** 2
    g = q - 4.0
    w = 2.0 * diff / q
    np.fill_diagonal(w, 0.0)
    grad_f = w.sum(axis=1)
    coef = np.where(eq_mask, lam + mu * g, np.maximum(0.0, lam + mu * g))
    coef[eye] = 0.0
    return grad_f - (2.0 * coef * diff).sum(axis=1)


def _al_phase(z, eq_mask, opts: OptimizeOptions, trace_out=None):
    """Augmented-Lagrangian ascent; returns (z, multiplier matrix, iterations)."""
    n = len(z)
    eye = np.eye(n, dtype=bool)
    lam = np.zeros((n, n))
    mu = opts.penalty_init
    viol_prev = math.inf
    used = 0
    outer_cap = 12
    for outer in range(outer_cap):
        alpha = opts.step_init
        inner_cap = min(150, max(0, opts.max_iters - used))
        phi = _merit_value(z, lam, mu, eq_mask, eye)
        for _ in range(inner_cap):
            used += 1
            d = _merit_gradient(z, lam, mu, eq_mask, eye)
            nd = np.abs(d).max()
            if nd < max(1e-9, 1e-3 / mu):
                break
            direction = d / nd
            step = alpha
            accepted = False
            for _ in range(50):
                zt = z + step * direction
                phi_t = _merit_value(zt, lam, mu, eq_mask, eye)
                if phi_t > phi:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
            z, phi = zt, phi_t
            if trace_out is not None:
                zp = _rescale(z)
                trace_out.append((outer, used, float(phi), float(log_delta_bar(
                    PointConfig.from_complex(zp)))))
            alpha = min(step * 2.0, 1.0)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        g = np.abs(diff) ** 2 - 4.0
        viol = np.where(eq_mask, np.abs(g), np.maximum(0.0, g))
        viol[eye] = 0.0
        v = float(viol.max())
        lam = np.where(eq_mask, lam + mu * g, np.maximum(0.0, lam + mu * g))
        lam[eye] = 0.0
        if v < opts.tol_constraint:
            break
        if v > 0.25 * viol_prev:
            mu *= opts.penalty_growth
        viol_prev = v
        if used >= opts.max_iters:
            break
    return z, lam, used


def _constraint_matrix(z, act):
    n = len(z)
    G = np.zeros((2 * n, len(act)))
    for c, (a, b) in enumerate(act):
        w = z[a] - z[b]
        G[a, c] = 2 * w.real
        G[n + a, c] = 2 * w.imag
        G[b, c] = -2 * w.real
        G[n + b, c] = -2 * w.imag
    return G


def _grad_real(z):
    g = complex_gradient(z)
    return np.concatenate([g.real, g.imag])


def _nnls(A, y, rounds):
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


def _kkt_F(z, lam, act):
    G = _constraint_matrix(z, act)
    gv = np.array([abs(z[a] - z[b]) ** 2 - 4.0 for a, b in act])
    return np.concatenate([_grad_real(z) - G @ lam, gv]), G


def _hessian_f(z):
    n = len(z)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    q = np.abs(diff) ** 2
    iq = 1.0 / q
    np.fill_diagonal(iq, 0.0)
    wx, wy = diff.real, diff.imag
    axx = 2 * iq - 4 * wx * wx * iq ** 2
    axy = -4 * wx * wy * iq ** 2
    ayy = 2 * iq - 4 * wy * wy * iq ** 2
    H = np.zeros((2 * n, 2 * n))
    H[:n, :n] = -axx
    H[:n, n:] = -axy
    H[n:, :n] = -axy
    H[n:, n:] = -ayy
    idx = np.arange(n)
    H[idx, idx] = axx.sum(axis=1)
    H[idx, n + idx] = axy.sum(axis=1)
    H[n + idx, idx] = axy.sum(axis=1)
    H[n + idx, n + idx] = ayy.sum(axis=1)
    return H


def _newton_kkt(z, act, lam_seed=None, keep=frozenset(), max_rounds=20, tol=1e-11):
    """Active-set Newton solve of the stationarity system.

    Pairs in ``keep`` stay in the working set even with negative multipliers
    (prescribed graph edges are equality targets).  Returns
    (z, active, multipliers, converged, newton_iters).
    """
    n = len(z)
    act = sorted(set(act))
    lam = None
    if lam_seed:
        lam = np.array([lam_seed.get(e, 0.0) for e in act])
    total_its = 0
    for _ in range(max_rounds):
        if lam is None or len(lam) != len(act):
            lam = _nnls(_constraint_matrix(z, act), _grad_real(z), len(act) + 2)
        zz, lm = z.copy(), lam.copy()
        converged = False
        for _ in range(100):
            total_its += 1
            F, G = _kkt_F(zz, lm, act)
            nf = np.abs(F).max()
            if nf < tol:
                converged = True
                break
            H = _hessian_f(zz)
            for c, (a, b) in enumerate(act):
                s = 2.0 * lm[c]
                for p, qv, sg in ((a, a, 1), (b, b, 1), (a, b, -1), (b, a, -1)):
                    H[p, qv] -= s * sg
                    H[n + p, n + qv] -= s * sg
            m = len(act)
            J = np.zeros((2 * n + m, 2 * n + m))
            J[:2 * n, :2 * n] = H
            J[:2 * n, 2 * n:] = -G
            J[2 * n:, :2 * n] = G.T
            du, *_ = np.linalg.lstsq(J, -F, rcond=None)
            t = 1.0
            accepted = False
            for _ in range(45):
                zt = zz + (du[:n] + 1j * du[n:2 * n]) * t
                lt = lm + du[2 * n:] * t
                dm = pairwise_distances(zt)
                np.fill_diagonal(dm, 1.0)
                if dm.min() < 1e-7:
                    t *= 0.5
                    continue
                F2, _ = _kkt_F(zt, lt, act)
                if np.abs(F2).max() < nf * (1 - 1e-4 * t) + 1e-15:
                    zz, lm = zt, lt
                    accepted = True
                    break
                t *= 0.5
            if not accepted:
                break
        if not converged:
            return z, act, None, False, total_its
        # working-set adjustment: add the worst violated pair, else drop the
        # most negative removable multiplier
        d = pairwise_distances(zz)
        worst, wv = None, 1e-10
        iu = np.triu_indices(n, 1)
        sact = set(act)
        for i, j in zip(*iu):
            e = (int(i), int(j))
            if e not in sact and d[i, j] > 2.0 + wv:
                wv = d[i, j] - 2.0
                worst = e
        if worst is not None:
            act = sorted(sact | {worst})
            z, lam = zz, None
            continue
        removable = [c for c, e in enumerate(act) if e not in keep and lm[c] < -1e-9]
        if removable:
            drop = act[min(removable, key=lambda c: lm[c])]
            act = sorted(sact - {drop})
            z, lam = zz, None
            continue
        return zz, act, lm, True, total_its
    return z, act, None, False, total_its


def _solve_start(n, index, opts: OptimizeOptions, eq_edges):
    z = _start_config(n, opts.seed, index, eq_edges)
    eq_mask = np.zeros((n, n), dtype=bool)
    keep = frozenset()
    if eq_edges:
        keep = frozenset((min(a, b), max(a, b)) for a, b in eq_edges)
        for a, b in keep:
            eq_mask[a, b] = eq_mask[b, a] = True
    trace = [] if opts.record_trace else None
    z, lam_matrix, used = _al_phase(z, eq_mask, opts, trace_out=trace)

    d = pairwise_distances(z)
    iu = np.triu_indices(n, 1)
    act = set(keep)
    for i, j in zip(*iu):
        if lam_matrix[i, j] > 1e-7 or d[i, j] >= 2.0 - 1e-5:
            act.add((int(i), int(j)))
    lam_seed = {(int(i), int(j)): float(lam_matrix[i, j]) for i, j in zip(*iu)}
    z2, act2, lm, ok, newton_its = _newton_kkt(z, act, lam_seed, keep=keep)
    iterations = used + newton_its

    z_final = _rescale(z2 if ok else z)
    config = PointConfig.from_complex(z_final)
    ldb = log_delta_bar(config)
    final_active = kkt.active_set(config, 1e-9)
    multipliers, residual = kkt.recover_multipliers(config, final_active)
    if not ok:
        term = TERM_ITERATION_CAP if iterations >= opts.max_iters else TERM_STALLED
    else:
        term = TERM_CONVERGED if residual < opts.tol_gradient else TERM_STALLED
    summary = StartSummary(
        index=index, log_delta_bar=ldb, kkt_residual=residual,
        iterations=iterations, termination=term,
        active_set=tuple(sorted(final_active)),
        trace=tuple(trace) if trace else (),
    )
    return summary, config, multipliers, ok


def _run(n: int, opts: OptimizeOptions, eq_edges):
    if n < 3:
        raise InvalidConfigError("need n >= 3")
    indices = range(opts.starts)
    threads = opts.threads
    if threads <= 0:
        threads = int(os.environ.get("POLYDISC_THREADS", "1") or 1)
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda s: _solve_start(n, s, opts, eq_edges), indices))
    else:
        results = [_solve_start(n, s, opts, eq_edges) for s in indices]

    best = None
    for summary, config, multipliers, ok in results:
        key = (summary.log_delta_bar, -summary.kkt_residual)
        if best is None or key > best[0]:
            best = (key, summary, config, multipliers, ok)
    _, summary, config, multipliers, ok = best
    total_iters = sum(r[0].iterations for r in results)
    return results, summary, config, multipliers, ok, total_iters


def maximize_free(n: int, opts: OptimizeOptions = OptimizeOptions()) -> OptimizeResult:
    """Best local maximizer over seeded multi-starts, all pairs constrained to <= 2.

    A target graph set in the options delegates to maximize_with_graph.
    """
    if opts.graph is not None:
        return maximize_with_graph(n, opts.graph, opts)
    results, summary, config, multipliers, ok, total = _run(n, opts, eq_edges=None)
    return OptimizeResult(
        config=config,
        log_delta_bar=summary.log_delta_bar,
        iterations=total,
        termination=summary.termination,
        active_set=summary.active_set,
        kkt_residual=summary.kkt_residual,
        multipliers=multipliers,
        starts=tuple(r[0] for r in results),
    )


def maximize_with_graph(n: int, graph: DiameterGraph,
                        opts: OptimizeOptions = OptimizeOptions()) -> OptimizeResult:
    """Like maximize_free but with |z_i - z_j| = 2 targeted on the graph edges.

    The result records whether the achieved active set equals the requested
    edge set; an unreachable edge set yields a flagged result, not an error.
    """
    if graph.n != n:
        raise InvalidConfigError("graph order does not match n")
    if len(graph.edges) > n:
        raise InvalidConfigError("a realizable diameter graph has at most n edges")
    results, summary, config, multipliers, ok, total = _run(n, opts, eq_edges=graph.edges)
    achieved = set(summary.active_set)
    requested = set(graph.edges)
    infeasible = not ok or not requested <= achieved
    return OptimizeResult(
        config=config,
        log_delta_bar=summary.log_delta_bar,
        iterations=total,
        termination=summary.termination,
        active_set=summary.active_set,
        kkt_residual=summary.kkt_residual,
        multipliers=multipliers,
        starts=tuple(r[0] for r in results),
        requested_graph=graph,
        achieved_matches_request=achieved == requested,
        graph_infeasible=infeasible,
    )


def sweep_graphs(n: int, opts: OptimizeOptions = OptimizeOptions(),
                 graphs=None, max_n: int = 12):
    """Run the graph-targeted optimizer over all admissible diameter graphs.

    Returns (graph, result) pairs sorted by decreasing log Delta-bar.
    """
    from .diamgraph import enumerate_caterpillars, enumerate_unicyclic_candidates
    if n > max_n:
        raise InvalidConfigError(f"sweep capped at n = {max_n}")
    if graphs is None:
        graphs = enumerate_caterpillars(n) + enumerate_unicyclic_candidates(n)
    ranked = [(g, maximize_with_graph(n, g, opts)) for g in graphs]
    # near-ties in value go to the graph that was achieved exactly, then to
    # the cleaner stationary point
    ranked.sort(key=lambda item: (round(item[1].log_delta_bar, 9),
                                  bool(item[1].achieved_matches_request),
                                  -item[1].kkt_residual), reverse=True)
    return ranked


def gauge_fix(config: PointConfig) -> PointConfig:
    """Canonical pose: centroid at the origin, the farthest point on the
    positive x-axis, and the second-farthest with nonnegative y."""
    z = config.as_complex
    z = z - z.mean()
    r = np.abs(z)
    order = np.argsort(-r, kind="stable")
    far = order[0]
    if r[far] > 0:
        z = z * np.exp(-1j * np.angle(z[far]))
    second = order[1] if len(order) > 1 else order[0]
    if z[second].imag < 0:
        z = np.conj(z)
    return PointConfig.from_complex(z)


def congruent(a: PointConfig, b: PointConfig, tol: float = 1e-5) -> bool:
    """True iff the two point sets agree up to translation/rotation/reflection.

    Tries every alignment of a far point of one set onto a far point of the
    other and greedily matches the rest within per-coordinate tolerance.
    """
    if a.n != b.n:
        return False
    za = a.as_complex - a.as_complex.mean()
    zb = b.as_complex - b.as_complex.mean()
    rb = np.abs(zb)
    ref = int(np.argmax(rb))
    if rb[ref] == 0.0:
        return bool(np.abs(za).max() <= tol)
    candidates = [i for i in range(a.n) if abs(abs(za[i]) - rb[ref]) <= 2 * tol]
    for i in candidates:
        if abs(za[i]) == 0:
            continue
        for flip in (False, True):
            zt = np.conj(za) if flip else za
            zt = zt * (zb[ref] / (np.conj(za[i]) if flip else za[i]))
            used = [False] * b.n
            good = True
            for p in zt:
                hit = None
                for j in range(b.n):
                    if used[j]:
                        continue
                    dd = p - zb[j]
                    if abs(dd.real) <= tol and abs(dd.imag) <= tol:
                        hit = j
                        break
                if hit is None:
                    good = False
                    break
                used[hit] = True
            if good:
                return True
    return False
