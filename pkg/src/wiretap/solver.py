"""Secrecy-capacity-achieving input distribution.

The objective ``I(X; Y1) - I(X; Y2)`` is concave in the input law because the
eavesdropper's channel is a degraded version of the legitimate one. The
solver alternates

1. exponentiated-gradient ascent on the masses for fixed locations,
2. ascent on the locations for fixed masses,
3. a KKT scan of ``xi`` over ``[-A, A]``; a new mass point is inserted at the
   maximizer whenever the gap exceeds ``eps_kkt``.

``brute_force_oracle`` is an independent exhaustive search over small
symmetric supports used to check the solver.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import LOG_2PI, ChannelParams, DiscreteDistribution
from .errors import BudgetError, NumericalError, ValidationError
from .functionals import DEFAULT_GRID, EPS_KKT, KktReport, kkt_report, secrecy_information, xi_function
from .quadrature import QuadratureRule, default_rule


@dataclass(frozen=True)
class SolverConfig:
    eps_kkt: float = EPS_KKT
    max_outer_iters: int = 200
    weight_iters: int = 500
    weight_step: float | None = None  # None: adaptive
    insert_weight: float = 1e-3
    prune_weight: float = 1e-7
    merge_gap: float | None = None  # None: 1e-4 * A
    grid_size: int = DEFAULT_GRID
    enforce_symmetry: bool = True
    seed: int = 0

    def __post_init__(self):
        for name in ("eps_kkt", "insert_weight", "prune_weight"):
            if not getattr(self, name) > 0.0:
                raise ValidationError(f"{name} must be positive")
        if self.weight_step is not None and not self.weight_step > 0.0:
            raise ValidationError("weight_step must be positive")
        if self.merge_gap is not None and not self.merge_gap > 0.0:
            raise ValidationError("merge_gap must be positive")
        if not self.insert_weight > self.prune_weight:
            raise ValidationError("insert_weight must exceed prune_weight")
        if self.max_outer_iters < 1 or self.weight_iters < 1:
            raise ValidationError("iteration limits must be positive")
        if self.grid_size < 101:
            raise ValidationError("grid_size must be at least 101")

    def gap_for(self, channel: ChannelParams) -> float:
        return self.merge_gap if self.merge_gap is not None else 1e-4 * channel.amp

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SolverConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown solver option(s): {sorted(unknown)}")
        return cls(**data)


@dataclass
class SolveResult:
    distribution: DiscreteDistribution
    secrecy_capacity: float
    kkt: KktReport
    outer_iters: int
    converged: bool
    trace: list[tuple[int, float, float, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "distribution": self.distribution.to_dict(),
            "secrecy_capacity": self.secrecy_capacity,
            "units": "nats",
            "kkt": self.kkt.to_dict(),
            "outer_iters": self.outer_iters,
            "converged": self.converged,
            "trace": [[int(i), float(v), float(g), int(n)] for i, v, g, n in self.trace],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SolveResult":
        return cls(
            distribution=DiscreteDistribution.from_dict(data["distribution"]),
            secrecy_capacity=float(data["secrecy_capacity"]),
            kkt=KktReport.from_dict(data["kkt"]),
            outer_iters=int(data["outer_iters"]),
            converged=bool(data["converged"]),
            trace=[(int(i), float(v), float(g), int(n)) for i, v, g, n in data["trace"]],
        )


class _FixedSupport:
    """``xi`` at the mass points as a function of the masses, locations held fixed.

    Component log-densities at every (point, node, component) triple are
    precomputed, so each evaluation is two log-sum-exps.
    """

    def __init__(self, points: np.ndarray, channel: ChannelParams, rule: QuadratureRule):
        self.points = points
        self.rule = rule
        self.offset = math.log(channel.sigma2 / channel.sigma1)
        self.comps = []
        for s in (channel.sigma1, channel.sigma2):
            u = points[:, None] + s * rule.nodes
            d = u[..., None] - points
            self.comps.append(-0.5 * (d / s) ** 2 - math.log(s) - 0.5 * LOG_2PI)

    def xi(self, probs: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            lp = np.log(probs)
        e = []
        for comp in self.comps:
            c = comp + lp
            m = c.max(axis=-1)
            e.append((m + np.log(np.exp(c - m[..., None]).sum(axis=-1))) @ self.rule.weights)
        out = self.offset - e[0] + e[1]
        if not np.all(np.isfinite(out)):
            raise NumericalError(f"non-finite xi at mass points {self.points.tolist()}")
        return out


_MAX_STEP = 1e4


def _symmetric_pairs(points: np.ndarray, tol: float) -> np.ndarray:
    """Index of the mirror image of each point (or -1)."""
    mirror = np.full(points.size, -1)
    for i, x in enumerate(points):
        j = int(np.argmin(np.abs(points + x)))
        if abs(points[j] + x) <= tol:
            mirror[i] = j
    return mirror


def optimize_weights(
    points,
    channel: ChannelParams,
    rule: QuadratureRule | None = None,
    cfg: SolverConfig | None = None,
    probs0=None,
) -> tuple[np.ndarray, np.ndarray]:
    """Masses maximizing the secrecy rate for fixed locations.

    Exponentiated-gradient ascent ``p_i <- p_i exp(eta (xi_i - I))`` with a
    step size that grows on success and is halved whenever the rate would
    decrease. Stops once ``max xi_i - min xi_i`` over the retained points is
    below ``eps_kkt / 10``. Returns ``(points, probs)`` with pruned points
    removed.
    """
    rule = rule or default_rule()
    cfg = cfg or SolverConfig()
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        raise ValidationError("optimize_weights needs at least one point")
    if points.size == 1:
        return points.copy(), np.ones(1)
    if np.any(np.diff(points) <= 0.0):
        raise ValidationError("points must be strictly increasing")
    probs = np.full(points.size, 1.0 / points.size) if probs0 is None else np.asarray(probs0, float).copy()
    probs = probs / probs.sum()
    mirror = _symmetric_pairs(points, 1e-12 * channel.amp) if cfg.enforce_symmetry else None
    symmetric = mirror is not None and np.all(mirror >= 0)

    def project(p):
        if symmetric:
            p = 0.5 * (p + p[mirror])
        return p / p.sum()

    probs = project(probs)
    fs = _FixedSupport(points, channel, rule)
    xi = fs.xi(probs)
    value = float(probs @ xi)
    eta = cfg.weight_step or 1.0
    tol = cfg.eps_kkt / 10.0
    for _ in range(cfg.weight_iters):
        live = probs >= cfg.prune_weight
        if xi[live].max() - xi[live].min() <= tol:
            break
        while True:
            expo = eta * (xi - value)
            trial = probs * np.exp(expo - expo.max())
            trial = project(trial)
            trial[trial < cfg.prune_weight * 1e-3] = 0.0
            trial = project(trial)
            xi_t = fs.xi(trial)
            value_t = float(trial @ xi_t)
            if value_t >= value - 1e-15 or cfg.weight_step is not None:
                break
            eta *= 0.5
            if eta < 1e-8:
                break
        if value_t < value - 1e-15:
            break
        probs, xi, value = trial, xi_t, value_t
        if cfg.weight_step is None:
            eta = min(2.0 * eta, _MAX_STEP)
    keep = probs >= cfg.prune_weight
    points, probs = points[keep], probs[keep]
    return points, probs / probs.sum()


def _dist(points, probs):
    return DiscreteDistribution.create(points, probs)


def _xi_derivatives(dist, channel, x, rule, step):
    xs = np.concatenate([x - step, x, x + step])
    v = np.asarray(xi_function(dist, channel, xs, rule)).reshape(3, -1)
    d1 = (v[2] - v[0]) / (2.0 * step)
    d2 = (v[2] - 2.0 * v[1] + v[0]) / step**2
    return d1, d2


def refine_locations(dist: DiscreteDistribution, channel: ChannelParams, rule: QuadratureRule, steps: int = 3):
    """Move mass points uphill in the secrecy rate, masses held fixed.

    The direction for point ``i`` is ``p_i xi'(x_i)`` scaled by
    ``1 / (p_i |xi''(x_i)|)``, i.e. a Newton step toward the nearest local
    maximum of ``xi``; a backtracking line search keeps the rate increasing.
    Locations are projected onto ``[-A, A]``.
    """
    amp = channel.amp
    h = 1e-6 * channel.sigma1
    value = secrecy_information(dist, channel, rule)
    for _ in range(steps):
        x, p = dist.points, dist.probs
        d1, d2 = _xi_derivatives(dist, channel, x, rule, h)
        curv = np.maximum(np.abs(d2), 1e-3 / channel.sigma1**2)
        direction = d1 / curv
        direction = np.clip(direction, -0.25 * channel.sigma1, 0.25 * channel.sigma1)
        # points pinned at the boundary stay there
        pinned = ((x >= amp) & (direction > 0)) | ((x <= -amp) & (direction < 0))
        direction[pinned] = 0.0
        if not np.any(direction):
            break
        alpha = 1.0
        improved = False
        while alpha > 1e-4:
            trial = np.clip(x + alpha * direction, -amp, amp)
            if np.all(np.diff(trial) > 0.0):
                cand = DiscreteDistribution(trial, p)
                v = secrecy_information(cand, channel, rule)
                if v > value:
                    dist, value, improved = cand, v, True
                    break
            alpha *= 0.5
        if not improved:
            break
    return dist


def _symmetrize(points, probs):
    pts = np.concatenate([points, -points])
    prs = np.concatenate([probs, probs]) * 0.5
    return pts, prs


def _merge(points, probs, gap):
    """Merge points closer than ``gap`` into their mass-weighted centroid."""
    order = np.argsort(points)
    points, probs = points[order], probs[order]
    out_x, out_p = [points[0]], [probs[0]]
    for x, p in zip(points[1:], probs[1:]):
        if x - out_x[-1] < gap:
            tot = out_p[-1] + p
            out_x[-1] = (out_x[-1] * out_p[-1] + x * p) / tot if tot > 0 else 0.5 * (out_x[-1] + x)
            out_p[-1] = tot
        else:
            out_x.append(x)
            out_p.append(p)
    return np.array(out_x), np.array(out_p)


def _tidy(points, probs, channel, cfg, gap=None):
    gap = cfg.gap_for(channel) if gap is None else gap
    points = np.clip(points, -channel.amp, channel.amp)
    if cfg.enforce_symmetry:
        points, probs = _symmetrize(points, probs)
        # snap near-zero pairs to an exact centre point
        points = np.where(np.abs(points) < 0.5 * cfg.gap_for(channel), 0.0, points)
    points, probs = _merge(points, probs, gap)
    if cfg.enforce_symmetry:
        points = 0.5 * (points - points[::-1])
        probs = 0.5 * (probs + probs[::-1])
    keep = probs >= cfg.prune_weight
    return points[keep], probs[keep] / probs[keep].sum()


#: Points closer than this (in units of sigma1) are consolidated into one.
CLUSTER_SCALE = 0.1


def _jump(dist, channel, rule, x_new, value):
    """Move the mass point nearest ``x_new`` (and its mirror) onto it if that raises the rate."""
    pts = dist.points.copy()
    i = int(np.argmin(np.abs(pts - x_new)))
    pts[i] = x_new
    j = int(np.argmin(np.abs(dist.points + dist.points[i])))
    if j != i and abs(dist.points[j] + dist.points[i]) <= 1e-12 * channel.amp:
        pts[j] = -x_new
    order = np.argsort(pts)
    pts, prs = pts[order], dist.probs[order]
    if np.any(np.diff(pts) <= 0.0):
        return None
    cand = DiscreteDistribution(pts, prs)
    return cand if secrecy_information(cand, channel, rule) > value else None


def _ascent_round(points, probs, channel, rule, cfg, gap):
    """Location refinement, re-weighting and tidying at merge distance ``gap``."""
    points, probs = _merge(points, probs, gap)
    dist = refine_locations(_dist(points, probs), channel, rule, steps=5)
    points, probs = optimize_weights(dist.points, channel, rule, cfg, dist.probs)
    dist = _dist(*_tidy(points, probs, channel, cfg, gap))
    return dist, secrecy_information(dist, channel, rule)


def solve(channel: ChannelParams, cfg: SolverConfig | None = None, rule: QuadratureRule | None = None) -> SolveResult:
    """Compute a KKT-certified secrecy-capacity-achieving distribution.

    Never raises on non-convergence; the result then has ``converged=False``
    and the full trace.
    """
    cfg = cfg or SolverConfig()
    rule = rule or default_rule()
    amp = channel.amp
    cluster = max(CLUSTER_SCALE * channel.sigma1, cfg.gap_for(channel))
    points = np.array([-amp, 0.0, amp])
    probs = np.array([0.25, 0.5, 0.25])
    trace = []
    converged = False
    it = 0
    for it in range(1, cfg.max_outer_iters + 1):
        points, probs = optimize_weights(points, channel, rule, cfg, probs)
        # near-duplicate points make the weight problem ill-conditioned, so
        # they are collapsed unless that would lower the rate
        floor = trace[-1][1] - 1e-10 if trace else -np.inf
        dist, value = _ascent_round(points, probs, channel, rule, cfg, cluster)
        if value < floor:
            dist, value = _ascent_round(points, probs, channel, rule, cfg, cfg.gap_for(channel))
        points, probs = dist.points.copy(), dist.probs.copy()
        report = kkt_report(dist, channel, rule, cfg.grid_size)
        trace.append((it, report.secrecy_info, report.gap, dist.size))
        if report.gap <= cfg.eps_kkt and report.max_residual() <= cfg.eps_kkt:
            converged = True
            break
        x_new = report.argmax_x
        if np.min(np.abs(points - x_new)) < cluster:
            moved = _jump(dist, channel, rule, x_new, report.secrecy_info)
            if moved is not None:
                points, probs = moved.points.copy(), moved.probs.copy()
                continue
        new_pts = [x_new, -x_new] if cfg.enforce_symmetry and abs(x_new) > 0.5 * cfg.gap_for(channel) else [x_new]
        w = cfg.insert_weight
        probs = np.concatenate([probs * (1.0 - w), np.full(len(new_pts), w / len(new_pts))])
        points = np.concatenate([points, new_pts])
        points, probs = _merge(points, probs, cfg.gap_for(channel))
    return SolveResult(
        distribution=dist,
        secrecy_capacity=report.secrecy_info,
        kkt=report,
        outer_iters=it,
        converged=converged,
        trace=trace,
    )


def _symmetric_candidates(n: int, amp: float, loc_step: float, prob_step: float):
    """Yield ``(points, probs)`` arrays for every symmetric ``n``-point candidate."""
    locs = np.arange(loc_step, amp, loc_step)
    locs = np.append(locs[locs < amp - 1e-12 * amp], amp)
    if n == 1:
        yield np.zeros((1, 1)), np.ones((1, 1))
    elif n == 2:
        yield np.stack([-locs, locs], axis=1), np.full((locs.size, 2), 0.5)
    elif n == 3:
        qs = np.arange(prob_step, 0.5, prob_step)
        a, q = np.meshgrid(locs, qs, indexing="ij")
        a, q = a.ravel(), q.ravel()
        yield np.stack([-a, np.zeros_like(a), a], axis=1), np.stack([q, 1 - 2 * q, q], axis=1)
    elif n == 4:
        qs = np.arange(prob_step, 0.5, prob_step)
        for i, b in enumerate(locs[:-1]):
            a = locs[i + 1 :]
            aa, q = np.meshgrid(a, qs, indexing="ij")
            aa, q = aa.ravel(), q.ravel()
            bb = np.full_like(aa, b)
            yield np.stack([-aa, -bb, bb, aa], axis=1), np.stack([q, 0.5 - q, 0.5 - q, q], axis=1)
    else:
        raise ValidationError("brute-force oracle supports at most 4 points")


def _candidate_count(n, amp, loc_step, prob_step):
    m = int(amp / loc_step) + 1
    k = max(int(0.5 / prob_step), 1)
    return {1: 1, 2: m, 3: m * k, 4: m * (m - 1) // 2 * k}[n]


def _batch_secrecy(points: np.ndarray, probs: np.ndarray, channel: ChannelParams, rule: QuadratureRule) -> np.ndarray:
    """Secrecy rate of many same-size candidates at once; rows are candidates."""
    with np.errstate(divide="ignore"):
        lp = np.log(probs)
    total = np.log(channel.sigma2 / channel.sigma1)
    out = np.full(points.shape[0], total)
    for sign, s in ((-1.0, channel.sigma1), (1.0, channel.sigma2)):
        u = points[:, :, None] + s * rule.nodes  # (B, n, K)
        d = u[..., None] - points[:, None, None, :]  # (B, n, K, n)
        c = lp[:, None, None, :] - 0.5 * (d / s) ** 2 - math.log(s) - 0.5 * LOG_2PI
        m = c.max(axis=-1)
        logf = m + np.log(np.exp(c - m[..., None]).sum(axis=-1))
        out = out + sign * np.einsum("bn,bnk,k->b", probs, logf, rule.weights)
    return out


def brute_force_oracle(
    channel: ChannelParams,
    max_points: int = 3,
    loc_step: float | None = None,
    prob_step: float = 0.01,
    rule: QuadratureRule | None = None,
    budget: int = 2_000_000,
) -> SolveResult:
    """Exhaustive search over symmetric supports of at most ``max_points`` points.

    Locations run over a grid of step ``loc_step`` (endpoint ``A`` always
    included), masses over a grid of step ``prob_step``.
    """
    rule = rule or default_rule()
    amp = channel.amp
    loc_step = loc_step if loc_step is not None else 1e-2 * amp
    if not 1 <= max_points <= 4:
        raise ValidationError("max_points must be between 1 and 4")
    if loc_step < 1e-3 * amp * (1 - 1e-9):
        raise ValidationError("loc_step must be at least 1e-3 * A")
    if not 0.0 < prob_step <= 0.5:
        raise ValidationError("prob_step must lie in (0, 0.5]")
    count = sum(_candidate_count(n, amp, loc_step, prob_step) for n in range(1, max_points + 1))
    if count > budget:
        raise BudgetError(f"brute-force search needs {count} evaluations, budget is {budget}")
    best = (-math.inf, None, None)
    chunk = max(1, 200_000 // (rule.order * max_points**2))
    for n in range(1, max_points + 1):
        for pts, prs in _symmetric_candidates(n, amp, loc_step, prob_step):
            for i in range(0, pts.shape[0], chunk):
                vals = _batch_secrecy(pts[i : i + chunk], prs[i : i + chunk], channel, rule)
                k = int(np.argmax(vals))
                if vals[k] > best[0]:
                    best = (float(vals[k]), pts[i + k], prs[i + k])
    dist = _dist(best[1], best[2])
    report = kkt_report(dist, channel, rule)
    return SolveResult(
        distribution=dist,
        secrecy_capacity=report.secrecy_info,
        kkt=report,
        outer_iters=0,
        converged=report.gap <= EPS_KKT,
        trace=[(0, report.secrecy_info, report.gap, dist.size)],
    )
