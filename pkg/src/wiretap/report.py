"""Aggregated bound reports and parameter sweeps."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .analytic import ZeroCount, count_zeros_g_plus_kappa, empirical_count_bound
from .bounds import (
    CoefficientTable,
    avg_power_capacity_bound,
    coefficient_table,
    epi_lower_bound,
    explicit_support_bound,
    radius_R,
    support_lower_bound,
)
from .channel import ChannelParams, DiscreteDistribution
from .functionals import KktReport, kkt_report, mutual_information, secrecy_information
from .quadrature import QuadratureRule, gauss_hermite
from .solver import SolverConfig, solve

LEMMA5_CONVENTION = (
    "lower modulus bound = (c1*B - c2*A) * exp(-(B+A)^2 / (2 sigma1^2)) / sqrt(2 pi sigma1^2); "
    "the sigma1^2 factor of h is already inside c1 and c2, so no extra sigma1^2 is applied"
)

SWEEP_COLUMNS = (
    "A",
    "sigma1",
    "sigma2",
    "cs_lower",
    "cs_solved",
    "cs_upper",
    "radius_exact",
    "radius_relaxed",
    "support_size",
    "support_lower",
    "support_upper_full",
    "support_upper_leading",
    "zero_count",
    "converged",
)


@dataclass
class BoundsReport:
    """Every closed-form bound for one channel, plus data-dependent checks when an input is supplied.

    The optional fields are ``None`` unless a distribution was given.
    ``support_lower_informed`` uses the eavesdropper's mutual information
    of that distribution instead of zero.
    """

    channel: ChannelParams
    cs_upper_eq19: float
    cs_lower_epi: float
    radius_exact: float
    radius_relaxed: float
    coefficients: CoefficientTable
    support_upper_explicit: float
    support_upper_leading: float
    support_lower: int
    tijdeman_empirical: float | None = None
    tijdeman_empirical_grid: float | None = None
    zero_count: ZeroCount | None = None
    support_size: int | None = None
    support_lower_informed: int | None = None
    kkt: KktReport | None = None

    @property
    def cs_source(self) -> str:
        return self.coefficients.cs_source

    def to_dict(self) -> dict:
        return {
            "channel": self.channel.to_dict(),
            "units": "nats",
            "cs_source": self.cs_source,
            "cs_used": self.coefficients.cs_used,
            "cs_upper_eq19": self.cs_upper_eq19,
            "cs_lower_epi": self.cs_lower_epi,
            "radius_exact": self.radius_exact,
            "radius_relaxed": self.radius_relaxed,
            "coefficients": self.coefficients.to_dict(),
            "support_upper_explicit": self.support_upper_explicit,
            "support_upper_leading": self.support_upper_leading,
            "support_lower": self.support_lower,
            "tijdeman_empirical": self.tijdeman_empirical,
            "tijdeman_empirical_grid": self.tijdeman_empirical_grid,
            "zero_count": None if self.zero_count is None else self.zero_count.to_dict(),
            "support_size": self.support_size,
            "support_lower_informed": self.support_lower_informed,
            "kkt": None if self.kkt is None else self.kkt.to_dict(),
            "lemma5_convention": LEMMA5_CONVENTION,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundsReport":
        coeffs = dict(data["coefficients"])
        return cls(
            channel=ChannelParams.from_dict(data["channel"]),
            cs_upper_eq19=float(data["cs_upper_eq19"]),
            cs_lower_epi=float(data["cs_lower_epi"]),
            radius_exact=float(data["radius_exact"]),
            radius_relaxed=float(data["radius_relaxed"]),
            coefficients=CoefficientTable(**coeffs),
            support_upper_explicit=float(data["support_upper_explicit"]),
            support_upper_leading=float(data["support_upper_leading"]),
            support_lower=int(data["support_lower"]),
            tijdeman_empirical=data.get("tijdeman_empirical"),
            tijdeman_empirical_grid=data.get("tijdeman_empirical_grid"),
            zero_count=None if data.get("zero_count") is None else ZeroCount.from_dict(data["zero_count"]),
            support_size=data.get("support_size"),
            support_lower_informed=data.get("support_lower_informed"),
            kkt=None if data.get("kkt") is None else KktReport.from_dict(data["kkt"]),
        )


def bounds_report(
    channel: ChannelParams,
    cs: float | None = None,
    dist: DiscreteDistribution | None = None,
    rule: QuadratureRule | None = None,
    empirical: bool = True,
) -> BoundsReport:
    """Assemble a :class:`BoundsReport`.

    Without ``cs`` the plug-in value is the secrecy rate of ``dist`` when one
    is given (source ``solved``) and the average-power bound otherwise
    (source ``upper_bound_eq19``); radii grow with ``cs``, so the latter keeps
    every bound valid. ``empirical=False`` skips the costly modulus
    computations.
    """
    upper = avg_power_capacity_bound(channel)
    if cs is None:
        if dist is None:
            cs, source = upper, "upper_bound_eq19"
        else:
            cs, source = min(max(secrecy_information(dist, channel, rule), 0.0), upper), "solved"
    else:
        source = "solved"
    table = coefficient_table(channel, cs, source)
    leading, full = explicit_support_bound(channel, cs, table)
    report = BoundsReport(
        channel=channel,
        cs_upper_eq19=upper,
        cs_lower_epi=epi_lower_bound(channel),
        radius_exact=radius_R(channel, cs, "exact"),
        radius_relaxed=radius_R(channel, cs, "relaxed"),
        coefficients=table,
        support_upper_explicit=full,
        support_upper_leading=leading,
        support_lower=support_lower_bound(channel),
    )
    if dist is not None:
        report.support_size = dist.size
        report.kkt = kkt_report(dist, channel, rule)
        report.zero_count = count_zeros_g_plus_kappa(dist, channel, cs, rule)
        i_eve = max(mutual_information(dist, channel.sigma2, rule), 0.0)
        report.support_lower_informed = support_lower_bound(channel, i_eve)
        if empirical:
            bound = empirical_count_bound(dist, channel, report.radius_relaxed)
            report.tijdeman_empirical = bound.value_e1
            report.tijdeman_empirical_grid = bound.value
    return report


def _sweep_row(args) -> dict:
    sigma1, sigma2, amp, cfg, order = args
    channel = ChannelParams(sigma1, sigma2, amp)
    rule = gauss_hermite(order)
    result = solve(channel, cfg, rule)
    dist, cs = result.distribution, result.secrecy_capacity
    upper = avg_power_capacity_bound(channel)
    cs_plug = min(max(cs, 0.0), upper)
    leading, full = explicit_support_bound(channel, cs_plug)
    return {
        "A": amp,
        "sigma1": sigma1,
        "sigma2": sigma2,
        "cs_lower": epi_lower_bound(channel),
        "cs_solved": cs,
        "cs_upper": upper,
        "radius_exact": radius_R(channel, cs_plug, "exact"),
        "radius_relaxed": radius_R(channel, cs_plug, "relaxed"),
        "support_size": dist.size,
        "support_lower": support_lower_bound(channel),
        "support_upper_full": full,
        "support_upper_leading": leading,
        "zero_count": count_zeros_g_plus_kappa(dist, channel, cs_plug, rule).sign_changes,
        "converged": result.converged,
    }


def sweep(
    sigma1: float,
    sigma2: float,
    amps,
    cfg: SolverConfig | None = None,
    order: int = 96,
    jobs: int = 1,
) -> list[dict]:
    """Solve and bound one instance per amplitude; rows come back in the order of ``amps``."""
    cfg = cfg or SolverConfig()
    tasks = [(float(sigma1), float(sigma2), float(a), cfg, int(order)) for a in amps]
    # fail fast on invalid parameters before spawning workers
    for s1, s2, a, _, _ in tasks:
        ChannelParams(s1, s2, a)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_row, tasks))
    return [_sweep_row(t) for t in tasks]
