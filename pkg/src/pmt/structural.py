"""Structural capacity checks used to verify deflection thresholds.

The required structural number for a design traffic level is solved
from the flexible pavement design equation; the effective structural
number of the in-service pavement is estimated from thickness and the
area under the deflection profile. Their ratio (SNR) near 1.0 around a
candidate D0 threshold supports that threshold. The check fits
ln(SNR) = ln(a) + b * D0 and compares the D0 where the fit crosses
SNR = 1 against the threshold under test.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import DeflectionBasin, FwdTestPoint, MICRONS_PER_MIL, RoadClass
from .errors import (
    IncompletePointError,
    InvalidRecordError,
    UndefinedSnError,
    UnsolvableDesignError,
)

DELTA_PSI = 1.701
STANDARD_ERROR = 0.35  # overall standard deviation S0 in the design equation
OUTER_SENSOR_OFFSET_IN = 60.0
MILS_PER_IN = 1000.0

SN_BRACKET = (0.1, 20.0)
SN_TOLERANCE = 1e-6


@dataclass(frozen=True)
class DesignInputs:
    """Per-class design traffic and reliability for the design equation."""

    esal: float  # 18-kip equivalent single axle loads over the design life
    z_r: float  # standard normal deviate at the design reliability

    def __post_init__(self):
        if not (math.isfinite(self.esal) and self.esal > 0):
            raise InvalidRecordError(f"esal must be positive: {self.esal}")
        if not math.isfinite(self.z_r):
            raise InvalidRecordError(f"z_r must be finite: {self.z_r}")


CLASS_DESIGN = {
    RoadClass.STATE_ROAD: DesignInputs(esal=1e6, z_r=-1.037),
    RoadClass.US_HIGHWAY: DesignInputs(esal=4e6, z_r=-1.282),
    RoadClass.INTERSTATE: DesignInputs(esal=1e7, z_r=-1.645),
}


def subgrade_modulus(load_lbf: float, d_outer_um: float) -> float:
    """Back-calculated subgrade resilient modulus in psi.

    M_R = 0.24 * P / (d_r * r) with the load in pounds-force and the
    outer-sensor deflection and its offset both in inches.
    """
    if not (math.isfinite(load_lbf) and load_lbf > 0):
        raise InvalidRecordError(f"load must be positive: {load_lbf}")
    if not (math.isfinite(d_outer_um) and d_outer_um > 0):
        raise InvalidRecordError(f"outer deflection must be positive: {d_outer_um}")
    d_in = d_outer_um / MICRONS_PER_MIL / MILS_PER_IN
    return 0.24 * load_lbf / (d_in * OUTER_SENSOR_OFFSET_IN)


def design_equation_residual(sn: float, m_r_psi: float, design: DesignInputs) -> float:
    """Design equation rearranged to zero at the required structural number.

    Positive residual means sn carries more traffic than the design
    level; the residual is increasing in sn over the solver bracket.
    """
    if sn <= 0:
        raise InvalidRecordError(f"sn must be positive: {sn}")
    serviceability = math.log10(DELTA_PSI / 2.7) / (0.4 + 1094.0 / (sn + 1.0) ** 5.19)
    return (
        design.z_r * STANDARD_ERROR
        + 9.36 * math.log10(sn + 1.0)
        - 0.2
        + serviceability
        + 2.32 * math.log10(m_r_psi)
        - 8.07
        - math.log10(design.esal)
    )


def sn_required(
    m_r_psi: float,
    design: DesignInputs,
    bracket: tuple[float, float] = SN_BRACKET,
    tolerance: float = SN_TOLERANCE,
) -> float:
    """Solve the design equation for the required structural number.

    Bisection over the bracket, run until the interval is narrower than
    the tolerance and the residual at the midpoint is within it as well.
    """
    if not (math.isfinite(m_r_psi) and m_r_psi > 0):
        raise InvalidRecordError(f"m_r must be positive: {m_r_psi}")
    lo, hi = bracket
    f_lo = design_equation_residual(lo, m_r_psi, design)
    f_hi = design_equation_residual(hi, m_r_psi, design)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise UnsolvableDesignError(
            f"no sign change on [{lo}, {hi}]: f({lo})={f_lo:.4g}, f({hi})={f_hi:.4g}"
        )
    mid = 0.5 * (lo + hi)
    f_mid = design_equation_residual(mid, m_r_psi, design)
    for _ in range(200):
        if hi - lo < tolerance and abs(f_mid) < tolerance:
            break
        if f_mid == 0.0:
            break
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        mid = 0.5 * (lo + hi)
        f_mid = design_equation_residual(mid, m_r_psi, design)
    else:
        raise UnsolvableDesignError(
            f"bisection did not converge to |f| < {tolerance} on [{lo}, {hi}]"
        )
    return mid


def aupp(basin: DeflectionBasin) -> float:
    """Area under the deflection profile, in mils.

    (5*D0 - 2*D12 - 2*D24 - D36) / 2 over the inner 36 inches, with the
    deflections converted from microns to mils.
    """
    d0, d12, d24, d36 = (
        v / MICRONS_PER_MIL for v in (basin.d0, basin.d12, basin.d24, basin.d36)
    )
    return (5.0 * d0 - 2.0 * d12 - 2.0 * d24 - d36) / 2.0


def sn_effective(hp_in: float, aupp_mils: float) -> float:
    """Effective structural number from thickness and basin area.

    2.272 * hp^0.4217 * aupp^-0.4678, hp in inches and aupp in mils.
    """
    if not (math.isfinite(hp_in) and hp_in > 0):
        raise UndefinedSnError(f"pavement thickness must be positive: {hp_in}")
    if not (math.isfinite(aupp_mils) and aupp_mils > 0):
        raise UndefinedSnError(f"aupp must be positive: {aupp_mils}")
    return 2.272 * hp_in**0.4217 * aupp_mils**-0.4678


@dataclass(frozen=True)
class SnResult:
    """Structural numbers and their ratio for one FWD test point."""

    m_r_psi: float
    sn_required: float
    aupp_mils: float
    sn_effective: float
    snr: float


def snr_for_point(point: FwdTestPoint, road_class: RoadClass) -> SnResult:
    """Full structural evaluation of one test point.

    Requires the pavement thickness; points without it cannot be
    structurally evaluated.
    """
    if point.hp_in is None:
        raise IncompletePointError(
            f"point at station {point.station_m} has no pavement thickness"
        )
    design = CLASS_DESIGN[road_class]
    m_r = subgrade_modulus(point.basin.load_lbf, point.basin.d60)
    sn_req = sn_required(m_r, design)
    area = aupp(point.basin)
    sn_eff = sn_effective(point.hp_in, area)
    return SnResult(
        m_r_psi=m_r,
        sn_required=sn_req,
        aupp_mils=area,
        sn_effective=sn_eff,
        snr=sn_eff / sn_req,
    )


class Verdict(enum.Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking a D0 threshold against the SNR trend."""

    threshold_um: float
    n_used: int
    n_excluded: int
    amplitude: Optional[float]  # a in snr = a * exp(b * d0)
    decay: Optional[float]  # b, expected negative
    d0_at_snr1_um: Optional[float]
    gap_fraction: Optional[float]
    verdict: Verdict


MIN_FIT_POINTS = 10


def verify_threshold(
    d0_um: Sequence[float],
    snr: Sequence[float],
    threshold_um: float,
    tolerance: float = 0.10,
) -> VerificationReport:
    """Check a D0 threshold against the fitted SNR decay.

    Fits ln(snr) = ln(a) + b * d0 by least squares, solves the fit for
    the D0 where SNR crosses 1, and compares that crossing to the
    threshold. Points with non-positive or non-finite SNR carry no
    information about the crossing and are excluded (counted in the
    report). The check is inconclusive when fewer than ten points
    remain or when the fit does not decay with D0.
    """
    if not (math.isfinite(threshold_um) and threshold_um > 0):
        raise InvalidRecordError(f"threshold must be positive: {threshold_um}")
    d0_arr = np.asarray(d0_um, dtype=float)
    snr_arr = np.asarray(snr, dtype=float)
    if d0_arr.shape != snr_arr.shape or d0_arr.ndim != 1:
        raise InvalidRecordError("d0 and snr must be 1-d sequences of equal length")

    usable = np.isfinite(d0_arr) & np.isfinite(snr_arr) & (snr_arr > 0)
    n_used = int(usable.sum())
    n_excluded = int(d0_arr.size - n_used)

    if n_used < MIN_FIT_POINTS:
        return VerificationReport(
            threshold_um=threshold_um,
            n_used=n_used,
            n_excluded=n_excluded,
            amplitude=None,
            decay=None,
            d0_at_snr1_um=None,
            gap_fraction=None,
            verdict=Verdict.INCONCLUSIVE,
        )

    x = d0_arr[usable]
    y = np.log(snr_arr[usable])
    b, ln_a = np.polyfit(x, y, 1)
    a = float(np.exp(ln_a))
    b = float(b)

    if b >= 0:
        return VerificationReport(
            threshold_um=threshold_um,
            n_used=n_used,
            n_excluded=n_excluded,
            amplitude=a,
            decay=b,
            d0_at_snr1_um=None,
            gap_fraction=None,
            verdict=Verdict.INCONCLUSIVE,
        )

    d0_cross = -math.log(a) / b
    gap = abs(d0_cross - threshold_um) / threshold_um
    verdict = Verdict.CONSISTENT if gap <= tolerance else Verdict.INCONSISTENT
    return VerificationReport(
        threshold_um=threshold_um,
        n_used=n_used,
        n_excluded=n_excluded,
        amplitude=a,
        decay=b,
        d0_at_snr1_um=d0_cross,
        gap_fraction=gap,
        verdict=verdict,
    )
