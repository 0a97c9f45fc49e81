"""Physical device parameters and every derived constant, in one place.

All solver modules work in dimensionless units (frequencies in units of the
resonance omega0, time tau = omega0*t, intra-resonator fields as photon
amplitudes, input/output fields in units of sqrt(omega0)).  SI conversion
happens here and at the CLI boundary only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

# 2019 SI exact values
ELEMENTARY_CHARGE = 1.602176634e-19   # C
PLANCK = 6.62607015e-34               # J s
FLUX_QUANTUM = PLANCK / (2.0 * ELEMENTARY_CHARGE)   # Wb


@dataclass(frozen=True)
class DeviceParams:
    """User-facing device description.

    f0 : natural resonance frequency, Hz
    Ic : junction critical current, A
    Q  : quality factor, dimensionless
    """

    f0: float
    Ic: float
    Q: float

    def __post_init__(self):
        for name in ("f0", "Ic", "Q"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValidationError(f"device parameter {name} must be a positive finite number, got {v!r}",
                                      field=name, value=repr(v))


@dataclass(frozen=True)
class DerivedParams:
    """Everything the solvers need, precomputed.

    omega0        : angular resonance frequency, rad/s
    K             : quartic-nonlinearity (Kerr) constant, rad/s; negative
    gamma         : coupling rate omega0/Q, rad/s
    Lj            : junction inductance, H
    Ej            : junction energy, J
    C             : shunt capacitance, F
    alpha_in_crit : critical input field amplitude, sqrt(rad/s)
    kerr_ratio    : K/omega0, dimensionless
    Q             : quality factor (carried through for convenience)
    """

    omega0: float
    K: float
    gamma: float
    Lj: float
    Ej: float
    C: float
    alpha_in_crit: float
    kerr_ratio: float
    Q: float


def derive(p: DeviceParams) -> DerivedParams:
    """Populate DerivedParams from DeviceParams."""
    omega0 = 2.0 * math.pi * p.f0
    K = -(omega0 / 8.0) * (2.0 * ELEMENTARY_CHARGE * omega0 / p.Ic)
    gamma = omega0 / p.Q
    Lj = FLUX_QUANTUM / (2.0 * math.pi * p.Ic)
    Ej = p.Ic * FLUX_QUANTUM / (2.0 * math.pi)
    C = 1.0 / (Lj * omega0 ** 2)
    alpha_in_crit = math.sqrt(-gamma ** 2 / (math.sqrt(27.0) * K))
    return DerivedParams(
        omega0=omega0,
        K=K,
        gamma=gamma,
        Lj=Lj,
        Ej=Ej,
        C=C,
        alpha_in_crit=alpha_in_crit,
        kerr_ratio=K / omega0,
        Q=float(p.Q),
    )


def critical_current_for_kerr_q_ratio(f0: float, Q: float, ratio: float) -> float:
    """Ic such that omega0/(K*Q) equals the requested (negative) ratio.

    Solving ratio = omega0/(K*Q) with K = -(omega0/8)(2e*omega0/Ic) gives
    Ic = -ratio * e * omega0 * Q / 4.  Used for dynamic-range device families.
    """
    if ratio >= 0:
        raise ValidationError(f"omega0/(K*Q) is negative for a junction; got {ratio}", ratio=ratio)
    omega0 = 2.0 * math.pi * f0
    return -ratio * ELEMENTARY_CHARGE * omega0 * Q / 4.0


def device_from_json_dict(d: dict) -> DeviceParams:
    """Parse the external {"f0_hz":…, "ic_a":…, "q":…} schema; unknown keys rejected."""
    if not isinstance(d, dict):
        raise ValidationError("device description must be a JSON object", got=repr(d))
    allowed = {"f0_hz", "ic_a", "q"}
    unknown = set(d) - allowed
    if unknown:
        raise ValidationError(f"unknown device keys: {sorted(unknown)}", unknown=sorted(unknown))
    missing = allowed - set(d)
    if missing:
        raise ValidationError(f"missing device keys: {sorted(missing)}", missing=sorted(missing))
    return DeviceParams(f0=float(d["f0_hz"]), Ic=float(d["ic_a"]), Q=float(d["q"]))


def device_to_json_dict(p: DeviceParams) -> dict:
    return {"f0_hz": p.f0, "ic_a": p.Ic, "q": p.Q}
