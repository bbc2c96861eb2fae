"""Deformation parameters and the constants derived from them."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Mapping, Optional

from ncuncertainty.core.errors import DomainError
from ncuncertainty.infra.logging import get_unified_logger


@dataclass(frozen=True)
class AlgebraParams:
    """theta, eta, epsilon and the derived xi, lambda_, mu, E, F.

    ``split`` is the ratio lambda_/mu; only the product 2*lambda_*mu = 1 + sqrt(1 - xi)
    is fixed by the algebra.
    """

    theta: float
    eta: float
    epsilon: float
    xi: float
    lambda_: float
    mu: float
    E: float
    F: float
    split: float = 1.0

    @property
    def s(self) -> float:
        """sqrt(1 - xi)."""
        return math.sqrt(1.0 - self.xi)

    @property
    def r_ratio(self) -> float:
        """theta / (1 + sqrt(1 - xi)), the P2 coefficient inside R."""
        return self.theta / (1.0 + self.s)

    @property
    def r_multiplier(self) -> float:
        """R acts in the differential representation as multiplication by this factor times x1."""
        return self.epsilon * self.s / self.mu

    @property
    def a_coef(self) -> float:
        """theta / (2 lambda_)."""
        return self.theta / (2.0 * self.lambda_)

    @property
    def b_coef(self) -> float:
        """eta / (2 mu)."""
        return self.eta / (2.0 * self.mu)

    @property
    def is_canonical(self) -> bool:
        return self.epsilon == 0.0

    @property
    def is_undeformed(self) -> bool:
        return self.theta == 0.0 and self.eta == 0.0 and self.epsilon == 0.0

    def invariant_defects(self) -> Dict[str, float]:
        """Relative defects of the defining relations (all ~1e-16 for derived params)."""
        s = self.s
        two_lm = 2.0 * self.lambda_ * self.mu
        f_expected = -(self.lambda_ / self.mu) * self.epsilon * s * (1.0 + s)
        e_expected = -self.theta * self.F / (1.0 + s)

        def rel(a: float, b: float) -> float:
            return abs(a - b) / max(abs(b), 1e-300) if b != 0.0 else abs(a)

        return {
            "xi": rel(self.xi, self.theta * self.eta),
            "product": rel(two_lm, 1.0 + s),
            "F": rel(self.F, f_expected),
            "E": rel(self.E, e_expected),
        }

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["sqrt_one_minus_xi"] = self.s
        return d

    @classmethod
    def from_mapping(cls, conf: Mapping[str, Any]) -> "AlgebraParams":
        return derive_constants(
            float(conf.get("theta", 0.0) or 0.0),
            float(conf.get("eta", 0.0) or 0.0),
            float(conf.get("epsilon", 0.0) or 0.0),
            float(conf["split"]) if conf.get("split") is not None else None,
        )


def derive_constants(
    theta: float, eta: float, epsilon: float, split: Optional[float] = None
) -> AlgebraParams:
    """Build AlgebraParams from (theta, eta, epsilon) and the optional split lambda_/mu."""
    values = {"theta": theta, "eta": eta, "epsilon": epsilon}
    for name, v in values.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")
        if v < 0.0:
            raise DomainError(f"{name} must be nonnegative, got {v!r}")
    ratio = 1.0 if split is None else float(split)
    if not (ratio > 0.0 and math.isfinite(ratio)):
        raise DomainError(f"split must be a positive ratio, got {split!r}")
    xi = theta * eta
    if xi >= 1.0:
        raise DomainError(f"theta*eta = {xi!r} must be < 1", details={"theta": theta, "eta": eta})

    s = math.sqrt(1.0 - xi)
    lam = math.sqrt(ratio * (1.0 + s) / 2.0)
    mu = (1.0 + s) / (2.0 * lam)
    F = -(lam / mu) * epsilon * s * (1.0 + s)
    E = -theta * F / (1.0 + s)
    params = AlgebraParams(
        theta=float(theta),
        eta=float(eta),
        epsilon=float(epsilon),
        xi=xi,
        lambda_=lam,
        mu=mu,
        E=E,
        F=F,
        split=ratio,
    )
    get_unified_logger("algebra", "params").debug(
        "derived constants xi=%.6g lambda=%.9g mu=%.9g E=%.9g F=%.9g", xi, lam, mu, E, F
    )
    return params


__all__ = ["AlgebraParams", "derive_constants"]
