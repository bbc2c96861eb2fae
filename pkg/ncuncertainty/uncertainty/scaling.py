from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Dict

from ncuncertainty.algebra.params import derive_constants
from ncuncertainty.algebra.symbols import OperatorSymbol, Tag
from ncuncertainty.core.errors import DomainError
from ncuncertainty.core.models import WaveFunction
from ncuncertainty.operators.assemble import assemble
from ncuncertainty.states.measure import dispersion, require_normalized
from ncuncertainty.states.transforms import dilate


@dataclass
class ScalingReport:
    n: int
    m: int
    s: float
    dA: float
    dB: float
    dA_scaled: float
    dB_scaled: float
    product_ratio: float
    expected_ratio: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def scaling_demo(f: WaveFunction, n: int, m: int, s: float) -> ScalingReport:
    """Dispersions about 0 of x1^n and xi1^m before and after the dilation D_s.

    The product scales by |s|^(n - m); for n = m the product is dilation invariant while
    each factor is not.
    """
    if n < 1 or m < 1:
        raise DomainError(f"powers must be positive, got n={n}, m={m}", module="uncertainty")
    require_normalized(f)
    params = derive_constants(0.0, 0.0, 0.0)
    A = assemble(OperatorSymbol.base(Tag.X1) ** n, params, f.grid)
    B = assemble(OperatorSymbol.base(Tag.XI1) ** m, params, f.grid)
    g = dilate(f, s)
    dA, dB = dispersion(A, f, 0.0), dispersion(B, f, 0.0)
    dAs, dBs = dispersion(A, g, 0.0), dispersion(B, g, 0.0)
    return ScalingReport(
        n=n,
        m=m,
        s=float(s),
        dA=dA,
        dB=dB,
        dA_scaled=dAs,
        dB_scaled=dBs,
        product_ratio=(dAs * dBs) / (dA * dB),
        expected_ratio=abs(s) ** (n - m),
    )


__all__ = ["ScalingReport", "scaling_demo"]
