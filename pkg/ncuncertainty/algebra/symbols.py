"""Noncommutative polynomial symbols over the algebra generators.

A symbol is a finite linear combination of ordered products of base tags. Products are
never reordered; simplification only merges identical words and drops identities and
zero coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Mapping, Tuple, Union

from ncuncertainty.core.errors import UnsupportedSymbol


class Tag(str, Enum):
    Q1 = "Q1"
    Q2 = "Q2"
    P1 = "P1"
    P2 = "P2"
    X1 = "X1"
    X2 = "X2"
    XI1 = "Xi1"
    XI2 = "Xi2"
    R = "R"
    I = "Identity"  # noqa: E741

    @classmethod
    def parse(cls, name: str) -> "Tag":
        key = str(name).strip().lower()
        for t in cls:
            if t.value.lower() == key or t.name.lower() == key:
                return t
        raise UnsupportedSymbol(f"unknown tag {name!r}")


FUNDAMENTAL = (Tag.Q1, Tag.Q2, Tag.P1, Tag.P2)
HEISENBERG_WEYL = (Tag.X1, Tag.X2, Tag.XI1, Tag.XI2)

Word = Tuple[Tag, ...]
Scalar = Union[int, float, complex]

_ZERO_TOL = 0.0


@dataclass(frozen=True)
class OperatorSymbol:
    """Sum of (coefficient, word) terms; the empty word is the identity."""

    terms: Tuple[Tuple[complex, Word], ...] = ()

    # ---- constructors ----

    @classmethod
    def base(cls, tag: Union[Tag, str]) -> "OperatorSymbol":
        t = tag if isinstance(tag, Tag) else Tag.parse(tag)
        if t is Tag.I:
            return cls.identity()
        return cls(((1.0 + 0j, (t,)),))

    @classmethod
    def identity(cls, coeff: Scalar = 1.0) -> "OperatorSymbol":
        return cls(((complex(coeff), ()),)).simplify()

    @classmethod
    def zero(cls) -> "OperatorSymbol":
        return cls(())

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Scalar, Iterable[Union[Tag, str]]]]) -> "OperatorSymbol":
        out = []
        for c, word in terms:
            tags = tuple(w if isinstance(w, Tag) else Tag.parse(w) for w in word)
            out.append((complex(c), tags))
        return cls(tuple(out)).simplify()

    # ---- structure ----

    def simplify(self) -> "OperatorSymbol":
        acc: Dict[Word, complex] = {}
        order = []
        for c, word in self.terms:
            w = tuple(t for t in word if t is not Tag.I)
            if w not in acc:
                acc[w] = 0j
                order.append(w)
            acc[w] += complex(c)
        terms = tuple((acc[w], w) for w in order if abs(acc[w]) > _ZERO_TOL)
        return OperatorSymbol(terms)

    @property
    def is_zero(self) -> bool:
        return len(self.simplify().terms) == 0

    @property
    def tag(self) -> Tag:
        """The base tag of a single-generator symbol with unit coefficient."""
        s = self.simplify()
        if len(s.terms) == 1 and s.terms[0][0] == 1 and len(s.terms[0][1]) == 1:
            return s.terms[0][1][0]
        if len(s.terms) == 1 and s.terms[0][0] == 1 and not s.terms[0][1]:
            return Tag.I
        raise UnsupportedSymbol(f"{s} is not a base tag")

    @property
    def is_base(self) -> bool:
        try:
            self.tag
        except UnsupportedSymbol:
            return False
        return True

    def tags(self) -> set:
        return {t for _, w in self.terms for t in w}

    def coefficient(self, *word: Union[Tag, str]) -> complex:
        key = tuple(w if isinstance(w, Tag) else Tag.parse(w) for w in word)
        for c, w in self.simplify().terms:
            if w == key:
                return c
        return 0j

    def substitute(self, mapping: Mapping[Tag, "OperatorSymbol"]) -> "OperatorSymbol":
        """Replace generators by symbols, expanding products in order."""
        total = OperatorSymbol.zero()
        for c, word in self.terms:
            prod = OperatorSymbol.identity(c)
            for t in word:
                prod = prod * mapping.get(t, OperatorSymbol.base(t))
            total = total + prod
        return total.simplify()

    def adjoint(self) -> "OperatorSymbol":
        """Formal adjoint, treating every generator as self-adjoint."""
        return OperatorSymbol(
            tuple((complex(c).conjugate(), tuple(reversed(w))) for c, w in self.terms)
        ).simplify()

    # ---- arithmetic ----

    def __add__(self, other: Union["OperatorSymbol", Scalar]) -> "OperatorSymbol":
        o = other if isinstance(other, OperatorSymbol) else OperatorSymbol.identity(other)
        return OperatorSymbol(self.terms + o.terms).simplify()

    __radd__ = __add__

    def __neg__(self) -> "OperatorSymbol":
        return OperatorSymbol(tuple((-c, w) for c, w in self.terms))

    def __sub__(self, other: Union["OperatorSymbol", Scalar]) -> "OperatorSymbol":
        o = other if isinstance(other, OperatorSymbol) else OperatorSymbol.identity(other)
        return self + (-o)

    def __rsub__(self, other: Scalar) -> "OperatorSymbol":
        return OperatorSymbol.identity(other) - self

    def __mul__(self, other: Union["OperatorSymbol", Scalar]) -> "OperatorSymbol":
        if not isinstance(other, OperatorSymbol):
            c = complex(other)
            return OperatorSymbol(tuple((c * a, w) for a, w in self.terms)).simplify()
        terms = tuple(
            (a * b, wa + wb) for a, wa in self.terms for b, wb in other.terms
        )
        return OperatorSymbol(terms).simplify()

    def __rmul__(self, other: Scalar) -> "OperatorSymbol":
        return self * other

    def __pow__(self, n: int) -> "OperatorSymbol":
        if not isinstance(n, int) or n < 0:
            raise UnsupportedSymbol(f"symbol powers must be nonnegative integers, got {n!r}")
        out = OperatorSymbol.identity()
        for _ in range(n):
            out = out * self
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, w in self.terms:
            word = "*".join(t.value for t in w) or "Identity"
            parts.append(f"({c.real:.6g}{c.imag:+.6g}j)*{word}")
        return " + ".join(parts)

    def to_dict(self) -> Dict[str, object]:
        return {
            "terms": [
                {"re": c.real, "im": c.imag, "word": [t.value for t in w]} for c, w in self.terms
            ]
        }


def commutator(a: OperatorSymbol, b: OperatorSymbol) -> OperatorSymbol:
    return (a * b - b * a).simplify()


def base(tag: Union[Tag, str]) -> OperatorSymbol:
    return OperatorSymbol.base(tag)


__all__ = [
    "Tag",
    "FUNDAMENTAL",
    "HEISENBERG_WEYL",
    "OperatorSymbol",
    "commutator",
    "base",
]
