"""Sparse exact q-expansions.

A QExpansion stores finitely many exact coefficients a_n (n >= 0) of a
series known through precision `prec`: coefficients with n <= prec and
n not stored are genuinely zero, anything past prec is unknown and
asking for it raises.  Values are ints or Fractions, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PrecisionError


def _normalize(coeffs) -> dict[int, Fraction]:
    out = {}
    for n, c in coeffs.items():
        n = int(n)
        if n < 0:
            raise ValueError(f"negative exponent {n}")
        c = Fraction(c)
        if c != 0:
            out[n] = c
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class QExpansion:
    """Finitely many exact coefficients, valid through q^prec.

    `kohnen` marks a series claimed to live in the plus subspace for
    weight 3/2, where coefficients may only sit at n ≡ 0, 3 mod 4; the
    claim is validated on construction.
    """

    prec: int
    coeffs: dict[int, Fraction] = field(default_factory=dict)
    kohnen: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _normalize(self.coeffs))
        for n in self.coeffs:
            if n > self.prec:
                raise ValueError(f"coefficient at {n} beyond precision {self.prec}")
            if self.kohnen and n % 4 in (1, 2):
                raise ValueError(
                    f"nonzero coefficient at {n} ≡ {n % 4} mod 4 in a plus-space series"
                )

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError(f"negative exponent {n}")
        if n > self.prec:
            raise PrecisionError(
                f"coefficient {n} requested but series only known to {self.prec}"
            )
        return self.coeffs.get(n, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: "QExpansion") -> "QExpansion":
        prec = min(self.prec, other.prec)
        out = {}
        for n in set(self.coeffs) | set(other.coeffs):
            if n <= prec:
                out[n] = self.coeffs.get(n, 0) + other.coeffs.get(n, 0)
        return QExpansion(prec, out, kohnen=self.kohnen and other.kohnen)

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self + other.scale(-1)

    def scale(self, c) -> "QExpansion":
        c = Fraction(c)
        return QExpansion(
            self.prec,
            {n: c * v for n, v in self.coeffs.items()},
            kohnen=self.kohnen,
        )

    def truncate(self, prec: int) -> "QExpansion":
        if prec > self.prec:
            raise PrecisionError(f"cannot extend {self.prec} to {prec} by truncation")
        return QExpansion(
            prec,
            {n: v for n, v in self.coeffs.items() if n <= prec},
            kohnen=self.kohnen,
        )

    def support(self) -> list[int]:
        return list(self.coeffs)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.coeffs.values())

    def leading(self) -> tuple[int, Fraction] | None:
        """(n, a_n) at the smallest n with a_n != 0, or None."""
        for n, v in self.coeffs.items():
            return n, v
        return None

    def sign_normalized(self) -> "QExpansion":
        """This series or its negative, whichever has positive leading term."""
        lead = self.leading()
        if lead is None or lead[1] > 0:
            return self
        return self.scale(-1)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        """{"prec": prec, "coeffs": {str(n): int-or-"num/den"}}, n ascending."""
        ser = {}
        for n, v in self.coeffs.items():
            ser[str(n)] = int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return {"prec": self.prec, "coeffs": ser}

    @classmethod
    def from_json_dict(cls, data: dict, kohnen: bool = False) -> "QExpansion":
        coeffs = {}
        for n, v in data["coeffs"].items():
            coeffs[int(n)] = Fraction(v) if isinstance(v, str) else Fraction(int(v))
        return cls(int(data["prec"]), coeffs, kohnen=kohnen)

    def to_text(self) -> str:
        """Two-column 'n a_n' lines, nonzero coefficients, n ascending."""
        lines = []
        for n, v in self.coeffs.items():
            val = str(int(v)) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
            lines.append(f"{n} {val}")
        return "\n".join(lines)
