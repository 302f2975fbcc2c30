"""Ternary theta series of trace-zero lattices attached to ideal classes.

For each right order O_i of an ideal class representative, the rank-3
group R_i of trace-zero elements of ℤ + 2O_i carries the restriction of
the quaternion norm form.  Half the representation numbers of that form
are the coefficients of a weight-3/2 theta series; the eigenvector
combination of the class theta series is the half-integral form
attached to the rational eigenline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .brandt import Eigenform, IdealClassSet
from .errors import IntegralityError, PrecisionError
from .lattice import Lattice4, Order, count_by_value, hnf_rows, mat_det
from .numth import is_prime, kronecker, squarefree_part
from .qexp import QExpansion
from .quat import Quat, QuaternionAlgebra, qadd, qscale, trd

__all__ = [
    "TernaryLattice",
    "trace_zero_lattice",
    "ternary_theta",
    "kohnen_form",
    "hecke_check",
]


@dataclass(frozen=True)
class TernaryLattice:
    """Rank-3 lattice of trace-zero quaternions with its exact Gram matrix."""

    alg: QuaternionAlgebra
    basis: tuple[Quat, Quat, Quat]
    gram: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for v in self.basis:
            if trd(v) != 0:
                raise ValueError(f"basis vector {v} has nonzero trace")
        for i in range(3):
            for j in range(3):
                if self.gram[i][j] != self.alg.pair(self.basis[i], self.basis[j]):
                    raise ValueError("Gram matrix does not match the basis")
        if mat_det([list(r) for r in self.gram]) <= 0:
            raise ValueError("Gram matrix is not positive definite")

    def det(self) -> Fraction:
        return mat_det([list(r) for r in self.gram])

    def counts_by_norm(self, bound: int) -> dict[Fraction, int]:
        """Histogram {norm: count} over the lattice, norms <= bound."""
        return count_by_value([list(r) for r in self.gram], bound)


def trace_zero_lattice(order: Order) -> TernaryLattice:
    """Trace-zero part of ℤ + 2O, with the norm form's Gram matrix."""
    alg = order.lattice.alg
    two_o = [
        tuple(2 * x for x in row) for row in order.lattice.frac_rows()
    ]
    sub = Lattice4.from_frac_rows(alg, [(1, 0, 0, 0)] + two_o)
    vecs = sub.basis()
    traces = [trd(v) for v in vecs]
    mult = lcm(*(t.denominator for t in traces)) if traces else 1
    ints = [int(t * mult) for t in traces]
    # integer kernel of the trace functional: row-reduce [trace | identity]
    # and keep the rows whose trace entry vanished
    rows = [[ints[i]] + [int(i == j) for j in range(4)] for i in range(4)]
    reduced = hnf_rows(rows)
    kernel = [r[1:] for r in reduced if r[0] == 0]
    if len(kernel) != 3:
        raise ValueError("trace functional does not have a rank-3 kernel")
    basis = []
    for coeffs in kernel:
        w = (Fraction(0),) * 4
        for c, v in zip(coeffs, vecs):
            w = qadd(w, qscale(Fraction(c), v))
        basis.append(w)
    gram = tuple(
        tuple(alg.pair(x, y) for y in basis) for x in basis
    )
    return TernaryLattice(alg, tuple(basis), gram)


def ternary_theta(lattice: TernaryLattice, prec: int) -> QExpansion:
    """Theta series of the trace-zero lattice through q^prec.

    Coefficients are half the representation numbers; the constant term
    is dropped, so the result is the cuspidal-side expansion.
    """
    if prec < 0:
        raise ValueError("precision must be nonnegative")
    coeffs: dict[int, int] = {}
    for value, count in lattice.counts_by_norm(prec).items():
        if value == 0:
            continue
        if value.denominator != 1:
            raise IntegralityError(f"non-integral norm {value} on a theta lattice")
        if count % 2:
            raise IntegralityError(f"odd representation count at norm {value}")
        coeffs[int(value)] = count // 2
    return QExpansion(prec, coeffs)


def kohnen_form(
    eigenform: Eigenform, class_set: IdealClassSet, prec: int
) -> QExpansion:
    """Eigenvector combination of the class theta series.

    The zero series is a legal output: it signals a vanishing central
    L-value for the newform behind the eigenline.
    """
    total = QExpansion(prec, {})
    for weight, order in zip(eigenform.vector, class_set.rights):
        theta = ternary_theta(trace_zero_lattice(order), prec)
        total = total + theta.scale(weight)
    if not total.is_integral():
        raise IntegralityError("eigenvector theta combination is not integral")
    return QExpansion(prec, total.coeffs, kohnen=True)


def hecke_check(g: QExpansion, eigenform: Eigenform, p: int) -> bool:
    """Verify the degree-p² coefficient recursion on g within precision.

    For every index n coprime to p with np² within precision, the
    coefficient a_{np²} must equal a_n·(b_p − (−n₀/p)) where n₀ is the
    square-free part of n and b_p the eigenline's degree-p eigenvalue.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if (4 * eigenform.class_set.level) % p == 0:
        raise ValueError(f"{p} divides 4N")
    nmax = g.prec // (p * p)
    if nmax < 1:
        raise PrecisionError(
            f"precision {g.prec} cannot test the degree-{p}² recursion"
        )
    bp = eigenform.eigenvalue(p)
    for n in range(1, nmax + 1):
        if n % p == 0:
            continue
        n0 = squarefree_part(n)
        if g[n * p * p] != g[n] * (bp - kronecker(-n0, p)):
            return False
    return True
