"""Schur functions over exact rational arithmetic.

Three independent evaluation routes are provided:

* ``schur_ssyt_sum``     -- the defining sum of monomials over semistandard
  tableaux of the shape;
* ``schur_bialternant``  -- ratio of the alternant det[z_i^(lam_j + T - j)]
  to the Vandermonde product prod_{i<j} (z_i - z_j);
* ``schur_dual_jt``      -- dual Jacobi-Trudi determinant in the elementary
  symmetric polynomials, det[e_{conj(lam)_j + i - j}].

plus the all-ones specialization as a closed-form product of integers.
All arithmetic is exact: big integers and ``fractions.Fraction`` only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from ._exact import det_bareiss
from .combinat import Partition, conjugate, enumerate_ssyt, monomial_exponents

RationalLike = Union[int, Fraction, str]


@dataclass(frozen=True)
class EvalPoint:
    """A tuple of exact rational variable values z_1, ..., z_T."""

    values: tuple[Fraction, ...]

    def __init__(self, values: Iterable[RationalLike]):
        object.__setattr__(
            self, "values", tuple(Fraction(v) for v in values)
        )

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @classmethod
    def ones(cls, n: int) -> "EvalPoint":
        return cls([1] * n)


def _point(z: EvalPoint | Sequence[RationalLike]) -> tuple[Fraction, ...]:
    if isinstance(z, EvalPoint):
        return z.values
    return tuple(Fraction(v) for v in z)


def elementary_symmetric_all(z: EvalPoint | Sequence[RationalLike]) -> list[Fraction]:
    """e_0, e_1, ..., e_T as coefficients of prod_i (1 + z_i * xi)."""
    values = _point(z)
    coeffs = [Fraction(1)]
    for v in values:
        coeffs.append(Fraction(0))
        for j in range(len(coeffs) - 1, 0, -1):
            coeffs[j] += v * coeffs[j - 1]
    return coeffs


def elementary_symmetric(j: int, z: EvalPoint | Sequence[RationalLike]) -> Fraction:
    """j-th elementary symmetric polynomial at z; 0 for j > len(z)."""
    if j < 0:
        raise ValueError("index must be nonnegative")
    values = _point(z)
    if j > len(values):
        return Fraction(0)
    return elementary_symmetric_all(values)[j]


def schur_ssyt_sum(
    shape: Partition, z: EvalPoint | Sequence[RationalLike]
) -> Fraction:
    """Defining sum: one monomial per semistandard tableau of the shape."""
    values = _point(z)
    n_vars = len(values)
    if len(shape) > n_vars:
        return Fraction(0)
    total = Fraction(0)
    for tab in enumerate_ssyt(shape, n_vars):
        term = Fraction(1)
        for k, mult in enumerate(monomial_exponents(tab, n_vars)):
            if mult:
                term *= values[k] ** mult
        total += term
    return total


def schur_bialternant(
    shape: Partition, z: EvalPoint | Sequence[RationalLike]
) -> Fraction:
    """Alternant ratio det[z_i^(lam_j + T - j)] / prod_{i<j} (z_i - z_j).

    Requires pairwise distinct points (the Vandermonde denominator must not
    vanish); the dual Jacobi-Trudi route covers repeated points.
    """
    values = _point(z)
    n_vars = len(values)
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            if values[i] == values[j]:
                raise ValueError(
                    f"repeated evaluation point z[{i}] == z[{j}] == {values[i]}"
                )
    if len(shape) > n_vars:
        return Fraction(0)
    lam = shape.padded(n_vars)
    numerator = det_bareiss(
        [
            [values[i] ** (lam[j] + n_vars - (j + 1)) for j in range(n_vars)]
            for i in range(n_vars)
        ]
    )
    vandermonde = Fraction(1)
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            vandermonde *= values[i] - values[j]
    return Fraction(numerator) / vandermonde


def schur_dual_jt(
    shape: Partition, z: EvalPoint | Sequence[RationalLike]
) -> Fraction:
    """Dual Jacobi-Trudi determinant det[e_{conj(lam)_j + i - j}](z)."""
    values = _point(z)
    if len(shape) > len(values):
        return Fraction(0)
    conj = conjugate(shape).parts
    n = len(conj)
    if n == 0:
        return Fraction(1)
    e = elementary_symmetric_all(values)

    def e_at(k: int) -> Fraction:
        if k < 0 or k > len(values):
            return Fraction(0)
        return e[k]

    matrix = [[e_at(conj[j] + (i + 1) - (j + 1)) for j in range(n)] for i in range(n)]
    result = det_bareiss(matrix)
    return Fraction(result)


def principal_specialization(shape: Partition, n_vars: int) -> int:
    """Value at z_1 = ... = z_T = 1: the number of semistandard tableaux.

    Closed form prod_{1<=i<j<=T} (lam_i - lam_j + j - i)/(j - i), with the
    shape zero-padded to length T. Always an exact nonnegative integer.
    """
    if n_vars < 0:
        raise ValueError("number of variables must be nonnegative")
    if len(shape) > n_vars:
        return 0
    lam = shape.padded(n_vars)
    num = 1
    den = 1
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    count, rem = divmod(num, den)
    if rem != 0:
        raise AssertionError(f"specialization product not integral for {shape.parts}")
    return count


def principal_specialization_q(
    shape: Partition, n_vars: int, q: RationalLike
) -> Fraction:
    """Evaluation at the geometric point (1, q, ..., q^(T-1)).

    q-factorized form q^(sum (k-1) lam_k) * prod_{i<j} (q^(lam_i-lam_j+j-i)-1)
    / (q^(j-i)-1); its q -> 1 limit is ``principal_specialization``.
    """
    q = Fraction(q)
    if q == 1:
        raise ValueError("q=1 is the limit point; use principal_specialization")
    if len(shape) > n_vars:
        return Fraction(0)
    lam = shape.padded(n_vars)
    out = Fraction(1)
    for k in range(n_vars):
        if lam[k]:
            out *= q ** (k * lam[k])
    for i in range(n_vars):
        for j in range(i + 1, n_vars):
            den = q ** (j - i) - 1
            if den == 0:
                raise ValueError(f"q={q} is a root of unity of order <= {j - i}")
            out *= (q ** (lam[i] - lam[j] + j - i) - 1) / den
    return out
