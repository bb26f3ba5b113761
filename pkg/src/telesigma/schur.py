"""Schur functions in Sato variables and in ordinary variables.

s_lambda(t) is the determinant det(p_{lambda_i - i + j}) where the p_n are the
coefficients of exp(sum_k t_k zeta^k); t_k has weight k. The ordinary-variable
Schur polynomial is the Jacobi-Trudi determinant of complete homogeneous
polynomials. Under t_k = (z_1^k + ... + z_n^k)/k the two agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Sequence

from .polynomial import GradedPolynomial, PolyRing
from .semigroup import Partition


def _as_partition(lam) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(tuple(lam))


@lru_cache(maxsize=None)
def t_ring(size: int) -> PolyRing:
    """Sato variables t_1..t_size with weight(t_k) = k."""
    size = max(size, 1)
    return PolyRing([f"t{k}" for k in range(1, size + 1)], range(1, size + 1))


@lru_cache(maxsize=None)
def z_ring(n: int) -> PolyRing:
    return PolyRing([f"z{i}" for i in range(1, n + 1)])


def one_row_polynomials(ring: PolyRing, count: int) -> list[GradedPolynomial]:
    """p_0..p_{count-1} from n p_n = sum_{k=1}^n k t_k p_{n-k}."""
    p = [ring.one()]
    for n in range(1, count):
        acc = ring.zero()
        for k in range(1, n + 1):
            if k <= ring.nvars:
                acc = acc + ring.gen(k - 1) * p[n - k] * k
        p.append(acc / n)
    return p


def determinant(matrix: Sequence[Sequence[GradedPolynomial]], ring: PolyRing) -> GradedPolynomial:
    """Cofactor expansion along rows, memoized over the set of columns used."""
    n = len(matrix)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: frozenset) -> GradedPolynomial:
        if row == n:
            return ring.one()
        acc = ring.zero()
        sign = 1
        for c in sorted(cols):
            entry = matrix[row][c]
            if not entry.is_zero():
                term = entry * minor(row + 1, cols - {c})
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        return acc

    return minor(0, frozenset(range(n)))


def _jacobi_trudi(lam: Partition, seq: Sequence[GradedPolynomial], ring: PolyRing) -> GradedPolynomial:
    l = len(lam)

    def entry(i, j):
        k = lam[i] - i + j
        return seq[k] if 0 <= k < len(seq) else ring.zero()

    return determinant([[entry(i, j) for j in range(l)] for i in range(l)], ring)


def schur_t(lam, ring: PolyRing | None = None) -> GradedPolynomial:
    """s_lambda(t_1, t_2, ...), homogeneous of weight |lambda|."""
    lam = _as_partition(lam)
    if not len(lam):
        raise ValueError("empty partition")
    ring = ring or t_ring(lam.size)
    return _jacobi_trudi(lam, one_row_polynomials(ring, lam.size + 1), ring)


def complete_homogeneous(ring: PolyRing, degree: int) -> list[GradedPolynomial]:
    """h_0..h_degree in all variables of ``ring``."""
    h = [ring.one()] + [ring.zero()] * degree
    for z in ring.gens():
        for k in range(1, degree + 1):
            h[k] = h[k] + z * h[k - 1]
    return h


def schur_z(mu, n: int, ring: PolyRing | None = None) -> GradedPolynomial:
    """Schur polynomial s_mu(z_1, ..., z_n)."""
    mu = _as_partition(mu)
    if len(mu) > n:
        raise ValueError(f"partition of length {len(mu)} needs at least that many variables, got {n}")
    ring = ring or z_ring(n)
    if not len(mu):
        return ring.one()
    return _jacobi_trudi(mu, complete_homogeneous(ring, mu.size), ring)


def miwa_images(t: PolyRing, z: PolyRing, signs: Sequence[int] | None = None) -> dict[str, GradedPolynomial]:
    """t_k -> sum_i sign_i z_i^k / k."""
    zs = z.gens()
    signs = signs or [1] * len(zs)
    out = {}
    for k in range(1, t.nvars + 1):
        acc = z.zero()
        for s, zi in zip(signs, zs):
            acc = acc + zi ** k * s
        out[f"t{k}"] = acc / k
    return out


def miwa(poly: GradedPolynomial, n: int, signs: Sequence[int] | None = None) -> GradedPolynomial:
    z = z_ring(n)
    return poly.substitute(miwa_images(poly.ring, z, signs), target=z)


@dataclass(frozen=True)
class LambdaConstants:
    partition: Partition
    w: tuple[int, ...]  # (w_1, ..., w_l) with w_i = lambda_{l+1-i} + i - 1
    N: tuple[int, ...]  # N_{lambda,k} for k = 0..l
    N_prime: int
    c_prime: tuple[Fraction, ...]  # c'_{lambda,k} for k = 0..l
    c_tilde: Fraction

    @property
    def length(self) -> int:
        return len(self.partition)

    def b_tilde(self, n: int, genus: int | None = None) -> Fraction:
        g = self.length if genus is None else genus
        pairs = n * (n - 1) // 2
        sign = -1 if (g * pairs) % 2 else 1
        return sign * self.c_tilde ** pairs / self.c_prime[1] ** (n * n)

    def b_prime(self, n: int, genus: int | None = None) -> Fraction:
        return self.b_tilde(n, genus) * self.c_prime[n]

    def as_dict(self) -> dict:
        s = lambda c: str(c)
        return {
            "partition": list(self.partition.parts),
            "w": list(self.w),
            "N": list(self.N),
            "N_prime_1": self.N_prime,
            "c_prime": [s(c) for c in self.c_prime],
            "c_tilde": s(self.c_tilde),
        }


def _vandermonde(ws: Sequence[int]) -> int:
    return prod(ws[j] - ws[i] for i in range(len(ws)) for j in range(i + 1, len(ws)))


def lambda_constants(lam) -> LambdaConstants:
    lam = _as_partition(lam)
    l = len(lam)
    if not l:
        raise ValueError("empty partition")
    w = tuple(lam[l - i] + i - 1 for i in range(1, l + 1))
    N = tuple(sum(lam.parts[k:]) for k in range(l + 1))
    N_prime = sum(lam.parts[1:]) - l + 1
    c_prime = []
    for k in range(l + 1):
        ws = w[: l - k]
        c_prime.append(Fraction(factorial(N[k]) * _vandermonde(ws), prod(factorial(x) for x in ws)))
    ws = w[: l - 1]
    c_tilde = Fraction(factorial(N_prime) * _vandermonde(ws), prod(factorial(x - 1) for x in ws))
    return LambdaConstants(lam, w, N, N_prime, tuple(c_prime), c_tilde)
