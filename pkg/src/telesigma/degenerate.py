"""The sigma function of the monomial curve (all kappa = 0) and its identities.

At kappa = 0 the sigma function is the Schur polynomial s_lambda(t) with
t_w = u_w on the gap indices and the other t_k set to zero, and the Abel map
from infinity is u_w = sum sign_i z_i^w / w. Every identity below is a
weighted-homogeneous statement in the z_i, so it is checked as an exact
polynomial identity after clearing the explicit denominators.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .curve import build_curve
from .expansion import solve_x_series
from .polynomial import GradedPolynomial, PolyRing
from .schur import LambdaConstants, determinant, lambda_constants, schur_t, schur_z, t_ring
from .semigroup import SemigroupData, semigroup
from .serialize import fraction_str

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FormalPoint:
    """A point near infinity entering a divisor with the given sign."""

    symbol: str
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def __neg__(self):
        return FormalPoint(self.symbol, -self.sign)


def plus(*symbols: str) -> list[FormalPoint]:
    return [FormalPoint(s, 1) for s in symbols]


def z_ring_for(symbols: Iterable[str]) -> PolyRing:
    seen = []
    for s in symbols:
        if s not in seen:
            seen.append(s)
    return PolyRing(seen)


def _ring_of(points: Sequence[FormalPoint], ring: PolyRing | None) -> PolyRing:
    return ring if ring is not None else z_ring_for(p.symbol for p in points)


def abel_degenerate(sg: SemigroupData, points: Sequence[FormalPoint], ring: PolyRing | None = None) -> dict[int, GradedPolynomial]:
    """u_w for each gap w: the sum of sign * z^w / w over the points."""
    ring = _ring_of(points, ring)
    out = {}
    for w in sg.gaps:
        acc = ring.zero()
        for p in points:
            acc = acc + ring.gen(p.symbol) ** w * Fraction(p.sign, w)
        out[w] = acc
    return out


@dataclass(frozen=True, eq=False)
class DegenerateSigma:
    semigroup: SemigroupData

    @property
    def genus(self) -> int:
        return self.semigroup.genus

    @property
    def partition(self):
        return self.semigroup.partition

    @cached_property
    def constants(self) -> LambdaConstants:
        return lambda_constants(self.partition)

    @cached_property
    def schur(self) -> GradedPolynomial:
        return schur_t(self.partition, t_ring(self.partition.size))

    @cached_property
    def _derivatives(self) -> dict[int, GradedPolynomial]:
        return {0: self.schur}

    def t_derivative(self, n: int) -> GradedPolynomial:
        """d^n/dt_1^n of s_lambda (d/du_1 = d/dt_1 since w_1 = 1)."""
        if n < 0:
            raise ValueError("derivative order must be nonnegative")
        cache = self._derivatives
        k = max(j for j in cache if j <= n)
        while k < n:
            cache[k + 1] = cache[k].derivative("t1")
            k += 1
        return cache[n]

    def evaluate(self, n: int, points: Sequence[FormalPoint], ring: PolyRing | None = None) -> GradedPolynomial:
        """d_{u_1}^n sigma(sum sign_i p_i) as a polynomial in the z_i."""
        ring = _ring_of(points, ring)
        u = abel_degenerate(self.semigroup, points, ring)
        t = self.schur.ring
        images = {name: ring.zero() for name in t.names}
        for w, uw in u.items():
            images[f"t{w}"] = uw
        out = self.t_derivative(n).substitute(images, target=ring)
        degree = self.partition.size - n
        if not out.is_homogeneous(degree):
            raise AssertionError(f"d^{n} sigma is not homogeneous of degree {degree}")
        return out


def degenerate_sigma(a) -> DegenerateSigma:
    return DegenerateSigma(a if isinstance(a, SemigroupData) else semigroup(a))


def sigma_derivative_eval(sigma: DegenerateSigma, n: int, points: Sequence[FormalPoint], ring: PolyRing | None = None) -> GradedPolynomial:
    return sigma.evaluate(n, points, ring)


# -- verification reports --------------------------------------------------


@dataclass
class Verification:
    name: str
    curve: tuple[int, ...]
    params: dict
    residuals: dict[str, GradedPolynomial] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.notes and all(r.is_zero() for r in self.residuals.values())

    def residual_monomials(self, limit: int = 20) -> dict[str, list]:
        out = {}
        for key, r in self.residuals.items():
            if r.is_zero():
                continue
            items = sorted(r.terms().items())[:limit]
            out[key] = [
                {"monomial": {r.ring.names[i]: e for i, e in enumerate(exp) if e}, "coeff": fraction_str(c)}
                for exp, c in items
            ]
        return out

    def as_dict(self) -> dict:
        return {
            "check": self.name,
            "curve": list(self.curve),
            "params": self.params,
            "status": "verified" if self.ok else "failed",
            "residual_monomials": self.residual_monomials(),
            "notes": list(self.notes),
        }


def _z_symbols(n: int) -> list[str]:
    return [f"z{i}" for i in range(1, n + 1)]


def _split_low(poly: GradedPolynomial, var: str, below: int) -> GradedPolynomial:
    """The part of ``poly`` whose degree in ``var`` is below ``below``."""
    i = poly.ring.index(var)
    terms = {e: c for e, c in poly.terms().items() if e[i] < below}
    return poly.ring.from_terms(terms)


def _coefficient_in(poly: GradedPolynomial, var: str, degree: int) -> GradedPolynomial:
    """Coefficient of var^degree, kept in the same ring."""
    i = poly.ring.index(var)
    terms = {}
    for e, c in poly.terms().items():
        if e[i] == degree:
            e = list(e)
            e[i] = 0
            terms[tuple(e)] = c
    return poly.ring.from_terms(terms)


def verify_th51(sigma: DegenerateSigma, k: int) -> Verification:
    """d^{N_k} sigma(p_1 + ... + p_k) = c'_k S_{(lambda_1..lambda_k)}(z_1..z_k)."""
    g, lam, C = sigma.genus, sigma.partition, sigma.constants
    if not 1 <= k <= g:
        raise ValueError(f"k must lie in 1..{g}")
    syms = _z_symbols(k)
    ring = z_ring_for(syms)
    lhs = sigma.evaluate(C.N[k], plus(*syms), ring)
    rhs = schur_z(lam.parts[:k], k, ring) * C.c_prime[k]
    return Verification("leading-schur", sigma.semigroup.a, {"k": k}, {"residual": lhs - rhs})


def verify_restriction(sigma: DegenerateSigma, k: int) -> Verification:
    """Expanding the k-point derivative in z_k recovers the (k-1)-point one.

    The lowest power of z_k is lambda_k and its coefficient is
    c'_k / c'_{k-1} times d^{N_{k-1}} sigma(p_1 + ... + p_{k-1}).
    """
    g, lam, C = sigma.genus, sigma.partition, sigma.constants
    if not 1 <= k <= g:
        raise ValueError(f"k must lie in 1..{g}")
    syms = _z_symbols(k)
    ring = z_ring_for(syms)
    full = sigma.evaluate(C.N[k], plus(*syms), ring)
    prev = sigma.evaluate(C.N[k - 1], plus(*syms[:-1]), ring)
    zk = syms[-1]
    head = _coefficient_in(full, zk, lam[k - 1])
    ratio = C.c_prime[k] / C.c_prime[k - 1]
    return Verification(
        "restriction",
        sigma.semigroup.a,
        {"k": k},
        {"below_lambda_k": _split_low(full, zk, lam[k - 1]), "leading": head - prev * ratio},
    )


def _difference(sigma: DegenerateSigma, n: int, ring: PolyRing) -> GradedPolynomial:
    return sigma.evaluate(n, [FormalPoint("z1", 1), FormalPoint("z2", -1)], ring)


def verify_th52(sigma: DegenerateSigma) -> Verification:
    """Derivatives of sigma(p_1 - p_2): vanishing, leading form, and z_2 expansion."""
    g, C = sigma.genus, sigma.constants
    ring = z_ring_for(["z1", "z2"])
    z1, z2 = ring.gens()
    res = {}
    for n in range(C.N_prime):
        res[f"vanishing_{n}"] = _difference(sigma, n, ring)
    sign = -1 if (g - 1) % 2 else 1
    top = _difference(sigma, C.N_prime, ring)
    res["leading_form"] = top - (z1 * z2) ** (g - 1) * (z1 - z2) * (C.c_tilde * sign)
    one_point = sigma.evaluate(C.N[1], plus("z1"), ring)
    predicted = one_point * z2 ** (g - 1) * (C.c_tilde / C.c_prime[1] * sign)
    res["z2_expansion"] = _split_low(top - predicted, "z2", g)
    return Verification("difference", sigma.semigroup.a, {"N_prime_1": C.N_prime}, res)


def prime_degenerate(sigma: DegenerateSigma, p1: str, p2: str, ring: PolyRing | None = None) -> GradedPolynomial:
    """The prime function E(p_1, p_2) as a sigma derivative at kappa = 0."""
    g, C = sigma.genus, sigma.constants
    pts = [FormalPoint(p1, 1), FormalPoint(p2, -1)]
    sign = -1 if (g - 1) % 2 else 1
    return sigma.evaluate(C.N_prime, pts, ring) * (sign / C.c_tilde)


def prime_at_infinity(sigma: DegenerateSigma, p: str, ring: PolyRing | None = None) -> GradedPolynomial:
    """E(infinity, p) = d^{N_1} sigma(p) / c'_1."""
    C = sigma.constants
    return sigma.evaluate(C.N[1], plus(p), ring) / C.c_prime[1]


# -- addition formulae -----------------------------------------------------


def phi_exponents(sg: SemigroupData, n: int) -> list[int]:
    """z-exponents of phi_1..phi_n at kappa = 0, read off the monomial curve expansions."""
    curve = build_curve(sg)
    exp = solve_x_series(curve, 1)
    out = []
    for alpha in curve.phi(n).exponents:
        s = exp.phi_series(alpha)
        if not s.is_exact or len(s.coeffs) != 1 or s.leading_coefficient() != 1:
            raise AssertionError(f"phi with exponent {alpha} is not a monic monomial at kappa = 0")
        out.append(s.valuation)
    return out


def _bareiss(matrix, ring: PolyRing) -> GradedPolynomial:
    """Fraction-free Gaussian elimination; every division is exact."""
    M = [list(row) for row in matrix]
    n = len(M)
    sign, prev = 1, ring.one()
    for k in range(n - 1):
        pivot = next((r for r in range(k, n) if not M[r][k].is_zero()), None)
        if pivot is None:
            return ring.zero()
        if pivot != k:
            M[k], M[pivot] = M[pivot], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]).exact_div(prev)
        prev = M[k][k]
    det = M[n - 1][n - 1] if n else ring.one()
    return det if sign > 0 else -det


def _cleared_phi_matrix(sg: SemigroupData, syms: Sequence[str], ring: PolyRing):
    """(z_b^(W + e_a)) with e_a the phi exponents and W = -min e_a."""
    e = phi_exponents(sg, len(syms))
    W = -min(e)
    return [[ring.gen(s) ** (W + ea) for s in syms] for ea in e], W


def _symbols(n: int, symbols: Sequence[str] | None) -> list[str]:
    syms = list(symbols) if symbols is not None else _z_symbols(n)
    if len(syms) != n:
        raise ValueError(f"need {n} point symbols, got {len(syms)}")
    return syms


def verify_addition(sigma: DegenerateSigma, n: int, symbols: Sequence[str] | None = None) -> Verification:
    """Cleared form of the n-point addition formula.

    For n >= g:  sigma(sum p) prod_{i<j} d^{N'} sigma(p_j - p_i)
                 = b~_n prod_i (d^{N_1} sigma(p_i))^n det(phi_a(p_b)),
    for n < g the left factor is d^{N_n} sigma(sum p) and the constant b'_n.
    """
    if n < 1:
        raise ValueError("need at least one point")
    sg, g, C = sigma.semigroup, sigma.genus, sigma.constants
    syms = _symbols(n, symbols)
    ring = z_ring_for(syms)
    if n >= g:
        head = sigma.evaluate(0, plus(*syms), ring)
        const = C.b_tilde(n, g)
    else:
        head = sigma.evaluate(C.N[n], plus(*syms), ring)
        const = C.b_prime(n, g)
    lhs = head
    for i in range(n):
        for j in range(i + 1, n):
            lhs = lhs * sigma.evaluate(C.N_prime, [FormalPoint(syms[j], 1), FormalPoint(syms[i], -1)], ring)
    denom = ring.one()
    for s in syms:
        denom = denom * sigma.evaluate(C.N[1], plus(s), ring) ** n
    matrix, W = _cleared_phi_matrix(sg, syms, ring)
    det = _bareiss(matrix, ring)
    clear = ring.one()
    for s in syms:
        clear = clear * ring.gen(s) ** W
    residual = lhs * clear - denom * det * const
    v = Verification("addition", sg.a, {"n": n, "constant": fraction_str(const)}, {"residual": residual})
    if not residual.is_zero():
        log.warning("addition formula residual for %s, n=%d has %d terms", sg.a, n, len(residual))
    return v


def verify_th61(sigma: DegenerateSigma, n: int, symbols: Sequence[str] | None = None) -> Verification:
    """Product formula through the prime function, by exact division.

    sigma(sum p) = prod_i E(inf, p_i)^n / prod_{i<j} E(p_i, p_j) * det(phi_a(p_b))
    for n >= g; for n < g the left side is d^{N_n} sigma(sum p) / c'_n.
    """
    if n < 1:
        raise ValueError("need at least one point")
    sg, g, C = sigma.semigroup, sigma.genus, sigma.constants
    syms = _symbols(n, symbols)
    ring = z_ring_for(syms)
    numerator = ring.one()
    for s in syms:
        numerator = numerator * prime_at_infinity(sigma, s, ring) ** n
    matrix, W = _cleared_phi_matrix(sg, syms, ring)
    numerator = numerator * determinant(matrix, ring)
    denominator = ring.one()
    for i in range(n):
        for j in range(i + 1, n):
            denominator = denominator * prime_degenerate(sigma, syms[i], syms[j], ring)
    for s in syms:
        denominator = denominator * ring.gen(s) ** W
    if n >= g:
        actual = sigma.evaluate(0, plus(*syms), ring)
    else:
        actual = sigma.evaluate(C.N[n], plus(*syms), ring) / C.c_prime[n]
    v = Verification("product", sg.a, {"n": n})
    if denominator.is_zero():
        # coincident points: the prime factor vanishes, so only the cleared form is meaningful
        v.residuals["cleared"] = actual * denominator - numerator
        return v
    try:
        predicted = numerator.exact_div(denominator)
    except ArithmeticError:
        v.notes.append("right-hand side is not a polynomial")
        v.residuals["cleared"] = actual * denominator - numerator
        return v
    v.residuals["residual"] = actual - predicted
    return v


def verify_all(sigma: DegenerateSigma, max_n: int | None = None) -> list[Verification]:
    """Every degenerate check for one curve, n up to max_n (default g + 2)."""
    g = sigma.genus
    max_n = g + 2 if max_n is None else max_n
    out = [verify_th51(sigma, k) for k in range(1, g + 1)]
    out += [verify_restriction(sigma, k) for k in range(1, g + 1)]
    out.append(verify_th52(sigma))
    out += [verify_addition(sigma, n) for n in range(1, max_n + 1)]
    out += [verify_th61(sigma, n) for n in range(1, max_n + 1)]
    return out
