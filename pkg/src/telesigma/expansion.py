"""Local expansions at the point at infinity.

With the local parameter normalized so that x_1 = z^(-a_1) and every
x_k = z^(-a_k) (1 + e_k1 z + e_k2 z^2 + ...), the unit parts
U_k = 1 + sum e_kl z^l satisfy, for 2 <= k <= m,

    U_k^(d_{k-1}/d_k) = prod_{s<k} U_s^(l_ks)
                        + sum_j kappa^(k)_j z^(deg kappa) prod_s U_s^(j_s).

The coefficient of z^l on the left is (d_{k-1}/d_k) e_kl plus terms of lower
order, so the e_kl are found one order at a time (l ascending, then k
ascending) by a linear solve. ``order`` below always means the relative
order of the unit parts: U_k is known modulo z^order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Sequence

import flint

from .curve import CurveModel, XPolynomial, equation_degree, jacobian_G, h_matrix, kappa_name, kappa_support, kappa_weight
from .polynomial import GradedPolynomial, PolyRing
from .semigroup import ConsistencyError
from .series import BiSeries, PrecisionError, TruncatedSeries, bi_expand_inverse_diff_square


def _perm_sign(p):
    sign, p = 1, list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def determinant(matrix, one):
    """Leibniz determinant of a small square matrix over any commutative ring."""
    n = len(matrix)
    total = None
    for p in permutations(range(n)):
        term = one
        for i in range(n):
            term = term * matrix[i][p[i]]
        if _perm_sign(p) < 0:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else one


class _OnlineProducts:
    """Coefficients of prod_s U_s^(v_s), extended one order at a time.

    Asking for order l of a product needs every U_s it involves to be known
    through order l; an IndexError signals a scheduling bug.
    """

    def __init__(self, units: dict[int, list], ctx):
        self.units = units
        self.ctx = ctx
        self.cache: dict[tuple, list] = {}
        self.one = ctx.constant(1)
        self.zero = ctx.from_dict({})

    def get(self, v: tuple[tuple[int, int], ...], l: int):
        # v: sorted tuple of (s, exponent) with exponent > 0
        if not v:
            return self.one if l == 0 else self.zero
        coeffs = self.cache.setdefault(v, [])
        while len(coeffs) <= l:
            coeffs.append(self._next(v, len(coeffs)))
        return coeffs[l]

    def _next(self, v, l):
        if l == 0:
            return self.one
        if len(v) == 1:
            s, n = v[0]
            U = self.units[s]
            P = self.cache[v]
            acc = self.zero
            for j in range(1, l + 1):
                uj = U[j]
                if uj.is_zero() or P[l - j].is_zero():
                    continue
                f = (n + 1) * j - l
                if f:
                    acc = acc + uj * P[l - j] * f
            return acc / l
        head, rest = v[:1], v[1:]
        acc = self.zero
        for i in range(l + 1):
            a = self.get(head, i)
            if a.is_zero():
                continue
            b = self.get(rest, l - i)
            if not b.is_zero():
                acc = acc + a * b
        return acc


def _unit_key(vec: Sequence[int]) -> tuple[tuple[int, int], ...]:
    # vec is a full exponent vector over x_1..x_m; x_1 has no unit part
    return tuple((s + 1, n) for s, n in enumerate(vec) if n and s > 0)


def solve_units(curve: CurveModel, order: int) -> dict[int, list]:
    """Raw coefficient lists of U_2..U_m modulo z^order."""
    if order < 1:
        raise ValueError("order must be positive")
    sg = curve.semigroup
    m = sg.m
    ring = curve.coeff_ring
    ctx = ring.ctx
    units = {k: [ctx.constant(1)] for k in range(2, m + 1)}
    powers = {k: [ctx.constant(1)] for k in range(2, m + 1)}  # U_k^(d_{k-1}/d_k)
    online = _OnlineProducts(units, ctx)

    plan = {}
    for k in range(2, m + 1):
        terms = []
        for j in kappa_support(sg, k):
            name = kappa_name(k, j)
            if curve.kappa_mode == "symbolic":
                coef = ring.gen(name).raw
            else:
                val = curve.kappa_values.get(name, 0)
                if not val:
                    continue
                coef = ctx.constant(flint.fmpq(val.numerator, val.denominator))
            terms.append((kappa_weight(sg, k, j), coef, _unit_key(j)))
        plan[k] = (sg.ratio(k), _unit_key(sg.l_rows[k]), terms)

    for l in range(1, order):
        for k in range(2, m + 1):
            D, lkey, terms = plan[k]
            U, P = units[k], powers[k]
            T = ctx.from_dict({})
            for j in range(1, l):
                if U[j].is_zero() or P[l - j].is_zero():
                    continue
                f = (D + 1) * j - l
                if f:
                    T = T + U[j] * P[l - j] * f
            T = T / l
            rhs = online.get(lkey, l)
            for wt, coef, key in terms:
                if wt <= l:
                    prod = online.get(key, l - wt)
                    if not prod.is_zero():
                        rhs = rhs + coef * prod
            ekl = (rhs - T) / D
            U.append(ekl)
            P.append(ekl * D + T)
    return units


@dataclass(frozen=True, eq=False)
class LocalExpansion:
    """Expansions at infinity of a curve, to unit-part order ``order``."""

    curve: CurveModel
    order: int
    units: tuple[TruncatedSeries, ...]  # U_1 .. U_m (U_1 = 1 exactly)
    x_series: tuple[TruncatedSeries, ...]

    @property
    def ring(self) -> PolyRing:
        return self.curve.coeff_ring

    @property
    def genus(self) -> int:
        return self.curve.genus

    @property
    def gaps(self) -> tuple[int, ...]:
        return self.curve.semigroup.gaps

    def e(self, k: int, l: int) -> GradedPolynomial:
        """Coefficient e_kl of x_k = z^(-a_k)(1 + sum e_kl z^l)."""
        return self.units[k - 1].coefficient(l)

    def equation_residuals(self) -> dict[int, TruncatedSeries]:
        """F_i(x(z)) for each i; every known coefficient must vanish."""
        return {i: self.curve.F(i).evaluate(self.x_series) for i in range(2, self.curve.m + 1)}

    @cached_property
    def jacobian_series(self) -> list[list[TruncatedSeries]]:
        return [[g.evaluate(self.x_series) for g in row] for row in jacobian_G(self.curve)]

    @cached_property
    def detG_series(self) -> TruncatedSeries:
        one = TruncatedSeries.monomial(self.ring, 0)
        return determinant(self.jacobian_series, one)

    def phi_series(self, exponent: Sequence[int]) -> TruncatedSeries:
        out = TruncatedSeries.monomial(self.ring, 0)
        for k, n in enumerate(exponent):
            if n:
                out = out * self.x_series[k] ** n
        return out

    @cached_property
    def dx1_over_detG(self) -> TruncatedSeries:
        """(dx_1/dz) / det G, the common factor of the holomorphic differentials."""
        a1 = self.curve.a[0]
        dx1 = TruncatedSeries.monomial(self.ring, -a1 - 1, -a1)
        return dx1 * self.detG_series.inverse()

    @cached_property
    def du_series(self) -> tuple[TruncatedSeries, ...]:
        """du_{w_i}/dz for i = 1..g, in gap order."""
        g = self.genus
        phi = self.curve.phi(g)
        factor = self.dx1_over_detG
        out = []
        for i in range(1, g + 1):
            s = -(self.phi_series(phi.exponents[g - i]) * factor)
            w = self.gaps[i - 1]
            if s.valuation != w - 1 or s.leading_coefficient() != 1:
                raise ConsistencyError(f"du_{w} does not start with z^{w - 1}: {s}")
            out.append(s)
        return tuple(out)

    def b_matrix(self, columns: int | None = None) -> list[list[GradedPolynomial]]:
        """b_ij = coefficient of z^(j-1) in du_{w_i}/dz, for j = 1..columns."""
        du = self.du_series
        known = [s.truncation for s in du if s.truncation is not None]
        avail = min(known) if known else None
        if columns is None:
            columns = avail if avail is not None else self.order
        if avail is not None and columns > avail:
            raise PrecisionError(f"only {avail} columns of B are known at order {self.order}")
        return [[s.coefficient(j - 1) for j in range(1, columns + 1)] for s in du]

    @cached_property
    def top_differential_unit(self) -> TruncatedSeries:
        """z^(2-2g) du_{2g-1}/dz = 1 + sum e'_l z^l."""
        g = self.genus
        return self.du_series[-1].shift(-(2 * g - 2))

    @cached_property
    def detG_unit(self) -> TruncatedSeries:
        """det G / (a_1 z^(-v)) = 1 + sum e''_l z^l."""
        s = self.detG_series
        return (s / s.leading_coefficient()).shift(-s.valuation)

    def c_series(self, count: int | None = None) -> list[GradedPolynomial]:
        """c_1..c_count from log(z^(1-g) sqrt(du_{2g-1}/dz)) = sum c_i z^i / i."""
        V = self.top_differential_unit
        avail = None if V.truncation is None else V.truncation - 1
        if count is None:
            count = avail if avail is not None else self.order - 1
        if avail is not None and count > avail:
            raise PrecisionError(
                f"c_{count} needs unit-part order {count + 1}, expansion has {self.order}"
            )
        L = V.log(order=count + 1)
        return [L.coefficient(i) * i / 2 for i in range(1, count + 1)]

    def summary(self) -> dict:
        res = self.equation_residuals()
        return {
            "order": self.order,
            "residuals_vanish": all(s.is_zero() for s in res.values()),
            "residual_truncations": {str(i): s.truncation for i, s in res.items()},
        }


def solve_x_series(curve: CurveModel, order: int) -> LocalExpansion:
    """Solve for the x_k(z) expansions with unit parts known modulo z^order."""
    raw = solve_units(curve, order)
    ring = curve.coeff_ring
    a = curve.a
    units = [TruncatedSeries.monomial(ring, 0)]
    xs = [TruncatedSeries.monomial(ring, -a[0])]
    for k in range(2, curve.m + 1):
        u = TruncatedSeries._from_raw(ring, 0, raw[k], order)
        units.append(u)
        xs.append(u.shift(-a[k - 1]))
    if curve.is_degenerate:
        # at kappa = 0 the unit parts are exactly 1
        if any(not (u - 1).is_zero() for u in units[1:]):
            raise ConsistencyError("nonzero corrections on the monomial curve")
        units = [TruncatedSeries.monomial(ring, 0)] * curve.m
        xs = [TruncatedSeries.monomial(ring, -x) for x in a]
    return LocalExpansion(curve, order, tuple(units), tuple(xs))


def du_series(exp: LocalExpansion) -> tuple[tuple[TruncatedSeries, ...], list[list[GradedPolynomial]]]:
    return exp.du_series, exp.b_matrix()


def c_series(exp: LocalExpansion, count: int) -> list[GradedPolynomial]:
    return exp.c_series(count)


@dataclass(frozen=True)
class HomogeneityReport:
    checked: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def homogeneity_audit(exp: LocalExpansion) -> HomogeneityReport:
    """Check e_kl, e'_l, e''_l, b_ij (j > w_i) and c_i against their predicted degrees."""
    checked, bad = 0, []

    def check(label, poly, degree):
        nonlocal checked
        checked += 1
        if not poly.is_homogeneous(degree):
            bad.append(f"{label} not homogeneous of degree {degree}")

    for k in range(2, exp.curve.m + 1):
        for l in range(1, exp.order):
            check(f"e_{k},{l}", exp.e(k, l), l)
    V = exp.top_differential_unit
    for l in range(1, V.truncation):
        check(f"e'_{l}", V.coefficient(l), l)
    W = exp.detG_unit
    for l in range(1, W.truncation):
        check(f"e''_{l}", W.coefficient(l), l)
    B = exp.b_matrix()
    for i, w in enumerate(exp.gaps):
        for j in range(w + 1, len(B[i]) + 1):
            check(f"b_{i + 1},{j}", B[i][j - 1], j - w)
    for i, c in enumerate(exp.c_series(), start=1):
        check(f"c_{i}", c, i)
    return HomogeneityReport(checked, bad)


# -- the bilinear differential ---------------------------------------------


@dataclass(frozen=True, eq=False)
class OmegaExpansion:
    """d_y Omega(x(z1), x(z2)) and its remainder after removing 1/(z1-z2)^2."""

    expansion: LocalExpansion
    d_omega: BiSeries
    remainder: BiSeries

    @property
    def z1_order(self) -> int:
        return self.remainder.z1_truncation

    def pole_orders(self) -> dict[int, int | None]:
        return self.remainder.pole_orders()

    def dr_singular_parts(self):
        """Solve the singular part of the remainder against du_{w_i}(z1).

        Returns ``(parts, residual)``: ``parts[i]`` is the candidate singular
        part of dr_{w_{i+1}}/dz2 (negative powers of z2 only) and
        ``residual`` is what the du_{w_i} cannot explain; it vanishes when
        the singular structure is as the theory predicts.
        """
        sing = self.remainder.singular_part()
        n = self.z1_order
        gaps = self.expansion.gaps
        B = self.expansion.b_matrix(n) if n > 0 else [[] for _ in gaps]
        ring = self.expansion.ring
        t = []
        for i, w in enumerate(gaps):
            if w - 1 >= n:
                break
            acc = sing.row(w - 1)
            for ip in range(i):
                acc = acc - t[ip].scale(B[ip][w - 1])
            t.append(acc)
        rows = {}
        for r in sing.row_indices():
            acc = sing.row(r)
            if r >= 0:
                for i, ti in enumerate(t):
                    b = B[i][r]
                    if b:
                        acc = acc - ti.scale(b)
            rows[r] = acc
        residual = BiSeries(ring, rows, n, sing.z1_valuation)
        return [-x for x in t], residual


def omega_expansion(exp: LocalExpansion, z1_order: int) -> OmegaExpansion:
    """Expand d_y Omega in |z1| < |z2| through z1^(z1_order - 1)."""
    curve = exp.curve
    m, a1 = curve.m, curve.a[0]
    ring = exp.ring
    hring, H = h_matrix(curve)
    detH = determinant(H, hring.one())
    xs = [f"x{k}" for k in range(1, m + 1)]
    ys = [f"y{k}" for k in range(1, m + 1)]
    parts = detH.split(xs + ys, ring)
    A = exp.dx1_over_detG

    # group by x-monomial: z2 side collects kappa coefficients and y-monomials
    by_alpha: dict[tuple, TruncatedSeries] = {}
    for key, c in parts.items():
        alpha, beta = key[:m], key[m:]
        s2 = exp.phi_series(beta).scale(c)
        by_alpha[alpha] = by_alpha[alpha] + s2 if alpha in by_alpha else s2
    z1_side = {alpha: exp.phi_series(alpha) * A for alpha in by_alpha}

    trunc = z1_order
    for alpha, s1 in z1_side.items():
        if s1.truncation is None:
            continue
        avail = a1 + s1.truncation
        if avail < z1_order:
            need = exp.order + (z1_order - avail)
            raise PrecisionError(f"z1 order {z1_order} needs expansion order >= {need}")
    lowest = min(s.valuation for s in z1_side.values())
    total = None
    n = 0
    while a1 * (n + 1) + lowest < z1_order:
        for alpha, s1 in z1_side.items():
            s1n = s1.shift(a1 * (n + 1))
            if s1n.valuation >= z1_order:
                continue
            term = BiSeries.outer(s1n, by_alpha[alpha].shift(-a1 * n), z1_order)
            total = term if total is None else total + term
        n += 1
    if total is None:
        total = BiSeries(ring, {}, trunc)
    d_omega = total.derivative_z2()
    for i in d_omega.row_indices():
        if i < 0 and not d_omega.row(i).is_zero():
            raise ConsistencyError(f"d_y Omega has a z1^{i} term")
    d_omega = BiSeries(ring, {i: d_omega.row(i) for i in d_omega.row_indices() if i >= 0}, d_omega.z1_truncation)
    principal = bi_expand_inverse_diff_square(z1_order, ring)
    return OmegaExpansion(exp, d_omega, d_omega - principal)


def assemble_qhat(
    omega: OmegaExpansion, dr_series: Sequence[TruncatedSeries], z2_order: int | None = None
) -> dict[tuple[int, int], GradedPolynomial]:
    """q-hat_ij from externally supplied dr_i/dz2 series (one per gap).

    omega-hat = d_y Omega + sum_i du_i(z1) dr_i(z2); after subtracting
    1/(z1 - z2)^2 no negative power of z2 may remain. The normalization of
    the dr_i is the caller's responsibility. Exactly known rows are listed
    up to z2^(z2_order - 1) (default: the z1 order).
    """
    exp = omega.expansion
    if len(dr_series) != exp.genus:
        raise ValueError(f"need {exp.genus} dr series, got {len(dr_series)}")
    n = omega.z1_order
    Q = omega.remainder
    for du, dr in zip(exp.du_series, dr_series):
        Q = Q + BiSeries.outer(du, dr, n)
    out = {}
    for i in Q.row_indices():
        r = Q.row(i)
        if not r.is_zero() and r.valuation < 0:
            raise ValueError(f"dr tails leave a z1^{i} z2^{r.valuation} singular term")
        top = r.truncation if r.truncation is not None else (z2_order or n)
        for j in range(top):
            out[(i + 1, j + 1)] = r.coefficient(j)
    return out


def qhat_asymmetry(qhat: dict[tuple[int, int], GradedPolynomial]) -> list[tuple[int, int]]:
    """Index pairs (i, j), i < j, where both entries are known and differ."""
    return sorted((i, j) for (i, j), q in qhat.items() if i < j and (j, i) in qhat and qhat[(j, i)] != q)


def local_expansion(curve: CurveModel, order: int) -> LocalExpansion:
    return solve_x_series(curve, order)
