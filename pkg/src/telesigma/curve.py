"""Defining equations of a telescopic curve.

For 2 <= i <= m the curve equation is

    F_i = x_i^(d_{i-1}/d_i) - prod_j x_j^(l_ij) - sum kappa^(i)_j x^j

with the kappa sum running over box vectors j of weight below a_i d_{i-1}/d_i.
Polynomials in x are kept in a two-level form: a map from x exponent vectors to
coefficients in the kappa ring.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .polynomial import Exponent, GradedPolynomial, PolyRing, to_fmpq
from .semigroup import ConsistencyError, SemigroupData
from .series import TruncatedSeries


class CurveError(ValueError):
    pass


def kappa_name(i: int, j: Sequence[int]) -> str:
    return f"k{i}_" + ".".join(str(x) for x in j)


def parse_kappa_name(name: str) -> tuple[int, tuple[int, ...]]:
    try:
        head, tail = name.split("_", 1)
        if not head.startswith("k"):
            raise ValueError
        return int(head[1:]), tuple(int(x) for x in tail.split("."))
    except ValueError:
        raise CurveError(f"malformed kappa name {name!r}") from None


def box_vectors(sg: SemigroupData, max_weight: int):
    """Box-set vectors of weight < max_weight."""
    a = sg.a
    ranges = [range(0, (max_weight - 1) // a[0] + 1 if max_weight > 0 else 0)]
    ranges += [range(b) for b in sg.box_bounds[1:]]
    for j in product(*ranges):
        if sg.weight(j) < max_weight:
            yield j


def equation_degree(sg: SemigroupData, i: int) -> int:
    """a_i d_{i-1}/d_i: the weighted degree of F_i."""
    return sg.a[i - 1] * sg.ratio(i)


def kappa_support(sg: SemigroupData, i: int) -> list[tuple[int, ...]]:
    """Exponent vectors carrying a kappa in F_i, sorted by weight."""
    if not 2 <= i <= sg.m:
        raise IndexError(f"equation index {i} outside 2..{sg.m}")
    top = equation_degree(sg, i)
    return sorted(box_vectors(sg, top), key=lambda j: (sg.weight(j), j))


def kappa_weight(sg: SemigroupData, i: int, j: Sequence[int]) -> int:
    return equation_degree(sg, i) - sg.weight(j)


def kappa_ring(sg: SemigroupData) -> PolyRing:
    """All kappa symbols of the curve, ordered by (i, exponent vector)."""
    keys = sorted((i, j) for i in range(2, sg.m + 1) for j in kappa_support(sg, i))
    return PolyRing([kappa_name(i, j) for i, j in keys], [kappa_weight(sg, i, j) for i, j in keys])


class XPolynomial:
    """Polynomial in x_1..x_m whose coefficients are kappa polynomials."""

    __slots__ = ("coeff_ring", "nvars", "terms")

    def __init__(self, coeff_ring: PolyRing, nvars: int, terms: Mapping[Exponent, GradedPolynomial]):
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError("exponent length mismatch")
            if not isinstance(c, GradedPolynomial):
                c = coeff_ring.const(c)
            if c:
                clean[e] = clean[e] + c if e in clean else c
        self.coeff_ring = coeff_ring
        self.nvars = nvars
        self.terms = {e: c for e, c in clean.items() if c}

    def __add__(self, other: XPolynomial) -> XPolynomial:
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t[e] + c if e in t else c
        return XPolynomial(self.coeff_ring, self.nvars, t)

    def __neg__(self):
        return XPolynomial(self.coeff_ring, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, XPolynomial) and self.terms == other.terms and self.nvars == other.nvars

    def derivative(self, k: int) -> XPolynomial:
        """d/dx_k with 1-based k."""
        out = {}
        for e, c in self.terms.items():
            if e[k - 1]:
                f = list(e)
                f[k - 1] -= 1
                out[tuple(f)] = c * e[k - 1]
        return XPolynomial(self.coeff_ring, self.nvars, out)

    def is_homogeneous(self, x_weights: Sequence[int], degree: int) -> bool:
        for e, c in self.terms.items():
            xw = sum(a * b for a, b in zip(e, x_weights))
            if not c.is_homogeneous(degree - xw):
                return False
        return True

    def evaluate(self, xs: Sequence[TruncatedSeries]) -> TruncatedSeries:
        """Substitute series for x_1..x_m."""
        cache: dict[tuple[int, int], TruncatedSeries] = {}

        def pw(k, n):
            if (k, n) not in cache:
                cache[(k, n)] = xs[k] ** n
            return cache[(k, n)]

        total = None
        for e, c in sorted(self.terms.items()):
            term = None
            for k, n in enumerate(e):
                if n:
                    term = pw(k, n) if term is None else term * pw(k, n)
            if term is None:
                term = TruncatedSeries.monomial(self.coeff_ring, 0)
            term = term.scale(c)
            total = term if total is None else total + term
        return total if total is not None else TruncatedSeries.zero(self.coeff_ring)

    def flatten(self, ring: PolyRing, x_names: Sequence[str]) -> GradedPolynomial:
        """The same polynomial in a ring containing the kappa and x variables."""
        idx_x = [ring.index(n) for n in x_names]
        idx_k = [ring.index(n) for n in self.coeff_ring.names]
        out = {}
        for e, c in self.terms.items():
            for ke, kc in c.terms().items():
                full = [0] * ring.nvars
                for i, v in zip(idx_k, ke):
                    full[i] += v
                for i, v in zip(idx_x, e):
                    full[i] += v
                key = tuple(full)
                out[key] = out.get(key, 0) + kc
        return ring.from_terms(out)

    def sorted_terms(self, x_weights: Sequence[int]):
        return sorted(self.terms.items(), key=lambda t: (-sum(a * b for a, b in zip(t[0], x_weights)), tuple(-v for v in reversed(t[0]))))

    def to_text(self, x_weights: Sequence[int]) -> str:
        out = []
        for e, c in self.sorted_terms(x_weights):
            mono = "*".join(f"x{k + 1}" + (f"^{n}" if n > 1 else "") for k, n in enumerate(e) if n)
            if c.is_constant():
                v = c.constant_value()
                sign = "-" if v < 0 else "+"
                mag = abs(v)
                body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else f"{mag}")
            else:
                sign, body = "+", f"({c})" + (f"*{mono}" if mono else "")
                if len(c) == 1 and c.terms() and next(iter(c.terms().values())) < 0:
                    sign, body = "-", f"({-c})" + (f"*{mono}" if mono else "")
            out.append((sign, body))
        if not out:
            return "0"
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text


@dataclass(frozen=True)
class PhiBasis:
    exponents: tuple[tuple[int, ...], ...]
    pole_orders: tuple[int, ...]

    def __len__(self):
        return len(self.exponents)

    def names(self) -> list[str]:
        out = []
        for e in self.exponents:
            mono = "*".join(f"x{k + 1}" + (f"^{n}" if n > 1 else "") for k, n in enumerate(e) if n)
            out.append(mono or "1")
        return out


def phi_basis(sg: SemigroupData, count: int) -> PhiBasis:
    """The first ``count`` box monomials ordered by pole order at infinity."""
    if count < 1:
        raise ValueError("count must be positive")
    orders = sg.nongaps(count)
    return PhiBasis(tuple(sg.represent(s) for s in orders), orders)


@dataclass(frozen=True)
class CurveModel:
    semigroup: SemigroupData
    kappa_mode: str  # "symbolic" or "explicit"
    kappa_values: Mapping[str, Fraction]
    coeff_ring: PolyRing
    equations: Mapping[int, XPolynomial]

    @property
    def a(self) -> tuple[int, ...]:
        return self.semigroup.a

    @property
    def m(self) -> int:
        return self.semigroup.m

    @property
    def l(self) -> dict[int, tuple[int, ...]]:
        return self.semigroup.l_rows

    @property
    def genus(self) -> int:
        return self.semigroup.genus

    def F(self, i: int) -> XPolynomial:
        return self.equations[i]

    def kappa_support(self, i: int) -> list[tuple[int, ...]]:
        return kappa_support(self.semigroup, i)

    def phi(self, count: int) -> PhiBasis:
        return phi_basis(self.semigroup, count)

    @property
    def is_degenerate(self) -> bool:
        return self.kappa_mode == "explicit" and not any(self.kappa_values.values())

    def flat_ring(self, with_y: bool = False) -> PolyRing:
        names = list(self.coeff_ring.names) + [f"x{k}" for k in range(1, self.m + 1)]
        weights = list(self.coeff_ring.weights) + list(self.a)
        if with_y:
            names += [f"y{k}" for k in range(1, self.m + 1)]
            weights += list(self.a)
        return PolyRing(names, weights)

    def equation_text(self, i: int) -> str:
        return f"F{i} = " + self.equations[i].to_text(self.a)


def build_curve(sg: SemigroupData, kappa: str | Mapping[str, object] = "zero") -> CurveModel:
    """Assemble F_2..F_m with symbolic kappas or an explicit rational assignment.

    ``kappa`` is ``"symbolic"``, ``"zero"``, or a map from canonical kappa names
    to rationals (missing names default to 0).
    """
    if sg.genus < 1:
        raise CurveError("genus must be at least 1")
    m = sg.m
    if kappa == "symbolic":
        ring = kappa_ring(sg)
        mode, values = "symbolic", {}
    else:
        assignment = {} if kappa == "zero" else dict(kappa)
        ring = PolyRing([])
        mode = "explicit"
        allowed = {kappa_name(i, j) for i in range(2, m + 1) for j in kappa_support(sg, i)}
        values = {}
        for name, v in assignment.items():
            if name not in allowed:
                raise CurveError(f"unsupported kappa index {name!r}")
            values[name] = Fraction(v) if not isinstance(v, str) else Fraction(v)
    equations = {}
    for i in range(2, m + 1):
        terms: dict = {}
        head = [0] * m
        head[i - 1] = sg.ratio(i)
        terms[tuple(head)] = ring.one()
        lrow = sg.l_rows[i]
        terms[lrow] = terms.get(lrow, ring.zero()) - 1
        for j in kappa_support(sg, i):
            name = kappa_name(i, j)
            c = -ring.gen(name) if mode == "symbolic" else ring.const(-values.get(name, 0))
            terms[j] = terms[j] + c if j in terms else c
        F = XPolynomial(ring, m, terms)
        if mode == "symbolic" and not F.is_homogeneous(sg.a, equation_degree(sg, i)):
            raise ConsistencyError(f"F_{i} is not weighted homogeneous")
        equations[i] = F
    return CurveModel(sg, mode, values, ring, equations)


def jacobian_G(curve: CurveModel) -> list[list[XPolynomial]]:
    """G[i][j] = dF_i/dx_j for 2 <= i, j <= m (stored 0-based)."""
    m = curve.m
    return [[curve.F(i).derivative(j) for j in range(2, m + 1)] for i in range(2, m + 1)]


def h_matrix(curve: CurveModel) -> tuple[PolyRing, list[list[GradedPolynomial]]]:
    """Divided differences h_ij of the equations, in a ring with kappa, x and y.

    h_ij = (F_i(y_1..y_{j-1}, x_j..x_m) - F_i(y_1..y_j, x_{j+1}..x_m)) / (x_j - y_j)
    """
    m = curve.m
    ring = curve.flat_ring(with_y=True)
    xs = [f"x{k}" for k in range(1, m + 1)]
    ys = [f"y{k}" for k in range(1, m + 1)]
    H = []
    for i in range(2, m + 1):
        F = curve.F(i).flatten(ring, xs)
        row = []
        for j in range(2, m + 1):
            left = F.substitute({xs[k]: ring.gen(ys[k]) for k in range(j - 1)})
            right = F.substitute({xs[k]: ring.gen(ys[k]) for k in range(j)})
            den = ring.gen(xs[j - 1]) - ring.gen(ys[j - 1])
            try:
                row.append((left - right).exact_div(den))
            except ArithmeticError:
                raise ConsistencyError(f"h_{i}{j} is not a polynomial") from None
        H.append(row)
    return ring, H


def telescoping_defect(curve: CurveModel, ring: PolyRing, H) -> list[GradedPolynomial]:
    """sum_j h_ij (x_j - y_j) - (F_i(y_1, x_2..x_m) - F_i(y)) for each i; all zero when correct."""
    m = curve.m
    xs = [f"x{k}" for k in range(1, m + 1)]
    ys = [f"y{k}" for k in range(1, m + 1)]
    out = []
    for r, i in enumerate(range(2, m + 1)):
        F = curve.F(i).flatten(ring, xs)
        lhs = ring.zero()
        for c, j in enumerate(range(2, m + 1)):
            lhs = lhs + H[r][c] * (ring.gen(xs[j - 1]) - ring.gen(ys[j - 1]))
        rhs = F.substitute({"x1": ring.gen("y1")}) - F.substitute({x: ring.gen(y) for x, y in zip(xs, ys)})
        out.append(lhs - rhs)
    return out
