"""Sparse weighted multivariate polynomials with rational coefficients.

Multiplication and division are done by FLINT (``fmpq_mpoly``). This module
adds what FLINT does not know about: a positive integer weight on every
variable, weighted homogeneity, and conversion to ``fractions.Fraction`` at
the API boundary.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import flint

Exponent = tuple[int, ...]


def to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, (int, flint.fmpz)):
        return flint.fmpq(c)
    if isinstance(c, Rational):
        return flint.fmpq(c.numerator, c.denominator)
    if isinstance(c, str):
        return to_fmpq(Fraction(c))
    raise TypeError(f"not an exact rational: {c!r}")


def to_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class PolyRing:
    """An ordered set of named variables, each with a positive weight."""

    __slots__ = ("names", "weights", "ctx", "_index")

    def __init__(self, names: Sequence[str], weights: Sequence[int] | None = None):
        names = tuple(names)
        weights = tuple(weights) if weights is not None else (1,) * len(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        if len(weights) != len(names):
            raise ValueError("one weight per variable required")
        if any(int(w) != w or w <= 0 for w in weights):
            raise ValueError("weights must be positive integers")
        self.names = names
        self.weights = tuple(int(w) for w in weights)
        self.ctx = flint.fmpq_mpoly_ctx.get(names, "lex")
        self._index = {n: i for i, n in enumerate(names)}

    def __repr__(self):
        return f"PolyRing({list(self.names)!r}, {list(self.weights)!r})"

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.names, self.weights))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{name!r} is not a variable of {self!r}") from None

    def weight_of(self, exponent: Exponent) -> int:
        return sum(e * w for e, w in zip(exponent, self.weights))

    def wrap(self, raw) -> GradedPolynomial:
        return GradedPolynomial(self, raw)

    def zero(self) -> GradedPolynomial:
        return GradedPolynomial(self, self.ctx.from_dict({}))

    def one(self) -> GradedPolynomial:
        return self.const(1)

    def const(self, c) -> GradedPolynomial:
        return GradedPolynomial(self, self.ctx.constant(to_fmpq(c)))

    def gen(self, name_or_index: str | int) -> GradedPolynomial:
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return GradedPolynomial(self, self.ctx.gens()[i])

    def gens(self) -> tuple[GradedPolynomial, ...]:
        return tuple(GradedPolynomial(self, g) for g in self.ctx.gens())

    def monomial(self, exponent: Exponent, coeff=1) -> GradedPolynomial:
        return self.from_terms({tuple(exponent): coeff})

    def from_terms(self, terms: Mapping[Exponent, object]) -> GradedPolynomial:
        data = {}
        for exp, c in terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.nvars or min(exp, default=0) < 0:
                raise ValueError(f"bad exponent vector {exp} for {self!r}")
            c = to_fmpq(c)
            if c != 0:
                data[exp] = data.get(exp, 0) + c
        return GradedPolynomial(self, self.ctx.from_dict(data))

    def from_named_terms(self, terms: Iterable[tuple[Mapping[str, int], object]]) -> GradedPolynomial:
        acc = {}
        for powers, c in terms:
            exp = [0] * self.nvars
            for name, e in powers.items():
                exp[self.index(name)] += int(e)
            key = tuple(exp)
            acc[key] = acc.get(key, 0) + to_fmpq(c)
        return self.from_terms(acc)


class GradedPolynomial:
    """Immutable polynomial in the variables of a :class:`PolyRing`.

    The weight of a term is the dot product of its exponent vector with the
    ring's variable weights; a polynomial is homogeneous of degree ``d`` when
    every stored term has weight ``d``.
    """

    __slots__ = ("ring", "_p")

    def __init__(self, ring: PolyRing, raw):
        self.ring = ring
        self._p = raw

    @property
    def raw(self):
        return self._p

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GradedPolynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other._p
        return self.ring.ctx.constant(to_fmpq(other))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        try:
            return GradedPolynomial(self.ring, self._p + self._coerce(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return GradedPolynomial(self.ring, self._p - self._coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return GradedPolynomial(self.ring, self._coerce(other) - self._p)
        except TypeError:
            return NotImplemented

    def __neg__(self):
        return GradedPolynomial(self.ring, -self._p)

    def __pos__(self):
        return self

    def __mul__(self, other):
        try:
            return GradedPolynomial(self.ring, self._p * self._coerce(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GradedPolynomial):
            return self.exact_div(other)
        c = to_fmpq(other)
        if c == 0:
            raise ZeroDivisionError("polynomial division by zero")
        return GradedPolynomial(self.ring, self._p / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        return GradedPolynomial(self.ring, self._p**n)

    def exact_div(self, other: GradedPolynomial) -> GradedPolynomial:
        q, r = divmod(self._p, self._coerce(other))
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return GradedPolynomial(self.ring, q)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GradedPolynomial):
            return self.ring == other.ring and self._p == other._p
        try:
            return self._p == self.ring.ctx.constant(to_fmpq(other))
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms().items())))

    def __bool__(self):
        return not self._p.is_zero()

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def __len__(self):
        return len(self._p)

    # -- inspection -------------------------------------------------------

    def terms(self) -> dict[Exponent, Fraction]:
        return {tuple(int(x) for x in e): to_fraction(c) for e, c in self._p.terms()}

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self.terms().get(tuple(exponent), Fraction(0))

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial; raises for anything else."""
        if not self._p.is_constant():
            raise ValueError(f"not a constant: {self}")
        if self._p.is_zero():
            return Fraction(0)
        return to_fraction(self._p.leading_coefficient())

    def term_weights(self) -> set[int]:
        w = self.ring.weights
        return {sum(a * b for a, b in zip(e, w)) for e in self._p.monoms()}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        """True when every term has the same weight (``degree`` if given).

        The zero polynomial counts as homogeneous of every degree.
        """
        ws = self.term_weights()
        if not ws:
            return True
        if len(ws) > 1:
            return False
        return degree is None or ws.pop() == degree

    def weighted_degree(self) -> int:
        ws = self.term_weights()
        if not ws:
            raise ValueError("zero polynomial has no degree")
        return max(ws)

    def variables(self) -> set[str]:
        used = set()
        for e in self._p.monoms():
            used.update(self.ring.names[i] for i, k in enumerate(e) if k)
        return used

    # -- calculus and substitution ----------------------------------------

    def derivative(self, var: str | int, times: int = 1) -> GradedPolynomial:
        i = var if isinstance(var, int) else self.ring.index(var)
        p = self._p
        for _ in range(times):
            if p.is_zero():
                break
            p = p.derivative(i)
        return GradedPolynomial(self.ring, p)

    def substitute(
        self, images: Mapping[str, object], target: PolyRing | None = None
    ) -> GradedPolynomial:
        """Replace variables by polynomials of ``target`` (or by scalars).

        Variables not mentioned are mapped to the variable of the same name
        in ``target``, which must then exist.
        """
        target = target or self.ring
        gens = []
        for name in self.ring.names:
            if name in images:
                img = images[name]
                if isinstance(img, GradedPolynomial):
                    if img.ring != target:
                        raise ValueError(f"image of {name} is in the wrong ring")
                    gens.append(img._p)
                else:
                    gens.append(target.ctx.constant(to_fmpq(img)))
            else:
                gens.append(target.ctx.gens()[target.index(name)])
        if not gens:
            return target.const(self.constant_value())
        return GradedPolynomial(target, self._p.compose(*gens, ctx=target.ctx))

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        """Evaluate at a rational point; every used variable needs a value."""
        vals = {n: to_fmpq(v) for n, v in values.items()}
        total = flint.fmpq(0)
        for exp, c in self._p.terms():
            term = c
            for i, e in enumerate(exp):
                if e:
                    term *= vals[self.ring.names[i]] ** e
            total += term
        return to_fraction(total)

    def split(self, outer: Sequence[str], inner: PolyRing) -> dict[Exponent, GradedPolynomial]:
        """View as a polynomial in ``outer`` with coefficients in ``inner``.

        Every variable of this ring must be either in ``outer`` or in
        ``inner``.
        """
        outer_idx = [self.ring.index(n) for n in outer]
        inner_idx = [self.ring.index(n) for n in inner.names]
        if len(outer_idx) + len(inner_idx) != self.ring.nvars:
            raise ValueError("outer and inner variables must partition the ring")
        groups: dict[Exponent, dict] = {}
        for exp, c in self._p.terms():
            key = tuple(int(exp[i]) for i in outer_idx)
            sub = tuple(exp[i] for i in inner_idx)
            groups.setdefault(key, {})[sub] = c
        return {k: GradedPolynomial(inner, inner.ctx.from_dict(v)) for k, v in groups.items()}

    # -- display ----------------------------------------------------------

    def __repr__(self):
        return f"GradedPolynomial({self._p})"

    def __str__(self):
        return str(self._p)
