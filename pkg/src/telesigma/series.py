"""Truncated Laurent series in one variable ``z`` with polynomial coefficients.

A series is stored densely from its valuation up to its truncation order:
every exponent below ``truncation`` is known, nothing at or above it is.
``truncation=None`` marks an exact (finite) Laurent polynomial.

Every operation returns the largest truncation order the inputs justify and
never a smaller one, so a reported order can be asserted by tests.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

import flint

from .polynomial import GradedPolynomial, PolyRing, to_fmpq


class PrecisionError(ArithmeticError):
    """A coefficient was requested beyond what the truncation justifies."""


def _tmin(*orders):
    known = [t for t in orders if t is not None]
    return min(known) if known else None


def _unit_power(U, alpha, count):
    """First ``count`` coefficients of U**alpha for a unit power series U.

    Uses the recurrence obtained from U * P' = alpha * U' * P. ``U[0]`` must be a
    nonzero constant; for non-integer ``alpha`` it must equal 1.
    """
    u0 = U[0].leading_coefficient()
    if alpha.q == 1:
        p0 = u0 ** int(alpha.p) if alpha >= 0 else (1 / u0) ** int(-alpha.p)
    elif u0 == 1:
        p0 = flint.fmpq(1)
    else:
        raise ValueError("fractional power of a unit with constant term != 1")
    ctx = U[0].context()
    P = [ctx.constant(p0)]
    inv_u0 = 1 / u0
    for l in range(1, count):
        acc = ctx.from_dict({})
        for j in range(1, min(l, len(U) - 1) + 1):
            uj = U[j]
            if uj.is_zero():
                continue
            pl = P[l - j]
            if pl.is_zero():
                continue
            f = (alpha + 1) * j - l
            if f != 0:
                acc = acc + uj * pl * f
        P.append(acc * (inv_u0 / l))
    return P


class TruncatedSeries:
    """Immutable Laurent series ``sum c_k z^k + O(z^truncation)``."""

    __slots__ = ("ring", "valuation", "_raw", "truncation")

    def __init__(self, ring: PolyRing, valuation: int, coeffs: Sequence, truncation: int | None = None):
        raw = [c.raw if isinstance(c, GradedPolynomial) else ring.ctx.constant(to_fmpq(c)) for c in coeffs]
        self._init(ring, valuation, raw, truncation)

    def _init(self, ring, valuation, raw, truncation):
        raw = list(raw)
        start = 0
        while start < len(raw) and raw[start].is_zero():
            start += 1
        raw = raw[start:]
        valuation += start
        if truncation is None:
            while raw and raw[-1].is_zero():
                raw.pop()
            if not raw:
                valuation = 0
        else:
            if not raw or valuation >= truncation:
                raw, valuation = [], truncation
            else:
                n = truncation - valuation
                raw = raw[:n] + [ring.ctx.from_dict({})] * (n - len(raw))
        self.ring = ring
        self.valuation = valuation
        self._raw = tuple(raw)
        self.truncation = truncation

    @classmethod
    def _from_raw(cls, ring, valuation, raw, truncation):
        s = cls.__new__(cls)
        s._init(ring, valuation, raw, truncation)
        return s

    # -- constructors -----------------------------------------------------

    @classmethod
    def monomial(cls, ring: PolyRing, exponent: int, coeff=1) -> TruncatedSeries:
        return cls(ring, exponent, [coeff])

    @classmethod
    def zero(cls, ring: PolyRing, truncation: int | None = None) -> TruncatedSeries:
        return cls(ring, 0 if truncation is None else truncation, [], truncation)

    # -- access -----------------------------------------------------------

    @property
    def coeffs(self) -> tuple[GradedPolynomial, ...]:
        return tuple(GradedPolynomial(self.ring, c) for c in self._raw)

    @property
    def is_exact(self) -> bool:
        return self.truncation is None

    def coefficient(self, k: int) -> GradedPolynomial:
        if self.truncation is not None and k >= self.truncation:
            raise PrecisionError(f"coefficient of z^{k} is beyond O(z^{self.truncation})")
        i = k - self.valuation
        if 0 <= i < len(self._raw):
            return GradedPolynomial(self.ring, self._raw[i])
        return self.ring.zero()

    def __getitem__(self, k: int) -> GradedPolynomial:
        return self.coefficient(k)

    def known_exponents(self) -> range:
        """Exponents of the stored coefficients (all of them for truncated series)."""
        return range(self.valuation, self.valuation + len(self._raw))

    def leading_coefficient(self) -> GradedPolynomial:
        if not self._raw:
            raise ValueError("series has no known nonzero coefficient")
        return GradedPolynomial(self.ring, self._raw[0])

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self._raw

    def relative_precision(self, order: int | None = None) -> int:
        if self.truncation is not None:
            return self.truncation - self.valuation
        if order is None:
            raise PrecisionError("an explicit order is needed for an infinite expansion of an exact series")
        return order

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: TruncatedSeries):
        if other.ring != self.ring:
            raise ValueError("series have coefficients in different rings")

    def _as_series(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, GradedPolynomial):
            return TruncatedSeries(self.ring, 0, [other])
        return TruncatedSeries(self.ring, 0, [to_fmpq(other)])

    def __add__(self, other):
        other = self._as_series(other)
        trunc = _tmin(self.truncation, other.truncation)
        starts = [s.valuation for s in (self, other) if s._raw]
        if not starts:
            return TruncatedSeries.zero(self.ring, trunc)
        v = min(starts)
        top = max(s.valuation + len(s._raw) for s in (self, other))
        if trunc is not None:
            top = trunc
        zero = self.ring.ctx.from_dict({})
        raw = [zero] * max(top - v, 0)
        for s in (self, other):
            for i, c in enumerate(s._raw):
                k = s.valuation + i - v
                if 0 <= k < len(raw):
                    raw[k] = raw[k] + c
        return TruncatedSeries._from_raw(self.ring, v, raw, trunc)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._from_raw(self.ring, self.valuation, [-c for c in self._raw], self.truncation)

    def __sub__(self, other):
        return self + (-self._as_series(other))

    def __rsub__(self, other):
        return self._as_series(other) + (-self)

    def scale(self, c) -> TruncatedSeries:
        if isinstance(c, GradedPolynomial):
            if c.ring != self.ring:
                raise ValueError("scalar lives in a different ring")
            f = c.raw
        else:
            f = to_fmpq(c)
        return TruncatedSeries._from_raw(self.ring, self.valuation, [x * f for x in self._raw], self.truncation)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        va, vb = self.valuation, other.valuation
        A, B = self._raw, other._raw
        t1 = None if self.truncation is None else self.truncation + vb
        t2 = None if other.truncation is None else other.truncation + va
        trunc = _tmin(t1, t2)
        if not A or not B:
            return TruncatedSeries.zero(self.ring, trunc)
        n = len(A) + len(B) - 1 if trunc is None else trunc - va - vb
        zero = self.ring.ctx.from_dict({})
        out = [zero] * max(n, 0)
        for i, a in enumerate(A[:n]):
            if a.is_zero():
                continue
            for j, b in enumerate(B[: n - i]):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TruncatedSeries._from_raw(self.ring, va + vb, out, trunc)

    def __rmul__(self, other):
        return self.__mul__(other)

    def shift(self, k: int) -> TruncatedSeries:
        """Multiply by z^k."""
        t = None if self.truncation is None else self.truncation + k
        return TruncatedSeries._from_raw(self.ring, self.valuation + k, self._raw, t)

    def truncate(self, order: int) -> TruncatedSeries:
        """Explicitly discard everything from z^order on."""
        t = order if self.truncation is None else min(order, self.truncation)
        return TruncatedSeries._from_raw(self.ring, self.valuation, self._raw, t)

    def power(self, alpha, order: int | None = None) -> TruncatedSeries:
        """``self ** alpha`` for rational ``alpha``.

        The leading coefficient must be a nonzero constant (equal to 1 unless
        ``alpha`` is an integer) and ``alpha * valuation`` must be an integer.
        ``order`` is the relative precision to use when the input is exact.
        """
        alpha = to_fmpq(alpha)
        if not self._raw:
            raise ValueError("cannot raise a zero series to a power")
        if alpha.q == 1 and alpha >= 0 and self.truncation is None:
            result = TruncatedSeries.monomial(self.ring, 0)
            base = self
            n = int(alpha.p)
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        lead = self._raw[0]
        if not lead.is_constant():
            raise ValueError("leading coefficient is not a rational constant")
        v = alpha * self.valuation
        if v.q != 1:
            raise ValueError("valuation times exponent is not an integer")
        if self.truncation is None and len(self._raw) == 1:
            c = lead.leading_coefficient()
            if alpha.q != 1 and c != 1:
                raise ValueError("fractional power of a unit with constant term != 1")
            p0 = c ** int(alpha.p) if alpha.q == 1 else flint.fmpq(1)
            return TruncatedSeries._from_raw(self.ring, int(v.p), [self.ring.ctx.constant(p0)], None)
        rel = self.relative_precision(order)
        raw = list(self._raw[:rel])
        P = _unit_power(raw, alpha, rel)
        return TruncatedSeries._from_raw(self.ring, int(v.p), P, int(v.p) + rel)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        return self.power(n)

    def inverse(self, order: int | None = None) -> TruncatedSeries:
        return self.power(-1, order)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse(order=self.relative_precision() if self.truncation is not None else None)
        if isinstance(other, GradedPolynomial):
            if not other.is_constant():
                raise ValueError("can only divide by a constant polynomial")
            other = other.constant_value()
        c = to_fmpq(other)
        if c == 0:
            raise ZeroDivisionError("series division by zero")
        return self.scale(1 / c)

    def derivative(self) -> TruncatedSeries:
        """Termwise d/dz."""
        raw = [c * (self.valuation + i) for i, c in enumerate(self._raw)]
        t = None if self.truncation is None else self.truncation - 1
        return TruncatedSeries._from_raw(self.ring, self.valuation - 1, raw, t)

    def log(self, order: int | None = None) -> TruncatedSeries:
        """Formal logarithm of a unit series with constant term exactly 1."""
        if self.valuation != 0 or not self._raw or self._raw[0] != 1:
            raise ValueError("log needs a series 1 + O(z)")
        n = self.relative_precision(order)
        ctx = self.ring.ctx
        U = list(self._raw[:n]) + [ctx.from_dict({})] * max(0, n - len(self._raw))
        L = [ctx.from_dict({})]
        for l in range(1, n):
            acc = U[l] * l
            for j in range(1, l):
                if not L[j].is_zero() and not U[l - j].is_zero():
                    acc = acc - L[j] * U[l - j] * j
            L.append(acc / l)
        return TruncatedSeries._from_raw(self.ring, 0, L, n)

    def exp(self, order: int | None = None) -> TruncatedSeries:
        """Formal exponential of a series with zero constant term."""
        if self._raw and self.valuation <= 0:
            raise ValueError("exp needs a series O(z)")
        n = self.truncation if self.truncation is not None else order
        if n is None:
            raise PrecisionError("an explicit order is needed to exponentiate an exact series")
        ctx = self.ring.ctx
        S = [self.coefficient(k).raw if k < n else None for k in range(n)]
        E = [ctx.constant(1)]
        for l in range(1, n):
            acc = ctx.from_dict({})
            for j in range(1, l + 1):
                if not S[j].is_zero() and not E[l - j].is_zero():
                    acc = acc + S[j] * E[l - j] * j
            E.append(acc / l)
        return TruncatedSeries._from_raw(self.ring, 0, E, n)

    def map_coefficients(self, fn: Callable[[GradedPolynomial], GradedPolynomial], ring: PolyRing | None = None) -> TruncatedSeries:
        ring = ring or self.ring
        raw = [fn(GradedPolynomial(self.ring, c)).raw for c in self._raw]
        return TruncatedSeries._from_raw(ring, self.valuation, raw, self.truncation)

    # -- comparison and display ------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.truncation == other.truncation
            and self.valuation == other.valuation
            and self._raw == other._raw
        )

    def __hash__(self):
        return hash((self.valuation, self.truncation, tuple(str(c) for c in self._raw)))

    def __repr__(self):
        return f"TruncatedSeries({self})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self._raw):
            if c.is_zero():
                continue
            k = self.valuation + i
            zk = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            cs = str(c)
            if not zk:
                parts.append(cs)
            elif cs == "1":
                parts.append(zk)
            elif cs == "-1":
                parts.append("-" + zk)
            elif len(c) == 1 and "+" not in cs and " - " not in cs:
                parts.append(f"{cs}*{zk}")
            else:
                parts.append(f"({cs})*{zk}")
        if self.truncation is not None:
            parts.append(f"O(z^{self.truncation})")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def series_root(s: TruncatedSeries, r: int, order: int | None = None) -> TruncatedSeries:
    """The r-th root of ``s`` whose leading coefficient is 1.

    ``s`` must have leading coefficient exactly 1 and a valuation divisible by
    ``r``. The relative precision of the input is preserved.
    """
    if not isinstance(r, int) or r < 1:
        raise ValueError("root index must be a positive integer")
    if s.is_zero() or s.leading_coefficient() != 1:
        raise ValueError("root of non-monic unit")
    if s.valuation % r:
        raise ValueError(f"valuation {s.valuation} is not divisible by {r}")
    return s.power(Fraction(1, r), order)


class BiSeries:
    """Series in ``z1`` whose coefficients are Laurent series in ``z2``.

    This is the expansion convention for the region ``|z1| < |z2|``. Row ``i``
    holds the coefficient of ``z1^i``; every row has its own ``z2`` truncation
    and a finite pole order. Rows with ``i >= z1_truncation`` are unknown.
    """

    __slots__ = ("ring", "z1_valuation", "rows", "z1_truncation")

    def __init__(self, ring: PolyRing, rows: dict[int, TruncatedSeries] | Sequence[TruncatedSeries], z1_truncation: int, z1_valuation: int = 0):
        if not isinstance(rows, dict):
            rows = {z1_valuation + i: r for i, r in enumerate(rows)}
        lo = min(rows, default=z1_truncation)
        lo = min(lo, z1_valuation)
        full = []
        for i in range(lo, z1_truncation):
            r = rows.get(i)
            if r is None:
                r = TruncatedSeries.zero(ring)
            elif r.ring != ring:
                raise ValueError("row lives in a different ring")
            full.append(r)
        self.ring = ring
        self.z1_valuation = lo
        self.rows = tuple(full)
        self.z1_truncation = z1_truncation

    @classmethod
    def outer(cls, s1: TruncatedSeries, s2: TruncatedSeries, z1_truncation: int | None = None) -> BiSeries:
        """The product s1(z1) * s2(z2)."""
        t = _tmin(s1.truncation, z1_truncation)
        if t is None:
            t = s1.valuation + len(s1._raw)
        rows = {}
        for k in range(s1.valuation, t):
            c = s1.coefficient(k)
            if c:
                rows[k] = s2.scale(c)
        return cls(s1.ring, rows, t, z1_valuation=min(s1.valuation, t))

    def row(self, i: int) -> TruncatedSeries:
        if i >= self.z1_truncation:
            raise PrecisionError(f"z1^{i} is beyond O(z1^{self.z1_truncation})")
        k = i - self.z1_valuation
        if k < 0:
            return TruncatedSeries.zero(self.ring)
        return self.rows[k]

    def coefficient(self, i: int, j: int) -> GradedPolynomial:
        return self.row(i).coefficient(j)

    def row_indices(self) -> range:
        return range(self.z1_valuation, self.z1_truncation)

    def terms(self) -> dict[tuple[int, int], GradedPolynomial]:
        """All known nonzero coefficients keyed by (z1 exponent, z2 exponent)."""
        out = {}
        for i in self.row_indices():
            r = self.row(i)
            for j in r.known_exponents():
                c = r.coefficient(j)
                if c:
                    out[(i, j)] = c
        return out

    def _combine(self, other: BiSeries, sign: int) -> BiSeries:
        if other.ring != self.ring:
            raise ValueError("bi-series have coefficients in different rings")
        t = min(self.z1_truncation, other.z1_truncation)
        lo = min(self.z1_valuation, other.z1_valuation, t)
        rows = {}
        for i in range(lo, t):
            a = self.row(i) if i >= self.z1_valuation else None
            b = other.row(i) if i >= other.z1_valuation else None
            if b is not None and sign < 0:
                b = -b
            rows[i] = a + b if a is not None and b is not None else (a if a is not None else b)
        return BiSeries(self.ring, rows, t, z1_valuation=lo)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return BiSeries(self.ring, {i: -self.row(i) for i in self.row_indices()}, self.z1_truncation, self.z1_valuation)

    def scale(self, c) -> BiSeries:
        return BiSeries(self.ring, {i: self.row(i).scale(c) for i in self.row_indices()}, self.z1_truncation, self.z1_valuation)

    def derivative_z2(self) -> BiSeries:
        return BiSeries(self.ring, {i: self.row(i).derivative() for i in self.row_indices()}, self.z1_truncation, self.z1_valuation)

    def pole_orders(self) -> dict[int, int | None]:
        """Per z1 exponent, the lowest z2 exponent with a nonzero coefficient."""
        return {i: (None if self.row(i).is_zero() else self.row(i).valuation) for i in self.row_indices()}

    def singular_part(self) -> BiSeries:
        """Keep only the negative powers of z2 (each row becomes exact)."""
        rows = {}
        for i in self.row_indices():
            r = self.row(i)
            neg = [r.coefficient(j) for j in range(r.valuation, 0)] if r.valuation < 0 else []
            rows[i] = TruncatedSeries(self.ring, r.valuation, neg)
        return BiSeries(self.ring, rows, self.z1_truncation, self.z1_valuation)

    def __repr__(self):
        return f"BiSeries(rows {self.z1_valuation}..{self.z1_truncation - 1})"


def bi_expand_inverse_diff_square(n_z1: int, ring: PolyRing | None = None) -> BiSeries:
    """1/(z1 - z2)^2 = sum_k (k+1) z1^k z2^(-k-2) for |z1| < |z2|, to O(z1^n_z1)."""
    if n_z1 < 1:
        raise ValueError("need at least one z1 order")
    ring = ring or PolyRing([])
    rows = [TruncatedSeries.monomial(ring, -k - 2, k + 1) for k in range(n_z1)]
    return BiSeries(ring, rows, n_z1)
