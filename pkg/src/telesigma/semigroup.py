"""Telescopic numerical semigroups.

Membership and normal forms use the unique box representation of elements
of a telescopic semigroup; a plain sieve is kept for non-telescopic
Frobenius queries and as a cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import gcd
from typing import NamedTuple, Sequence


class SemigroupError(ValueError):
    pass


class NotCoprimeError(SemigroupError):
    pass


class NotTelescopicError(SemigroupError):
    pass


class ConsistencyError(RuntimeError):
    """An identity that must hold by construction failed."""


def gcd_chain(a: Sequence[int]) -> tuple[int, ...]:
    out, d = [], 0
    for x in a:
        d = gcd(d, x)
        out.append(d)
    return tuple(out)


def _validate(a: Sequence[int]) -> tuple[int, ...]:
    a = tuple(int(x) for x in a)
    if len(a) < 2:
        raise SemigroupError("need at least two generators")
    if any(x < 1 for x in a):
        raise SemigroupError("generators must be positive")
    if reduce(gcd, a) != 1:
        raise NotCoprimeError(f"not coprime: gcd{a} != 1")
    return a


def _represent(a: tuple[int, ...], n: int) -> tuple[int, ...] | None:
    # a is telescopic with gcd 1 (possibly of length 1, i.e. a == (1,))
    if n < 0:
        return None
    if len(a) == 1:
        return (n // a[0],) if n % a[0] == 0 else None
    head, last = a[:-1], a[-1]
    d = reduce(gcd, head)
    k = (n * pow(last, -1, d)) % d if d > 1 else 0
    rest = n - last * k
    if rest < 0:
        return None
    sub = _represent(tuple(x // d for x in head), rest // d)
    return None if sub is None else sub + (k,)


def is_telescopic(a: Sequence[int]) -> bool:
    """Whether a_i/d_i lies in the semigroup of a_1/d_{i-1}, ..., a_{i-1}/d_{i-1} for all i."""
    a = _validate(a)
    d = gcd_chain(a)
    for i in range(1, len(a)):
        scaled = tuple(x // d[i - 1] for x in a[:i])
        if _represent(scaled, a[i] // d[i]) is None:
            return False
    return True


def sieve_members(a: Sequence[int], limit: int) -> list[bool]:
    """members[n] is True iff n in <a> for 0 <= n <= limit."""
    members = [False] * (limit + 1)
    members[0] = True
    for n in range(1, limit + 1):
        members[n] = any(n >= x and members[n - x] for x in a)
    return members


def sieve_gaps(a: Sequence[int]) -> list[int]:
    """Gaps of <a> (gcd 1) by sieving until min(a) consecutive members appear."""
    a = _validate(a)
    step = min(a)
    members = [True]
    run, n = 1, 0
    while run < step:
        n += 1
        ok = any(n >= x and members[n - x] for x in a)
        members.append(ok)
        run = run + 1 if ok else 0
    return [i for i, ok in enumerate(members) if not ok]


def brauer_bound(a: Sequence[int]) -> int:
    a = _validate(a)
    d = gcd_chain(a)
    return -a[0] + sum(a[i] * (d[i - 1] // d[i] - 1) for i in range(1, len(a)))


class FrobeniusReport(NamedTuple):
    frobenius: int
    brauer_bound: int
    equality: bool


def frobenius(a: Sequence[int]) -> FrobeniusReport:
    """Frobenius number by sieve, with the Brauer upper bound; any coprime input."""
    gaps = sieve_gaps(a)
    f = gaps[-1] if gaps else -1
    b = brauer_bound(a)
    return FrobeniusReport(f, b, f == b)


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        p = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"not a partition: {p}")
        object.__setattr__(self, "parts", p)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions(n: int, max_part: int | None = None):
    """All partitions of n in reverse lexicographic order."""
    max_part = n if max_part is None else max_part
    if n == 0:
        yield Partition(())
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield Partition((first,) + rest.parts)


@dataclass(frozen=True)
class SemigroupData:
    """A telescopic generator sequence and everything derived from it."""

    a: tuple[int, ...]
    d: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        a = _validate(self.a)
        if 1 in a:
            raise SemigroupError("a generator equal to 1 gives genus 0")
        if not is_telescopic(a):
            raise NotTelescopicError(f"{a} is not telescopic")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "d", gcd_chain(a))

    @property
    def m(self) -> int:
        return len(self.a)

    def ratio(self, i: int) -> int:
        """d_{i-1}/d_i for 2 <= i <= m (1-based, as in the box set)."""
        if not 2 <= i <= self.m:
            raise IndexError(i)
        return self.d[i - 2] // self.d[i - 1]

    @cached_property
    def box_bounds(self) -> tuple[int | None, ...]:
        """Exclusive upper bound on each exponent in the box set (None: unbounded)."""
        return (None,) + tuple(self.ratio(i) for i in range(2, self.m + 1))

    def in_box(self, k: Sequence[int]) -> bool:
        return len(k) == self.m and all(
            x >= 0 and (b is None or x < b) for x, b in zip(k, self.box_bounds)
        )

    def weight(self, k: Sequence[int]) -> int:
        return sum(x * y for x, y in zip(self.a, k))

    def represent(self, n: int) -> tuple[int, ...] | None:
        """The unique box vector k with sum a_i k_i = n, or None if n is not in the semigroup."""
        return _represent(self.a, n)

    def contains(self, n: int) -> bool:
        return self.represent(n) is not None

    @cached_property
    def genus(self) -> int:
        a, m = self.a, self.m
        twice = 1 + sum(a[i - 1] * self.ratio(i) for i in range(2, m + 1)) - sum(a)
        if twice % 2:
            raise ConsistencyError(f"genus formula is not an integer for {a}")
        return twice // 2

    @cached_property
    def gaps(self) -> tuple[int, ...]:
        bound = brauer_bound(self.a)
        gaps = tuple(n for n in range(bound + 1) if not self.contains(n))
        if len(gaps) != self.genus:
            raise ConsistencyError(f"{len(gaps)} gaps but genus {self.genus} for {self.a}")
        return gaps

    @property
    def frobenius_number(self) -> int:
        return self.gaps[-1] if self.gaps else -1

    def nongaps(self, count: int) -> tuple[int, ...]:
        """The first ``count`` semigroup elements in increasing order (starting with 0)."""
        out, n = [], 0
        while len(out) < count:
            if self.contains(n):
                out.append(n)
            n += 1
        return tuple(out)

    @cached_property
    def partition(self) -> Partition:
        w, g = self.gaps, self.genus
        return Partition(tuple(w[g - i] - g + i for i in range(1, g + 1)))

    @cached_property
    def l_rows(self) -> dict[int, tuple[int, ...]]:
        """Row i (2 <= i <= m): the box representation of a_i d_{i-1}/d_i."""
        rows = {}
        for i in range(2, self.m + 1):
            row = self.represent(self.a[i - 1] * self.ratio(i))
            if row is None:
                raise ConsistencyError(f"a_{i} d_{i-1}/d_{i} has no representation")
            if any(row[j - 1] for j in range(i, self.m + 1)):
                raise ConsistencyError(f"l_{i}j is nonzero for some j >= {i}: {row}")
            rows[i] = row
        return rows

    def report(self) -> dict:
        f = frobenius(self.a)
        return {
            "a": list(self.a),
            "d": list(self.d),
            "telescopic": True,
            "gaps": list(self.gaps),
            "genus": self.genus,
            "partition": list(self.partition.parts),
            "frobenius": f.frobenius,
            "brauer_bound": f.brauer_bound,
        }


def semigroup(a: Sequence[int] | str) -> SemigroupData:
    if isinstance(a, str):
        a = parse_sequence(a)
    return SemigroupData(tuple(a))


def parse_sequence(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise SemigroupError(f"malformed integer sequence: {text!r}") from None


def partition_from_gaps(sg: SemigroupData) -> Partition:
    return sg.partition


def gap_sequence(sg: SemigroupData) -> tuple[int, ...]:
    return sg.gaps


def telescopic_corpus(max_entry: int = 20, max_length: int = 3):
    """All telescopic sequences with 2 <= m <= max_length and 2 <= a_i <= max_entry."""
    from itertools import product

    for m in range(2, max_length + 1):
        for a in product(range(2, max_entry + 1), repeat=m):
            if reduce(gcd, a) == 1 and is_telescopic(a):
                yield a


FIXTURES = ((2, 3), (2, 7), (3, 4), (4, 6, 5), (6, 9, 5))
