"""Finite groups with unique normal-form encodings.

Three families are provided:

* :class:`AbelianGroup` -- ``Z_{m_1} x ... x Z_{m_k}`` with prime-power ``m_i``,
  elements are residue tuples, characters are available.
* :class:`PolycyclicGroup` -- a solvable group given by a composition series
  ``G = G_0 > G_1 > ... > G_m = 1`` with generators ``z_i`` of prime relative
  order ``r_i``.  Elements are exponent tuples ``(e_0, ..., e_{m-1})`` meaning
  ``z_0^e_0 z_1^e_1 ... z_{m-1}^e_{m-1}``; products are normalised by
  collection.  A ``PolycyclicGroup`` is always a *section* ``G_a / G_b`` of a
  root presentation, so subgroups of the series and quotients by them share
  one element encoding (full-length tuples, zero outside ``[a, b)``).
* :class:`SemidirectZpnZ2` -- ``Z_p^n x| Z_2`` with
  ``(x, b)(y, c) = (x + (-1)^b y, b + c)``.
"""
from __future__ import annotations

import cmath
import itertools
import json
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

from . import fp_algebra as fp

Element = tuple

GENERAL_ABELIAN_CAP = 10_000


class GroupError(ValueError):
    """Malformed group data or an operation the group does not support."""


def _is_prime_power(m: int) -> bool:
    if m < 2:
        return False
    for p in range(2, m + 1):
        if m % p == 0:
            while m % p == 0:
                m //= p
            return m == 1
    return False


def _prime_of(m: int) -> int:
    for p in range(2, m + 1):
        if m % p == 0:
            return p
    raise GroupError(f"{m} has no prime factor")


class FiniteGroup:
    """Shared helpers; subclasses provide identity/multiply/inverse/elements."""

    name: str = ""

    def power(self, g: Element, k: int) -> Element:
        if k < 0:
            g, k = self.inverse(g), -k
        result = self.identity()
        base = g
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    def random_element(self, rng: np.random.Generator) -> Element:
        elems = self.elements()
        return elems[int(rng.integers(len(elems)))]

    def element_order(self, g: Element) -> int:
        e = self.identity()
        k, x = 1, g
        while x != e:
            x = self.multiply(x, g)
            k += 1
        return k

    def closure(self, gens) -> frozenset:
        """Elements of the subgroup generated by ``gens`` (breadth-first)."""
        e = self.identity()
        gens = [tuple(g) for g in gens if tuple(g) != e]
        seen = {e}
        queue = deque([e])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.multiply(x, g)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def generating_subset(self, elements) -> list[Element]:
        """A small generating set for the subgroup formed by ``elements``."""
        gens: list[Element] = []
        span = frozenset([self.identity()])
        for x in sorted(elements):
            if x not in span:
                gens.append(x)
                span = self.closure(gens)
        return gens

    def is_abelian(self) -> bool:
        return True


# --------------------------------------------------------------------------
# abelian groups
# --------------------------------------------------------------------------

class AbelianGroup(FiniteGroup):
    """``Z_{m_1} x ... x Z_{m_k}`` with every ``m_i`` a prime power."""

    def __init__(self, factors, name: str | None = None):
        factors = tuple(int(m) for m in factors)
        for m in factors:
            if not _is_prime_power(m):
                raise GroupError(f"factor {m} is not a prime power >= 2")
        self.factors = factors
        self.name = name or ("Z" + "xZ".join(map(str, factors)) if factors else "1")

    @classmethod
    def elementary(cls, p: int, n: int) -> AbelianGroup:
        fp.check_prime(p)
        return cls((p,) * n)

    def __repr__(self):
        return f"AbelianGroup({self.factors})"

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and other.factors == self.factors

    def __hash__(self):
        return hash(("abelian", self.factors))

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def elementary_prime(self) -> int | None:
        """``p`` when the group is ``Z_p^n`` (n >= 1), else ``None``."""
        if self.factors and len(set(self.factors)) == 1 and fp.is_prime(self.factors[0]):
            return self.factors[0]
        return None

    def identity(self) -> Element:
        return (0,) * len(self.factors)

    def contains(self, g) -> bool:
        return len(g) == len(self.factors) and all(0 <= a < m for a, m in zip(g, self.factors))

    def _check(self, g):
        if not self.contains(g):
            raise GroupError(f"{g!r} is not a normal form in {self.name}")

    def multiply(self, g, h) -> Element:
        self._check(g)
        self._check(h)
        return tuple((a + b) % m for a, b, m in zip(g, h, self.factors))

    def inverse(self, g) -> Element:
        self._check(g)
        return tuple((-a) % m for a, m in zip(g, self.factors))

    def power(self, g, k: int) -> Element:
        self._check(g)
        return tuple((a * k) % m for a, m in zip(g, self.factors))

    def elements(self) -> list[Element]:
        return [tuple(x) for x in itertools.product(*(range(m) for m in self.factors))]

    def random_element(self, rng) -> Element:
        return tuple(int(rng.integers(m)) for m in self.factors)

    def index_of(self, g) -> int:
        idx = 0
        for a, m in zip(g, self.factors):
            idx = idx * m + a
        return idx

    def char_phase(self, y, x) -> float:
        """``t`` in ``[0, 1)`` with ``chi_y(x) = exp(2 pi i t)``."""
        self._check(y)
        self._check(x)
        return math.fsum((a * b % m) / m for a, b, m in zip(y, x, self.factors)) % 1.0

    def char_eval(self, y, x) -> complex:
        """``chi_y(x) = prod_i exp(2 pi i y_i x_i / m_i)``."""
        return cmath.exp(2j * math.pi * self.char_phase(y, x))


def char_eval(group: AbelianGroup, y, x) -> complex:
    if not isinstance(group, AbelianGroup):
        raise GroupError("characters are only defined here for abelian groups")
    return group.char_eval(y, x)


def orthogonal_subgroup(samples, group: AbelianGroup) -> list[Element]:
    """Generators of ``{x : chi_y(x) = 1 for every sampled y}``.

    For ``Z_p^n`` this is the nullspace of the sample matrix; other abelian
    groups are handled by enumeration up to ``GENERAL_ABELIAN_CAP`` elements.
    """
    if not isinstance(group, AbelianGroup):
        raise GroupError("orthogonal subgroups need an abelian group")
    samples = [tuple(int(a) for a in y) for y in samples]
    if group.rank == 0:
        return []
    p = group.elementary_prime
    if p is not None:
        if not samples:
            basis = np.eye(group.rank, dtype=np.int64)
        else:
            basis = fp.nullspace(np.array(samples, dtype=np.int64), p)
        return [tuple(int(v) for v in row) for row in basis]
    if group.order > GENERAL_ABELIAN_CAP:
        raise GroupError("general abelian decoding is limited to desk-scale groups")
    members = [
        x for x in group.elements()
        if all(group.char_phase(y, x) < 1e-12 or group.char_phase(y, x) > 1 - 1e-12 for y in samples)
    ]
    return group.generating_subset(members)


# --------------------------------------------------------------------------
# polycyclic groups
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    """One factor of a smooth series: composition indices ``[start, stop)``.

    ``kind`` is ``"elementary"`` (elementary abelian of exponent ``p``) or
    ``"small"`` (abelian, handled by exhaustive search).
    """

    start: int
    stop: int
    kind: str
    p: int | None = None

    @property
    def length(self) -> int:
        return self.stop - self.start


class _Presentation:
    """Root polycyclic presentation plus the collection machinery."""

    def __init__(self, relative_orders, powers, conjugates, name=""):
        self.orders = tuple(int(r) for r in relative_orders)
        self.m = len(self.orders)
        self.name = name
        for r in self.orders:
            if not fp.is_prime(r):
                raise GroupError(f"relative order {r} is not prime")
        ident = (0,) * self.m
        self.identity = ident
        self.powers = []
        for i in range(self.m):
            w = tuple(int(a) for a in powers.get(i, ident))
            self._check_word(w, i, f"power relation of z_{i}")
            self.powers.append(w)
        self.conj = {}
        for i in range(self.m):
            for j in range(i + 1, self.m):
                default = tuple(1 if k == j else 0 for k in range(self.m))
                w = tuple(int(a) for a in conjugates.get((i, j), default))
                self._check_word(w, i, f"conjugate relation z_{j}^z_{i}")
                self.conj[(i, j)] = w
        self._mul_cache: dict = {}
        self._conj_cache: dict = {}

    def _check_word(self, w, i, what):
        if len(w) != self.m:
            raise GroupError(f"{what}: expected {self.m} exponents, got {len(w)}")
        for k, (a, r) in enumerate(zip(w, self.orders)):
            if not 0 <= a < r:
                raise GroupError(f"{what}: exponent {a} at position {k} out of range")
            if k <= i and a:
                raise GroupError(f"{what}: word must lie in G_{i + 1}")

    def mul(self, g, h):
        key = (g, h)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        res = g
        for k in range(self.m):
            for _ in range(h[k]):
                res = self._mul_gen(res, k)
        self._mul_cache[key] = res
        return res

    def _mul_gen(self, v, i):
        # v * z_i = prefix * z_i * (tail conjugated by z_i)
        tail = (0,) * (i + 1) + v[i + 1:]
        ct = self._conj_by_gen(tail, i)
        e = v[i] + 1
        if e == self.orders[i]:
            rest = self.mul(self.powers[i], ct)
            e = 0
        else:
            rest = ct
        return v[:i] + (e,) + rest[i + 1:]

    def _conj_by_gen(self, x, i):
        key = (x, i)
        hit = self._conj_cache.get(key)
        if hit is not None:
            return hit
        res = self.identity
        for j in range(i + 1, self.m):
            if x[j]:
                w = self.conj[(i, j)]
                for _ in range(x[j]):
                    res = self.mul(res, w)
        self._conj_cache[key] = res
        return res

    def gen(self, i):
        return tuple(1 if k == i else 0 for k in range(self.m))

    def word(self, exps):
        """Evaluate ``z_0^a_0 ... z_{m-1}^a_{m-1}`` with unreduced exponents."""
        res = self.identity
        for i, a in enumerate(exps):
            for _ in range(a):
                res = self.mul(res, self.gen(i))
        return res

    def consistency_failures(self) -> list[str]:
        """Sims-style consistency checks on generator words."""
        m, r = self.m, self.orders
        g = self.gen
        bad = []

        def prod(*xs):
            out = self.identity
            for x in xs:
                out = self.mul(out, x)
            return out

        def pw(i, k):
            out = self.identity
            for _ in range(k):
                out = self.mul(out, g(i))
            return out

        for i in range(m):
            for j in range(i + 1, m):
                for k in range(j + 1, m):
                    a = self.mul(g(k), self.mul(g(j), g(i)))
                    b = self.mul(self.mul(g(k), g(j)), g(i))
                    if a != b:
                        bad.append(f"z_{k} z_{j} z_{i}")
                a = self.mul(pw(j, r[j] - 1), self.mul(g(j), g(i)))
                b = self.mul(self.powers[j], g(i))
                if a != b:
                    bad.append(f"z_{j}^{r[j]} z_{i}")
                a = self.mul(self.mul(g(j), g(i)), pw(i, r[i] - 1))
                b = self.mul(g(j), self.powers[i])
                if a != b:
                    bad.append(f"z_{j} z_{i}^{r[i]}")
            a = self.mul(g(i), self.powers[i])
            b = self.mul(self.powers[i], g(i))
            if a != b:
                bad.append(f"z_{i}^{r[i] + 1}")
            if prod(*[g(i)] * r[i]) != self.powers[i]:
                bad.append(f"z_{i}^{r[i]} collection")
        return bad


class PolycyclicGroup(FiniteGroup):
    """The section ``G_start / G_end`` of a polycyclic presentation.

    With the default bounds this is the whole group.  ``prefix_subgroup`` and
    ``quotient`` return further sections; all share the full-length exponent
    tuple encoding, so elements move between them without translation (a
    quotient element is represented by its normal-form prefix, which is also
    a coset representative in the parent).
    """

    def __init__(self, presentation: _Presentation, start: int = 0, end: int | None = None,
                 blocks=(), commutator_index: int | None = None, name: str | None = None):
        self._pres = presentation
        end = presentation.m if end is None else end
        if not 0 <= start <= end <= presentation.m:
            raise GroupError(f"section [{start}, {end}) out of range")
        self.start, self.end = start, end
        self.blocks = tuple(blocks)
        self.commutator_index = commutator_index
        self.name = name or presentation.name

    # ---- construction -------------------------------------------------
    @classmethod
    def from_relations(cls, relative_orders, powers=None, conjugates=None, blocks=None,
                       commutator_index=None, name="", check=True) -> PolycyclicGroup:
        pres = _Presentation(relative_orders, powers or {}, conjugates or {}, name)
        if check:
            bad = pres.consistency_failures()
            if bad:
                raise GroupError(f"inconsistent presentation: {', '.join(bad[:5])}")
        if blocks is None:
            blocks = [Block(i, i + 1, "elementary", r) for i, r in enumerate(pres.orders)]
        blocks = tuple(b if isinstance(b, Block) else Block(**b) for b in blocks)
        g = cls(pres, 0, pres.m, blocks, commutator_index, name)
        g._validate_blocks()
        return g

    def _validate_blocks(self):
        pres = self._pres
        pos = self.start
        for b in self.blocks:
            if b.start != pos or b.stop <= b.start:
                raise GroupError("smooth-series blocks must tile the composition series")
            if b.kind not in ("elementary", "small"):
                raise GroupError(f"unknown block kind {b.kind!r}")
            pos = b.stop
            # G_stop is normal in G_start
            for i in range(b.start, b.stop):
                for j in range(b.stop, pres.m):
                    if any(pres.conj[(i, j)][: b.stop]):
                        raise GroupError(f"block {b}: G_{b.stop} is not normal in G_{b.start}")
            # the factor G_start / G_stop is abelian
            for i in range(b.start, b.stop):
                for j in range(i + 1, b.stop):
                    w = pres.conj[(i, j)][: b.stop]
                    if w != pres.gen(j)[: b.stop]:
                        raise GroupError(f"block {b}: factor is not abelian")
            if b.kind == "elementary":
                if b.p is None:
                    raise GroupError(f"elementary block {b} needs p")
                for i in range(b.start, b.stop):
                    if pres.orders[i] != b.p or any(pres.powers[i][: b.stop]):
                        raise GroupError(f"block {b}: factor is not elementary abelian")
        if pos != self.end:
            raise GroupError("smooth-series blocks must cover the whole series")

    # ---- identity and comparisons ------------------------------------
    def __repr__(self):
        return f"PolycyclicGroup({self.name!r}, [{self.start}, {self.end}))"

    def __eq__(self, other):
        return (isinstance(other, PolycyclicGroup) and other._pres is self._pres
                and other.start == self.start and other.end == self.end)

    def __hash__(self):
        return hash((id(self._pres), self.start, self.end))

    @property
    def presentation(self) -> _Presentation:
        return self._pres

    @property
    def length(self) -> int:
        """Number of composition factors of this section."""
        return self.end - self.start

    @property
    def relative_orders(self) -> tuple[int, ...]:
        return self._pres.orders[self.start:self.end]

    @property
    def order(self) -> int:
        return math.prod(self.relative_orders)

    def identity(self) -> Element:
        return self._pres.identity

    def generator(self, i: int) -> Element:
        """``z_{start+i}`` as an element of this section."""
        if not 0 <= i < self.length:
            raise GroupError(f"generator index {i} out of range")
        return self._pres.gen(self.start + i)

    def generators(self) -> list[Element]:
        return [self.generator(i) for i in range(self.length)]

    def contains(self, g) -> bool:
        if len(g) != self._pres.m:
            return False
        for k, (a, r) in enumerate(zip(g, self._pres.orders)):
            if not 0 <= a < r:
                return False
            if (k < self.start or k >= self.end) and a:
                return False
        return True

    def _check(self, g):
        if not self.contains(g):
            raise GroupError(f"{g!r} is not a normal form in {self!r}")

    def reduce(self, g) -> Element:
        """Image of a parent-section element in this quotient (drop tail)."""
        return tuple(a if self.start <= k < self.end else 0 for k, a in enumerate(g))

    # ---- arithmetic ---------------------------------------------------
    def multiply(self, g, h) -> Element:
        self._check(g)
        self._check(h)
        prod = self._pres.mul(tuple(g), tuple(h))
        if self.end < self._pres.m:
            prod = prod[: self.end] + (0,) * (self._pres.m - self.end)
        return prod

    def inverse(self, g) -> Element:
        self._check(g)
        return FiniteGroup.power(self, tuple(g), self.order - 1)

    def conjugate(self, g, x) -> Element:
        """``x^{-1} g x``."""
        return self.multiply(self.multiply(self.inverse(x), g), x)

    def elements(self) -> list[Element]:
        m = self._pres.m
        ranges = [range(r) if self.start <= k < self.end else range(1)
                  for k, r in enumerate(self._pres.orders)]
        return [tuple(x) for x in itertools.product(*ranges)] if m else [()]

    def random_element(self, rng) -> Element:
        return tuple(int(rng.integers(r)) if self.start <= k < self.end else 0
                     for k, r in enumerate(self._pres.orders))

    def is_abelian(self) -> bool:
        gens = self.generators()
        return all(self.multiply(a, b) == self.multiply(b, a) for a in gens for b in gens)

    # ---- series -------------------------------------------------------
    def section_blocks(self) -> tuple[Block, ...]:
        out = []
        for b in self.blocks:
            lo, hi = max(b.start, self.start), min(b.stop, self.end)
            if lo < hi:
                out.append(Block(lo, hi, b.kind, b.p))
        return tuple(out)

    def prefix_subgroup(self, i: int) -> PolycyclicGroup:
        """``G_i`` of this section's series (``i`` relative to the section)."""
        if not 0 <= i <= self.length:
            raise GroupError(f"series index {i} out of range 0..{self.length}")
        return PolycyclicGroup(self._pres, self.start + i, self.end, self.blocks,
                               self.commutator_index, self.name)

    def quotient(self, i: int) -> PolycyclicGroup:
        """``G / G_i`` with normal forms truncated to the first ``i`` factors."""
        if not 0 <= i <= self.length:
            raise GroupError(f"series index {i} out of range 0..{self.length}")
        return PolycyclicGroup(self._pres, self.start, self.start + i, self.blocks,
                               self.commutator_index, self.name)

    def is_normal_subgroup(self, sub: PolycyclicGroup) -> bool:
        """Whether a series subgroup ``sub`` is normal in this section."""
        elems = sub.elements()
        members = set(elems)
        return all(self.conjugate(n, z) in members for z in self.generators() for n in sub.generators())

    def elementary_view(self) -> tuple[AbelianGroup, callable, callable]:
        """``(Z_p^k, to_coords, from_coords)`` for a section inside one elementary block."""
        blocks = self.section_blocks()
        if len(blocks) != 1 or blocks[0].kind != "elementary":
            raise GroupError(f"{self!r} is not a single elementary-abelian block")
        p = blocks[0].p
        a, b, m = self.start, self.end, self._pres.m

        def to_coords(g):
            return tuple(g[a:b])

        def from_coords(c):
            return (0,) * a + tuple(int(x) % p for x in c) + (0,) * (m - b)

        return AbelianGroup.elementary(p, b - a), to_coords, from_coords


def prefix_subgroup(group: PolycyclicGroup, i: int) -> PolycyclicGroup:
    return group.prefix_subgroup(i)


def quotient_map(group: PolycyclicGroup, i: int):
    """``(G/G_i, phi)`` where ``phi`` is the natural map on normal forms."""
    q = group.quotient(i)
    return q, q.reduce


# --------------------------------------------------------------------------
# Z_p^n x| Z_2
# --------------------------------------------------------------------------

class SemidirectZpnZ2(FiniteGroup):
    """``Z_p^n x| Z_2`` acting by inversion; elements are ``(x, b)``."""

    def __init__(self, p: int, n: int):
        self.p = fp.check_prime(p)
        if n < 1:
            raise GroupError("n must be >= 1")
        self.n = n
        self.name = f"Z{p}^{n}xZ2"

    def __repr__(self):
        return f"SemidirectZpnZ2(p={self.p}, n={self.n})"

    @property
    def order(self) -> int:
        return 2 * self.p ** self.n

    def identity(self):
        return ((0,) * self.n, 0)

    def contains(self, g) -> bool:
        try:
            x, b = g
        except (TypeError, ValueError):
            return False
        return b in (0, 1) and len(x) == self.n and all(0 <= a < self.p for a in x)

    def _check(self, g):
        if not self.contains(g):
            raise GroupError(f"{g!r} is not an element of {self.name}")

    def multiply(self, g, h):
        self._check(g)
        self._check(h)
        (x, b), (y, c) = g, h
        s = -1 if b else 1
        return (tuple((a + s * d) % self.p for a, d in zip(x, y)), (b + c) % 2)

    def inverse(self, g):
        self._check(g)
        x, b = g
        if b:
            return g
        return (tuple((-a) % self.p for a in x), 0)

    def elements(self):
        return [(tuple(x), b) for b in (0, 1) for x in itertools.product(range(self.p), repeat=self.n)]

    def is_abelian(self) -> bool:
        return self.p == 2

    @cached_property
    def polycyclic(self) -> PolycyclicGroup:
        """Presentation with ``z_0 = (0, 1)`` and ``z_k = (e_k, 0)``.

        Series blocks: the ``Z_2`` top (small) then ``Z_p^n`` (elementary);
        the commutator subgroup is ``Z_p^n`` for odd ``p``.
        """
        return semidirect_presentation(self.p, self.n)

    def to_polycyclic(self, g) -> Element:
        x, b = g
        s = -1 if b else 1
        return (b,) + tuple((s * a) % self.p for a in x)

    def from_polycyclic(self, v) -> tuple:
        b = v[0]
        s = -1 if b else 1
        return (tuple((s * a) % self.p for a in v[1:]), b)


def semidirect_presentation(p: int, n: int, name: str | None = None) -> PolycyclicGroup:
    m = n + 1
    conj = {}
    for j in range(1, m):
        w = [0] * m
        w[j] = (-1) % p
        conj[(0, j)] = tuple(w)
    blocks = [Block(0, 1, "small"), Block(1, m, "elementary", p)]
    return PolycyclicGroup.from_relations(
        (2,) + (p,) * n, {}, conj, blocks,
        commutator_index=1 if p != 2 else m,
        name=name or f"Z{p}^{n}xZ2",
    )


def elementary_polycyclic(p: int, n: int, name: str | None = None) -> PolycyclicGroup:
    """``Z_p^n`` as a one-block polycyclic group (same element tuples as ``AbelianGroup``)."""
    fp.check_prime(p)
    return PolycyclicGroup.from_relations(
        (p,) * n, {}, {}, [Block(0, n, "elementary", p)], commutator_index=n,
        name=name or f"Z{p}^{n}",
    )


# --------------------------------------------------------------------------
# JSON group documents
# --------------------------------------------------------------------------

class SchemaError(GroupError):
    """A JSON group/action document failed validation; ``location`` names the field."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def group_from_dict(doc: dict):
    """Build a group from a JSON document (schema in ``data/README.md``)."""
    if not isinstance(doc, dict):
        raise SchemaError("$", "group document must be an object")
    kind = doc.get("kind")
    if kind == "abelian":
        factors = doc.get("factors")
        if not isinstance(factors, list):
            raise SchemaError("$.factors", "expected a list of prime powers")
        try:
            return AbelianGroup(factors, doc.get("name"))
        except GroupError as exc:
            raise SchemaError("$.factors", str(exc)) from None
    if kind == "semidirect":
        try:
            return SemidirectZpnZ2(int(doc["p"]), int(doc["n"]))
        except KeyError as exc:
            raise SchemaError(f"$.{exc.args[0]}", "missing field") from None
    if kind != "polycyclic":
        raise SchemaError("$.kind", f"unknown group kind {kind!r}")
    orders = doc.get("relative_orders")
    if not isinstance(orders, list) or not orders:
        raise SchemaError("$.relative_orders", "expected a non-empty list of primes")
    powers = {}
    for key, word in (doc.get("powers") or {}).items():
        try:
            powers[int(key)] = tuple(word)
        except (TypeError, ValueError):
            raise SchemaError(f"$.powers.{key}", "expected an integer key and exponent list") from None
    conj = {}
    for idx, rel in enumerate(doc.get("conjugates") or []):
        try:
            conj[(int(rel["i"]), int(rel["j"]))] = tuple(rel["word"])
        except (KeyError, TypeError, ValueError):
            raise SchemaError(f"$.conjugates[{idx}]", "expected {i, j, word}") from None
    blocks = []
    for idx, b in enumerate(doc.get("blocks") or []):
        try:
            blocks.append(Block(int(b["start"]), int(b["stop"]), str(b["kind"]),
                                int(b["p"]) if b.get("p") is not None else None))
        except (KeyError, TypeError, ValueError):
            raise SchemaError(f"$.blocks[{idx}]", "expected {start, stop, kind[, p]}") from None
    try:
        return PolycyclicGroup.from_relations(
            orders, powers, conj, blocks or None,
            commutator_index=doc.get("commutator_index"), name=doc.get("name", ""),
        )
    except GroupError as exc:
        raise SchemaError("$", str(exc)) from None


def load_group(source):
    """Load a group from a dict, a JSON file path, or a built-in fixture name."""
    if isinstance(source, dict):
        return group_from_dict(source)
    path = Path(source)
    if path.suffix == ".json" and path.exists():
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
        return group_from_dict(doc)
    return builtin_group(str(source))


def builtin_group_names() -> list[str]:
    files = resources.files("orbitcoset") / "data" / "groups"
    return sorted(f.name[:-5] for f in files.iterdir() if f.name.endswith(".json"))


def builtin_group(name: str):
    res = resources.files("orbitcoset") / "data" / "groups" / f"{name}.json"
    if not res.is_file():
        raise SchemaError("$", f"unknown built-in group {name!r}; choose from {builtin_group_names()}")
    return group_from_dict(json.loads(res.read_text()))
