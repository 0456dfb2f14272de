"""Exact permutations on {1..n} and brute-force subgroup machinery for S_n/A_n.

Everything is exhaustive by design: the groups are tiny (|A6| = 360, and the
larger alternating groups only ever appear through class orbits), so no
stabilizer-chain machinery is needed.  All functions are pure; ``Perm`` values
are immutable and hashable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

MAX_POINTS = 12


class Perm:
    """A permutation of {1..n}, stored as a 0-based image tuple.

    Composition is ``(p * q)(x) = p(q(x))`` (apply ``q`` first), and
    ``x.conj(g) == g.inverse() * x * g``.
    """

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if len(images) > MAX_POINTS:
            raise ValueError(f"at most {MAX_POINTS} points supported")
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection of 0..{len(images) - 1}: {images}")
        self.images = images

    # -- construction ----------------------------------------------------

    @staticmethod
    def identity(n: int) -> "Perm":
        return Perm(range(n))

    @staticmethod
    def from_cycles(cycles, n: int) -> "Perm":
        """Build from 1-based disjoint cycles, e.g. ``[(1, 2), (3, 4)]``."""
        images = list(range(n))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= n:
                    raise ValueError(f"point {a} out of range 1..{n}")
                if a in seen:
                    raise ValueError(f"point {a} repeated")
                seen.add(a)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b - 1
        return Perm(images)

    # -- basic protocol ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        return self.images[point - 1] + 1

    def __mul__(self, other: "Perm") -> "Perm":
        if self.n != other.n:
            raise ValueError("point counts differ")
        o = other.images
        s = self.images
        return Perm(tuple(s[o[i]] for i in range(len(s))))

    def inverse(self) -> "Perm":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self, g: "Perm") -> "Perm":
        """Conjugate ``g^-1 * self * g``."""
        return g.inverse() * self * g

    def commutator(self, other: "Perm") -> "Perm":
        """``[self, other] = self^-1 * other^-1 * self * other``."""
        return self.inverse() * other.inverse() * self * other

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    # -- structure ---------------------------------------------------------

    def cycles(self, keep_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles as 1-based tuples, least point first."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1 or keep_fixed:
                out.append(tuple(p + 1 for p in cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths including fixed points, sorted descending."""
        lengths = sorted((len(c) for c in self.cycles(keep_fixed=True)), reverse=True)
        return tuple(lengths)

    def order(self) -> int:
        result = 1
        for c in self.cycles():
            result = _lcm(result, len(c))
        return result

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + ",".join(str(p) for p in c) + ")" for c in cycs)

    def __repr__(self) -> str:
        return f"Perm[{self}]"


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def parse_cycles(text: str, n: int) -> Perm:
    """Parse cycle notation like ``"(1,2)(3,4,5,6)"``; ``"()"`` is the identity.

    Raises ``ValueError`` on malformed input, repeated points, or points
    outside 1..n.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty permutation string")
    if s == "()":
        return Perm.identity(n)
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"malformed cycle string: {text!r}")
    cycles = []
    for part in s[1:-1].split(")("):
        if not part:
            raise ValueError(f"empty cycle in {text!r}")
        try:
            cyc = tuple(int(tok) for tok in part.split(","))
        except ValueError:
            raise ValueError(f"malformed cycle {part!r} in {text!r}") from None
        if len(cyc) < 2:
            raise ValueError(f"cycle {part!r} too short")
        cycles.append(cyc)
    return Perm.from_cycles(cycles, n)


# -- groups ------------------------------------------------------------------

#: Isomorphism labels for the subgroups of A6, keyed by group order.  Inside
#: A6 the order determines the type except at order 4, where element orders
#: separate the cyclic group from the Klein group (A6 has no elements of
#: order > 5, which rules out every other candidate of these orders).
_LABEL_BY_ORDER = {
    1: "1",
    2: "2",
    3: "3",
    5: "5",
    6: "S3",
    8: "D8",
    9: "3x3",
    10: "D10",
    12: "A4",
    18: "3^2:2",
    24: "S4",
    36: "3^2:4",
    60: "A5",
    360: "A6",
}


@dataclass(frozen=True)
class SubgroupHandle:
    """A concrete subgroup: generators, full element set, isomorphism label."""

    generators: tuple[Perm, ...]
    elements: frozenset[Perm]
    iso_label: str

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Perm) -> bool:
        return g in self.elements


def closure(gens, n: int | None = None) -> SubgroupHandle:
    """Subgroup generated by ``gens`` (empty list gives the trivial group)."""
    gens = tuple(gens)
    if not gens:
        if n is None:
            raise ValueError("empty generator list needs an explicit point count")
        return trivial_group(n)
    n = gens[0].n
    elements = {Perm.identity(n)}
    frontier = [Perm.identity(n)]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in elements:
                    elements.add(y)
                    new.append(y)
        frontier = new
    return SubgroupHandle(gens, frozenset(elements), _iso_label(elements))


def _iso_label(elements) -> str:
    order = len(elements)
    if order == 4:
        return "4" if any(g.order() == 4 for g in elements) else "2^2"
    return _LABEL_BY_ORDER.get(order, f"G{order}")


def trivial_group(n: int) -> SubgroupHandle:
    e = Perm.identity(n)
    return SubgroupHandle((), frozenset([e]), "1")


@dataclass(frozen=True)
class PairProfile:
    """Conjugation-invariant data of an ordered pair (x, y)."""

    order_x: int
    order_y: int
    order_xy: int
    order_xy_inv: int
    group_order: int
    group_label: str
    cycle_type_x: tuple[int, ...]
    cycle_type_y: tuple[int, ...]

    @property
    def order_multiset(self) -> tuple[int, int]:
        return tuple(sorted((self.order_xy, self.order_xy_inv)))


def classify_pair(x: Perm, y: Perm) -> PairProfile:
    grp = closure([x, y])
    return PairProfile(
        order_x=x.order(),
        order_y=y.order(),
        order_xy=(x * y).order(),
        order_xy_inv=(x * y.inverse()).order(),
        group_order=grp.order,
        group_label=grp.iso_label,
        cycle_type_x=x.cycle_type(),
        cycle_type_y=y.cycle_type(),
    )


# -- A6 / A_n enumeration ------------------------------------------------------


@lru_cache(maxsize=None)
def alternating_elements(n: int) -> tuple[Perm, ...]:
    """All elements of A_n in lexicographic order (only sensible for n <= 8)."""
    if n > 8:
        raise ValueError("full enumeration capped at n = 8")
    out = []
    for images in itertools.permutations(range(n)):
        p = Perm(images)
        if p.is_even():
            out.append(p)
    return tuple(out)


def a6_elements() -> tuple[Perm, ...]:
    return alternating_elements(6)


@lru_cache(maxsize=None)
def a6_generators() -> tuple[Perm, Perm]:
    return (parse_cycles("(1,2,3)", 6), parse_cycles("(2,3,4,5,6)", 6))


@lru_cache(maxsize=None)
def conjugacy_class(rep: Perm, n: int) -> frozenset[Perm]:
    """A_n-conjugacy class of ``rep``, via orbit closure under generators."""
    gens = [g for g in _an_generators(n)]
    orbit = {rep}
    frontier = [rep]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x.conj(g)
                if y not in orbit:
                    orbit.add(y)
                    new.append(y)
        frontier = new
    return frozenset(orbit)


def _an_generators(n: int) -> list[Perm]:
    gens = [Perm.from_cycles([(1, 2, 3)], n)]
    if n > 3:
        cyc = tuple(range(1, n + 1)) if n % 2 == 1 else tuple(range(2, n + 1))
        gens.append(Perm.from_cycles([cyc], n))
    return gens


def elements_of_cycle_type(ctype: tuple[int, ...], n: int) -> list[Perm]:
    """All permutations of the given full cycle type on n points, sorted."""
    padded = tuple(sorted(ctype, reverse=True))
    if sum(padded) != n:
        raise ValueError(f"cycle type {ctype} does not partition {n}")
    lengths = [l for l in padded if l > 1]
    support_size = sum(lengths)
    out = []
    for support in itertools.combinations(range(1, n + 1), support_size):
        for cycs in _assign_cycles(list(support), lengths):
            out.append(Perm.from_cycles(cycs, n))
    out.sort()
    return out


def _assign_cycles(points, lengths):
    """Partitions of ``points`` into cycles with the given multiset of lengths.

    The least remaining point always anchors its cycle, which makes each
    assignment appear exactly once even when lengths repeat.
    """
    if not lengths:
        if not points:
            yield []
        return
    anchor = points[0]
    seen = set()
    for idx, length in enumerate(lengths):
        if length in seen:
            continue
        seen.add(length)
        rest_lengths = lengths[:idx] + lengths[idx + 1 :]
        for others in itertools.combinations(points[1:], length - 1):
            others_set = set(others)
            remaining = [p for p in points[1:] if p not in others_set]
            for arrangement in itertools.permutations(others):
                cyc = (anchor,) + arrangement
                for tail in _assign_cycles(remaining, rest_lengths):
                    yield [cyc] + tail


@lru_cache(maxsize=None)
def canonical_reps(n_order: int, five_class: Perm | None = None) -> tuple[Perm, ...]:
    """One generator per cyclic subgroup of order ``n_order`` in A6.

    For ``n_order == 5`` the representative is restricted to the conjugacy
    class of ``five_class`` (default ``(1,2,3,4,5)``); the class contains two
    generators of each 5-subgroup, and the lexicographically least is chosen.
    For the other orders the representative is the least generator.
    """
    if n_order not in (2, 3, 4, 5):
        raise ValueError("order must be 2, 3, 4 or 5")
    if n_order == 5:
        if five_class is None:
            five_class = parse_cycles("(1,2,3,4,5)", 6)
        if five_class.n != 6 or five_class.order() != 5:
            raise ValueError("five_class must have order 5 in A6")
        admissible = conjugacy_class(five_class, 6)
    else:
        admissible = None
    by_subgroup: dict[frozenset, list[Perm]] = {}
    for g in a6_elements():
        if g.order() != n_order:
            continue
        if admissible is not None and g not in admissible:
            continue
        key = frozenset(_cyclic(g))
        by_subgroup.setdefault(key, []).append(g)
    reps = sorted(min(gens) for gens in by_subgroup.values())
    return tuple(reps)


def _cyclic(g: Perm) -> list[Perm]:
    out = [g]
    x = g * g
    while x != g:
        out.append(x)
        x = x * g
    return out


def cyclic_subgroup(g: Perm) -> frozenset[Perm]:
    return frozenset(_cyclic(g))


@lru_cache(maxsize=None)
def maximal_s4_overgroups(g: Perm) -> tuple[SubgroupHandle, SubgroupHandle]:
    """The two S4-subgroups of A6 containing an order-4 element ``g``.

    Returned as (K1, K2) where the order-3 elements of K1 are 3-cycles and
    those of K2 have cycle structure 3+3.
    """
    if g.n != 6 or g.order() != 4:
        raise ValueError("g must have order 4 in A6")
    found: dict[frozenset, SubgroupHandle] = {}
    for t in canonical_reps(2):
        h = closure([g, t])
        if h.order == 24:
            found.setdefault(h.elements, h)
    if len(found) != 2:
        raise RuntimeError(f"expected 2 maximal S4 overgroups, found {len(found)}")
    k1 = k2 = None
    for h in found.values():
        kinds = {x.cycle_type() for x in h.elements if x.order() == 3}
        if kinds == {(3, 1, 1, 1)}:
            k1 = h
        elif kinds == {(3, 3)}:
            k2 = h
    if k1 is None or k2 is None:
        raise RuntimeError("S4 overgroups did not split by 3-element cycle type")
    return (k1, k2)


def diagonal_embedding() -> tuple[Perm, SubgroupHandle]:
    """The fixed-point-free involution z in A12 and H = {g * g^z} = A6."""
    z = parse_cycles("(1,7)(2,8)(3,9)(4,10)(5,11)(6,12)", 12)
    elements = []
    for g in a6_elements():
        g12 = Perm(tuple(g.images) + tuple(range(6, 12)))
        elements.append(g12 * g12.conj(z))
    gens = (
        parse_cycles("(1,2,3)(7,8,9)", 12),
        parse_cycles("(2,3,4,5,6)(8,9,10,11,12)", 12),
    )
    return z, SubgroupHandle(gens, frozenset(elements), "A6")


def centralizer_order(x: Perm, n: int) -> int:
    """|C_{A_n}(x)| via orbit-stabilizer on the conjugacy class of x."""
    if n % 2 == 1:
        group_order = 1
        for k in range(3, n + 1):
            group_order *= k
    else:
        from math import factorial

        group_order = factorial(n) // 2
    return group_order // len(conjugacy_class(x, n))


def order6_obstruction_scan(n: int, class_types) -> tuple[Perm, Perm] | None:
    """Search the given involution classes of A_n for a pair with |rs| = 6.

    ``class_types`` is a list of full cycle types, e.g. ``[(2, 2, 1, 1)]``.
    The scan fixes the least element of the first class as ``r`` (valid by
    conjugation transitivity) and tries every member of every class as ``s``;
    it returns the first witness or None after an exhaustive pass.
    """
    if not 5 <= n <= MAX_POINTS:
        raise ValueError("n must be between 5 and 12")
    classes = []
    for ctype in class_types:
        ctype = tuple(sorted(ctype, reverse=True))
        elems = elements_of_cycle_type(ctype, n)
        if not elems or elems[0].order() != 2 or not elems[0].is_even():
            raise ValueError(f"{ctype} is not an involution class of A{n}")
        classes.append(elems)
    if not classes:
        raise ValueError("no involution classes given")
    for class_r in classes:
        r = class_r[0]
        for class_s in classes:
            for s in class_s:
                if (r * s).order() == 6:
                    return (r, s)
    return None


def bitransposition_type(n: int) -> tuple[int, ...]:
    return (2, 2) + (1,) * (n - 4)
