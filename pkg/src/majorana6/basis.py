"""Generator catalog for the A6 representation: 166 axes with orientation.

The catalog indexes 45 two-axes, 40 three-axes, 45 four-axes (one per cyclic
subgroup) and 36 five-axes (one per 5-subgroup, oriented by a fixed conjugacy
class).  Formal vectors are sparse rational combinations over catalog indices.
Derived vectors (dormant 4-axes, eta, gamma, the total 5-axis sum) never get
catalog slots; they are always materialised as expansions over these 166.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exactla import QQ, Q0
from .perm import (
    Perm,
    a6_elements,
    canonical_reps,
    conjugacy_class,
    cyclic_subgroup,
    parse_cycles,
)

KINDS = ("Axis2", "Axis3", "Axis4", "Axis5")
KIND_ORDER = {"Axis2": 2, "Axis3": 3, "Axis4": 4, "Axis5": 5}


@dataclass(frozen=True)
class GeneratorId:
    kind: str
    key: Perm

    def to_json(self) -> dict:
        return {"kind": self.kind, "key": str(self.key)}

    def __str__(self) -> str:
        return f"{self.kind}[{self.key}]"


class FormalVector:
    """Sparse exact-rational combination of catalog generators (by index)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for idx, val in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
                val = QQ(val)
                if val:
                    cur = self.coeffs.get(idx)
                    new = val if cur is None else cur + val
                    if new:
                        self.coeffs[idx] = new
                    elif cur is not None:
                        del self.coeffs[idx]

    @staticmethod
    def unit(idx: int) -> "FormalVector":
        return FormalVector({idx: 1})

    def __add__(self, other: "FormalVector") -> "FormalVector":
        out = dict(self.coeffs)
        for idx, val in other.coeffs.items():
            new = out.get(idx, Q0) + val
            if new:
                out[idx] = new
            else:
                out.pop(idx, None)
        v = FormalVector()
        v.coeffs = out
        return v

    def __sub__(self, other: "FormalVector") -> "FormalVector":
        return self + (-other)

    def __neg__(self) -> "FormalVector":
        v = FormalVector()
        v.coeffs = {idx: -val for idx, val in self.coeffs.items()}
        return v

    def scale(self, factor) -> "FormalVector":
        factor = QQ(factor)
        v = FormalVector()
        if factor:
            v.coeffs = {idx: factor * val for idx, val in self.coeffs.items()}
        return v

    def __rmul__(self, factor) -> "FormalVector":
        return self.scale(factor)

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalVector) and self.coeffs == other.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def items(self):
        return self.coeffs.items()

    def support(self):
        return set(self.coeffs)

    def __repr__(self) -> str:
        terms = ", ".join(f"{idx}: {val}" for idx, val in sorted(self.coeffs.items()))
        return f"FormalVector({{{terms}}})"


def vsum(vectors) -> FormalVector:
    total = FormalVector()
    for v in vectors:
        total = total + v
    return total


class AxisCatalog:
    """Deterministic enumeration of the 166 generators plus orientation lookup."""

    def __init__(self, five_class: Perm | None = None):
        if five_class is None:
            five_class = parse_cycles("(1,2,3,4,5)", 6)
        if five_class.n != 6 or five_class.order() != 5 or not five_class.is_even():
            raise ValueError("five_class must be an order-5 element of A6")
        self.five_class_rep = five_class
        self.five_class = conjugacy_class(five_class, 6)
        gens: list[GeneratorId] = []
        for kind, order in zip(KINDS, (2, 3, 4, 5)):
            reps = canonical_reps(order, five_class) if order == 5 else canonical_reps(order)
            gens.extend(GeneratorId(kind, key) for key in reps)
        self.generators = tuple(gens)
        self.index = {gid: i for i, gid in enumerate(self.generators)}
        self.kind_slice = {}
        start = 0
        for kind, count in zip(KINDS, (45, 40, 45, 36)):
            self.kind_slice[kind] = range(start, start + count)
            start += count
        # orientation lookup for every element of order 2..5; only generators
        # of the cyclic subgroup map to its axis (g**2 has its own 2-axis)
        self._lookup: dict[Perm, tuple[int, int]] = {}
        from math import gcd

        for i, gid in enumerate(self.generators):
            order = KIND_ORDER[gid.kind]
            for k in range(1, order):
                if gcd(k, order) != 1:
                    continue
                elem = gid.key**k
                if order == 5:
                    sign = 1 if elem in self.five_class else -1
                else:
                    sign = 1
                self._lookup[elem] = (i, sign)

    @property
    def size(self) -> int:
        return len(self.generators)

    def gen(self, i: int) -> GeneratorId:
        return self.generators[i]

    def key(self, i: int) -> Perm:
        return self.generators[i].key

    def kind(self, i: int) -> str:
        return self.generators[i].kind

    def lookup(self, elem: Perm) -> tuple[int, int]:
        """(generator index, orientation sign) for a group element of order 2..5."""
        try:
            return self._lookup[elem]
        except KeyError:
            raise KeyError(f"no axis for element {elem} (order {elem.order()})") from None

    def axis(self, elem: Perm) -> FormalVector:
        idx, sign = self.lookup(elem)
        return FormalVector({idx: sign})

    def indices(self, kind: str) -> range:
        return self.kind_slice[kind]

    # -- group action ---------------------------------------------------------

    @lru_cache(maxsize=None)
    def _act_table(self, sigma: Perm) -> tuple[tuple[int, int], ...]:
        table = []
        for gid in self.generators:
            table.append(self.lookup(gid.key.conj(sigma)))
        return tuple(table)

    def act_index(self, sigma: Perm, i: int) -> tuple[int, int]:
        return self._act_table(sigma)[i]

    def act(self, sigma: Perm, v: FormalVector) -> FormalVector:
        """Conjugation action of sigma in S6 on a formal vector.

        Even elements act on all generators.  Odd elements swap the two
        order-5 classes, so they only act at the generator level on vectors
        supported away from the five-axes; the full odd action lives on
        V-degree coordinates (permutation part on U, sign on the w line).
        """
        if not sigma.is_even():
            bad = [i for i in v.coeffs if self.kind(i) == "Axis5"]
            if bad:
                raise ValueError(
                    "odd permutations act on five-axes only after expansion; "
                    "use the coordinate-level action"
                )
        table = self._act_table(sigma)
        out = FormalVector()
        coeffs = {}
        for i, val in v.coeffs.items():
            j, sign = table[i]
            new = coeffs.get(j, Q0) + (val if sign > 0 else -val)
            if new:
                coeffs[j] = new
            else:
                coeffs.pop(j, None)
        out.coeffs = coeffs
        return out

    def sum_w(self) -> FormalVector:
        """Sum of all 36 positive five-axes."""
        return FormalVector({i: 1 for i in self.indices("Axis5")})

    def vector_to_json(self, v: FormalVector) -> dict:
        out = {}
        for i in sorted(v.coeffs):
            gid = self.generators[i]
            out[f"{gid.kind}:{gid.key}"] = str(v.coeffs[i])
        return out

    def __hash__(self):
        return hash(self.five_class_rep)

    def __eq__(self, other):
        return (
            isinstance(other, AxisCatalog)
            and self.five_class_rep == other.five_class_rep
        )


@lru_cache(maxsize=4)
def build_catalog(five_class_str: str = "(1,2,3,4,5)") -> AxisCatalog:
    """Build (and cache) the 166-generator catalog for a chosen 5-class."""
    return AxisCatalog(parse_cycles(five_class_str, 6))


def subgroup_of(catalog: AxisCatalog, i: int) -> frozenset[Perm]:
    return cyclic_subgroup(catalog.key(i))
