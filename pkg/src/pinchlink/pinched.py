"""Combinatorial models of d-curlings, pinched discs, and singular
pinched solid tori.

A singular pinched solid torus is the mapping torus of a homeomorphism
permuting the k discs of a k-pinched disc; only the permutation is
stored, since the homeomorphism class depends on nothing else.  Labels
are 1-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError

__all__ = [
    "Permutation",
    "CycleDecomposition",
    "SingularPinchedTorus",
    "SingularCurveData",
    "BoundaryFraming",
    "Curling",
    "cycle_decomposition",
    "sheets",
    "boundary_framings",
    "boundary_class_map",
]


@dataclass(frozen=True)
class Permutation:
    """Permutation of {1..k}, stored as the tuple of images of 1..k."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        k = len(self.images)
        if k < 1:
            raise ValidationError("permutation must act on at least one element")
        if sorted(self.images) != list(range(1, k + 1)):
            raise ValidationError(f"{self.images} is not a bijection of 1..{k}")

    @property
    def k(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return cls(tuple(range(1, k + 1)))

    @classmethod
    def from_cycles(cls, k: int, cycles) -> "Permutation":
        images = list(range(1, k + 1))
        seen = set()
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)(cyc[:1])):
                if a in seen:
                    raise ValidationError(f"element {a} appears in two cycles")
                seen.add(a)
                images[a - 1] = b
        return cls(tuple(images))

    def to_json(self) -> list[int]:
        return list(self.images)

    @classmethod
    def from_json(cls, doc) -> "Permutation":
        return cls(tuple(int(i) for i in doc))


@dataclass(frozen=True)
class CycleDecomposition:
    """Disjoint cycles of a permutation, sorted by smallest element."""

    cycles: tuple[tuple[int, ...], ...]
    orders: tuple[int, ...]


def cycle_decomposition(p: Permutation) -> CycleDecomposition:
    """Orbits of `p`, each written from its smallest element; the list
    of cycles is ordered by those smallest elements."""
    seen = [False] * p.k
    cycles = []
    for start in range(1, p.k + 1):
        if seen[start - 1]:
            continue
        cyc = []
        i = start
        while not seen[i - 1]:
            seen[i - 1] = True
            cyc.append(i)
            i = p(i)
        cycles.append(tuple(cyc))
    return CycleDecomposition(tuple(cycles), tuple(len(c) for c in cycles))


@dataclass(frozen=True)
class SingularPinchedTorus:
    """Mapping torus of the permutation `monodromy` acting on a
    k-pinched disc.  For k = 1 this is an ordinary solid torus and the
    core is not a topologically singular point."""

    monodromy: Permutation

    @property
    def k(self) -> int:
        return self.monodromy.k

    @property
    def is_singular(self) -> bool:
        return self.k >= 2


@dataclass(frozen=True)
class Curling:
    """One sheet of a singular pinched torus: a d-curling, d = order."""

    order: int
    cycle: tuple[int, ...]


def sheets(t: SingularPinchedTorus) -> list[Curling]:
    """Sheets of `t`: one d_j-curling per cycle of the monodromy."""
    dec = cycle_decomposition(t.monodromy)
    return [Curling(d, c) for d, c in zip(dec.orders, dec.cycles)]


@dataclass(frozen=True)
class BoundaryFraming:
    """Meridian/parallel basis (m_j, l_j) of one boundary torus, with
    intersection m . l = +1, plus the degree of its sheet."""

    meridian: str
    parallel: str
    sheet_degree: int


def boundary_framings(t: SingularPinchedTorus) -> list[BoundaryFraming]:
    """One framed boundary torus per sheet."""
    return [
        BoundaryFraming(f"m{j + 1}", f"l{j + 1}", sh.order)
        for j, sh in enumerate(sheets(t))
    ]


def boundary_class_map(t: SingularPinchedTorus, j: int) -> tuple[int, int]:
    """Homotopy classes of (m_j, l_j) in pi_1 of the pinched torus,
    as multiples of the core class: the meridian dies, the parallel
    wraps d_j times."""
    shs = sheets(t)
    if not 0 <= j < len(shs):
        raise IndexError(f"sheet index {j} out of range for {len(shs)} sheets")
    return (0, shs[j].order)


@dataclass(frozen=True)
class SingularCurveData:
    """Branch degrees d_1..d_n of the normalization over one singular
    curve; the total degree is their sum."""

    name: str
    branch_degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "branch_degrees", tuple(self.branch_degrees))
        if not self.branch_degrees:
            raise ValidationError(f"curve {self.name!r} needs at least one branch")
        if any(d < 1 for d in self.branch_degrees):
            raise ValidationError(f"curve {self.name!r} has a branch degree < 1")

    @property
    def n(self) -> int:
        return len(self.branch_degrees)

    @property
    def total_degree(self) -> int:
        return sum(self.branch_degrees)

    def induced_permutation(self) -> Permutation:
        """Product of disjoint cycles of orders d_1..d_n on consecutive
        blocks of 1..k."""
        cycles = []
        next_label = 1
        for d in self.branch_degrees:
            cycles.append(tuple(range(next_label, next_label + d)))
            next_label += d
        return Permutation.from_cycles(self.total_degree, cycles)

    def pinched_torus(self) -> SingularPinchedTorus:
        return SingularPinchedTorus(self.induced_permutation())
