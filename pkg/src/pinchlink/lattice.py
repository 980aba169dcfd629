"""Exact integer matrix algebra: Smith normal form, cokernels, and
finitely generated abelian groups.

All arithmetic is arbitrary-precision (plain Python ints); intermediate
entries of an elimination can grow far beyond the input range even on
small matrices, so fixed-width integers are never used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import prod

from .errors import ValidationError

__all__ = [
    "IntMatrix",
    "AbelianGroup",
    "smith_normal_form",
    "invariant_factors",
    "cokernel",
    "kernel_rank",
]


class IntMatrix:
    """Immutable integer matrix, row-major storage.

    Relation matrices follow the project-wide convention: columns are
    relations acting on row-indexed generators.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        if rows < 0 or cols < 0:
            raise ValidationError("matrix dimensions must be nonnegative")
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValidationError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
            )
        if not all(isinstance(e, int) for e in entries):
            raise ValidationError("matrix entries must be integers")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValidationError("ragged rows")
        return cls(len(rows), ncols, [e for r in rows for e in r])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, ij) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValidationError("matrix shape mismatch in product")
        a, b = self.to_rows(), other.to_rows()
        out = []
        for i in range(self.rows):
            ra = a[i]
            for j in range(other.cols):
                out.append(sum(ra[k] * b[k][j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, out)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, {self.to_rows()})"

    def to_json(self) -> list[list[int]]:
        return self.to_rows()


def _diagonalize(s: list[list[int]], u, v) -> None:
    """In-place elimination of the row-list matrix `s` to Smith form.

    Row operations are mirrored on `u`, column operations on `v`
    (either may be None).  On return `s` is diagonal, diagonal entries
    are nonnegative and each divides the next.
    """
    nrows = len(s)
    ncols = len(s[0]) if s else 0
    t = 0
    limit = min(nrows, ncols)
    while t < limit:
        # pivot: a nonzero entry of minimal magnitude in the trailing block
        best = 0
        pi = pj = -1
        for i in range(t, nrows):
            row = s[i]
            for j in range(t, ncols):
                e = row[j]
                if e:
                    a = -e if e < 0 else e
                    if best == 0 or a < best:
                        best, pi, pj = a, i, j
            if best == 1:
                break
        if best == 0:
            break
        if pi != t:
            s[t], s[pi] = s[pi], s[t]
            if u is not None:
                u[t], u[pi] = u[pi], u[t]
        if pj != t:
            for row in s:
                row[t], row[pj] = row[pj], row[t]
            if v is not None:
                for row in v:
                    row[t], row[pj] = row[pj], row[t]
        while True:
            p = s[t][t]
            moved = False
            # clear below the pivot
            for i in range(t + 1, nrows):
                e = s[i][t]
                if e == 0:
                    continue
                q = e // p
                if q:
                    si, st = s[i], s[t]
                    for j in range(t, ncols):
                        si[j] -= q * st[j]
                    if u is not None:
                        ui, ut = u[i], u[t]
                        for j in range(len(ui)):
                            ui[j] -= q * ut[j]
                if s[i][t]:
                    # remainder is a strictly smaller pivot
                    s[t], s[i] = s[i], s[t]
                    if u is not None:
                        u[t], u[i] = u[i], u[t]
                    moved = True
                    break
            if moved:
                continue
            # clear to the right of the pivot
            for j in range(t + 1, ncols):
                e = s[t][j]
                if e == 0:
                    continue
                q = e // p
                if q:
                    for row in s:
                        row[j] -= q * row[t]
                    if v is not None:
                        for row in v:
                            row[j] -= q * row[t]
                if s[t][j]:
                    for row in s:
                        row[t], row[j] = row[j], row[t]
                    if v is not None:
                        for row in v:
                            row[t], row[j] = row[j], row[t]
                    moved = True
                    break
            if moved:
                continue
            # pivot must divide the whole trailing block for the
            # divisibility chain; if not, fold the offending row in
            bad = -1
            for i in range(t + 1, nrows):
                row = s[i]
                for j in range(t + 1, ncols):
                    if row[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            sb, st = s[bad], s[t]
            for j in range(t, ncols):
                st[j] += sb[j]
            if u is not None:
                ub, ut = u[bad], u[t]
                for j in range(len(ut)):
                    ut[j] += ub[j]
        t += 1
    # normalize diagonal signs
    for i in range(limit):
        if s[i][i] < 0:
            si = s[i]
            for j in range(ncols):
                si[j] = -si[j]
            if u is not None:
                ui = u[i]
                for j in range(len(ui)):
                    ui[j] = -ui[j]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with U @ m @ V == S, U and V unimodular, and S
    diagonal with nonnegative entries forming a divisibility chain."""
    s = m.to_rows()
    u = [[1 if i == j else 0 for j in range(m.rows)] for i in range(m.rows)]
    v = [[1 if i == j else 0 for j in range(m.cols)] for i in range(m.cols)]
    _diagonalize(s, u, v)
    flat = lambda rows: [e for r in rows for e in r]
    return (
        IntMatrix(m.rows, m.rows, flat(u)),
        IntMatrix(m.rows, m.cols, flat(s)),
        IntMatrix(m.cols, m.cols, flat(v)),
    )


def invariant_factors(m: IntMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form (including 1s), in chain order."""
    if m.rows == 0 or m.cols == 0:
        return []
    s = m.to_rows()
    _diagonalize(s, None, None)
    out = []
    for i in range(min(m.rows, m.cols)):
        d = s[i][i]
        if d == 0:
            break
        out.append(d)
    return out


def cokernel(m: IntMatrix) -> "AbelianGroup":
    """Z^rows modulo the span of the columns of `m`."""
    factors = invariant_factors(m)
    return AbelianGroup(m.rows - len(factors), tuple(f for f in factors if f > 1))


def kernel_rank(m: IntMatrix) -> int:
    """Rank of the integer kernel: cols minus the rank of `m`."""
    return m.cols - len(invariant_factors(m))


_TEXT_RE = re.compile(r"^Z(?:\^(\d+))?$|^Z/(\d+)$")


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group as rank plus invariant factors.

    torsion entries are >= 2 and each divides the next.
    """

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.rank < 0:
            raise ValidationError("rank must be nonnegative")
        for a in self.torsion:
            if a < 2:
                raise ValidationError("torsion coefficients must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValidationError(f"torsion {self.torsion} violates the divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.rank:
            return None
        return prod(self.torsion)

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        if not other.torsion:
            return AbelianGroup(self.rank + other.rank, self.torsion)
        if not self.torsion:
            return AbelianGroup(self.rank + other.rank, other.torsion)
        # recompute invariant factors of the concatenation
        n = len(self.torsion) + len(other.torsion)
        diag = list(self.torsion) + list(other.torsion)
        m = IntMatrix(n, n, [diag[i] if i == j else 0 for i in range(n) for j in range(n)])
        g = cokernel(m)
        return AbelianGroup(self.rank + other.rank + g.rank, g.torsion)

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{a}" for a in self.torsion)
        return " + ".join(parts) if parts else "0"

    @classmethod
    def from_text(cls, text: str) -> "AbelianGroup":
        """Parse the printed form, e.g. "Z^2 + Z/3 + Z/6" or "0"."""
        text = text.strip()
        if text == "0":
            return cls()
        rank = 0
        torsion = []
        for part in text.split("+"):
            m = _TEXT_RE.match(part.strip())
            if not m:
                raise ValidationError(f"cannot parse group {text!r}")
            if m.group(2) is not None:
                torsion.append(int(m.group(2)))
            else:
                rank += int(m.group(1)) if m.group(1) else 1
        return cls(rank, tuple(torsion))

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, doc: dict) -> "AbelianGroup":
        return cls(int(doc["rank"]), tuple(int(t) for t in doc["torsion"]))
