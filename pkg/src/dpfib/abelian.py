"""Smith normal form over the integers and finitely generated abelian groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidInputError

__all__ = ["FgAbelianGroup", "smith_normal_form", "quotient", "determinant", "identity"]

IntMatrix = list[list[int]]


@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^rank + Z/t1 + ... + Z/tk with t1 | t2 | ... and every ti > 1."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        torsion = tuple(self.torsion)
        if self.rank < 0:
            raise InvalidInputError("free rank must be non-negative")
        for t in torsion:
            if t <= 1:
                raise InvalidInputError(f"torsion factors must exceed 1, got {t}")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise InvalidInputError(f"torsion factors must divide each other: {torsion}")
        object.__setattr__(self, "torsion", torsion)

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def order(self) -> int | None:
        if self.rank:
            return None
        n = 1
        for t in self.torsion:
            n *= t
        return n

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        i = 0
        while i < len(self.torsion):
            t = self.torsion[i]
            j = i
            while j < len(self.torsion) and self.torsion[j] == t:
                j += 1
            parts.append(f"Z/{t}" if j - i == 1 else f"(Z/{t})^{j - i}")
            i = j
        return " ⊕ ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> "FgAbelianGroup":
        return cls(int(data["rank"]), tuple(int(t) for t in data.get("torsion", ())))


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _check_matrix(m: Sequence[Sequence[int]]) -> IntMatrix:
    rows = [list(r) for r in m]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise InvalidInputError("matrix rows must have equal length")
    for r in rows:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                raise InvalidInputError(f"matrix entries must be integers, got {x!r}")
    return rows


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = _check_matrix(m)
    n = len(a)
    if any(len(r) != n for r in a):
        raise InvalidInputError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U, V unimodular and D = U M V in Smith form.

    The diagonal of D is non-negative and each entry divides the next.
    """
    a = _check_matrix(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):  # col dst += k * col src
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            rest = [(abs(a[i][t]), i, "r") for i in range(t + 1, rows) if a[i][t]]
            rest += [(abs(a[t][j]), j, "c") for j in range(t + 1, cols) if a[t][j]]
            if rest:
                # a remainder smaller than the pivot survived: it becomes the new pivot
                _, k, kind = min(rest)
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def quotient(ambient_rank: int, generators: Sequence[Sequence[int]]) -> FgAbelianGroup:
    """Z^ambient_rank modulo the subgroup spanned by ``generators``."""
    if ambient_rank < 0:
        raise InvalidInputError("ambient rank must be non-negative")
    gens = [tuple(g) for g in generators]
    for g in gens:
        if len(g) != ambient_rank:
            raise InvalidInputError(
                f"generator {list(g)} has length {len(g)}, expected {ambient_rank}"
            )
    if not gens or ambient_rank == 0:
        return FgAbelianGroup(ambient_rank)
    columns = [[g[i] for g in gens] for i in range(ambient_rank)]
    _, d, _ = smith_normal_form(columns)
    diag = [d[i][i] for i in range(min(ambient_rank, len(gens)))]
    nonzero = [x for x in diag if x]
    return FgAbelianGroup(ambient_rank - len(nonzero), tuple(x for x in nonzero if x > 1))
