"""Picard lattice of a degree-d del Pezzo elliptic variety.

Divisor classes are written in the basis ``(H, E1, ..., Ed)`` and curve
classes in the dual basis ``(h, e1, ..., ed)``.  The bilinear form on
divisors is ``diag(d, -1, ..., -1)``; divisors pair with curves through
``diag(1, -1, ..., -1)`` so that ``H.h = 1`` and ``Ei.ej = -delta_ij`` reads
as ``(aH - sum mi Ei) . ei = mi``.

Everything here is exact integer arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import InvalidInputError

__all__ = [
    "PicardLattice",
    "DivisorClass",
    "CurveClass",
    "RootLatticeType",
    "pairing",
    "div_curve_pairing",
    "fiber_class",
    "f_subset_class",
    "f_perp_root_type",
    "inertia",
    "parse_divisor",
    "parse_curve",
]

Vector = Sequence[int]


@dataclass(frozen=True)
class _ClassVector:
    coords: tuple[int, ...]

    _symbols = ("H", "E")

    def __post_init__(self):
        coords = tuple(self.coords)
        if not coords:
            raise InvalidInputError("class vector must have at least one coordinate")
        for c in coords:
            if not isinstance(c, int) or isinstance(c, bool):
                raise InvalidInputError(f"class coordinates must be integers, got {c!r}")
        object.__setattr__(self, "coords", coords)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if other.rank != self.rank:
            raise InvalidInputError(f"rank mismatch: {self.rank} vs {other.rank}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return type(self)(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return type(self)(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return type(self)(tuple(-a for a in self.coords))

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return type(self)(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_class(self.coords, *self._symbols)

    def to_json(self) -> list[int]:
        return list(self.coords)


class DivisorClass(_ClassVector):
    """Integer divisor class in the basis (H, E1, ..., Ed)."""

    _symbols = ("H", "E")


class CurveClass(_ClassVector):
    """Integer curve class in the basis (h, e1, ..., ed)."""

    _symbols = ("h", "e")


def format_class(coords: Sequence[int], h: str = "H", e: str = "E") -> str:
    """Render ``(2, -4, 0)`` as ``2H-4E1``; the zero vector renders as ``0``."""
    parts = []
    for i, c in enumerate(coords):
        if c == 0:
            continue
        sym = h if i == 0 else f"{e}{i}"
        mag = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append((sign, mag + sym))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


_TERM_RE = re.compile(r"\s*([+-]?)\s*(\d*)\s*([A-Za-z])(\d*)\s*")


def _parse_class(text: str, degree: int, h: str, e: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "0"):
        return (0,) * (degree + 1)
    if re.fullmatch(r"\[?\s*-?\d+(\s*,\s*-?\d+)*\s*\]?", text):
        coords = tuple(int(x) for x in re.findall(r"-?\d+", text))
        if len(coords) != degree + 1:
            raise InvalidInputError(
                f"expected {degree + 1} coordinates for degree {degree}, got {len(coords)}"
            )
        return coords
    coords = [0] * (degree + 1)
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise InvalidInputError(f"cannot parse class {text!r} at position {pos}")
        sign, mag, sym, idx = m.groups()
        if pos > 0 and not sign:
            raise InvalidInputError(f"missing operator in {text!r} at position {pos}")
        k = int(mag) if mag else 1
        if sign == "-":
            k = -k
        if sym == h and not idx:
            coords[0] += k
        elif sym == e and idx:
            i = int(idx)
            if not 1 <= i <= degree:
                raise InvalidInputError(f"index {i} out of range 1..{degree} in {text!r}")
            coords[i] += k
        else:
            raise InvalidInputError(f"unknown symbol {sym}{idx} in {text!r}")
        pos = m.end()
    return tuple(coords)


def parse_divisor(text: str, degree: int) -> DivisorClass:
    """Parse ``"2H-4E1"`` or ``"2,-4,0"`` into a divisor class."""
    return DivisorClass(_parse_class(text, degree, "H", "E"))


def parse_curve(text: str, degree: int) -> CurveClass:
    """Parse ``"2h-e1-e2"`` or ``"2,-1,-1"`` into a curve class."""
    return CurveClass(_parse_class(text, degree, "h", "e"))


@dataclass(frozen=True)
class PicardLattice:
    """Pic(X) = <H, E1, ..., Ed> with the form F^(n-2).A.B."""

    degree: int

    def __post_init__(self):
        if self.degree not in (1, 2, 3, 4):
            raise InvalidInputError(f"degree must be in 1..4, got {self.degree}")

    @property
    def rank(self) -> int:
        return self.degree + 1

    @property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        return _diag((self.degree,) + (-1,) * self.degree)

    @property
    def curve_pairing(self) -> tuple[tuple[int, ...], ...]:
        return _diag((1,) + (-1,) * self.degree)

    @property
    def H(self) -> DivisorClass:
        return DivisorClass((1,) + (0,) * self.degree)

    def E(self, i: int) -> DivisorClass:
        if not 1 <= i <= self.degree:
            raise InvalidInputError(f"E{i} does not exist in degree {self.degree}")
        v = [0] * self.rank
        v[i] = 1
        return DivisorClass(tuple(v))

    @property
    def F(self) -> DivisorClass:
        return fiber_class(self)

    def divisor(self, text: str) -> DivisorClass:
        return parse_divisor(text, self.degree)

    def curve(self, text: str) -> CurveClass:
        return parse_curve(text, self.degree)


def _diag(entries: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def _coords(x, rank: int) -> tuple[int, ...]:
    coords = tuple(x.coords if isinstance(x, _ClassVector) else x)
    if len(coords) != rank:
        raise InvalidInputError(f"expected a vector of length {rank}, got {len(coords)}")
    return coords


def bilinear(matrix: Sequence[Sequence[int]], a: Vector, b: Vector) -> int:
    """Return a^T M b."""
    return sum(a[i] * sum(row[j] * b[j] for j in range(len(b))) for i, row in enumerate(matrix))


def pairing(lattice: PicardLattice, a, b) -> int:
    """<A, B> = A^T diag(d, -1, ..., -1) B."""
    if isinstance(a, CurveClass) or isinstance(b, CurveClass):
        raise InvalidInputError("pairing takes two divisor classes; use div_curve_pairing")
    a = _coords(a, lattice.rank)
    b = _coords(b, lattice.rank)
    return lattice.degree * a[0] * b[0] - sum(x * y for x, y in zip(a[1:], b[1:]))


def div_curve_pairing(lattice: PicardLattice, divisor, curve) -> int:
    """D . C = D^T diag(1, -1, ..., -1) C."""
    if isinstance(divisor, CurveClass) or isinstance(curve, DivisorClass):
        raise InvalidInputError("div_curve_pairing takes (divisor, curve) in that order")
    d = _coords(divisor, lattice.rank)
    c = _coords(curve, lattice.rank)
    return d[0] * c[0] - sum(x * y for x, y in zip(d[1:], c[1:]))


def fiber_class(lattice: PicardLattice) -> DivisorClass:
    """F = H - E1 - ... - Ed."""
    return DivisorClass((1,) + (-1,) * lattice.degree)


def f_subset_class(lattice: PicardLattice, subset: Iterable[int]) -> DivisorClass:
    """F_I = H - sum_{i in I} Ei."""
    v = [1] + [0] * lattice.degree
    for i in set(subset):
        if not 1 <= i <= lattice.degree:
            raise InvalidInputError(f"index {i} out of range 1..{lattice.degree}")
        v[i] = -1
    return DivisorClass(tuple(v))


def inertia(gram: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """Return (positive, negative, zero) eigenvalue counts of a symmetric matrix.

    Exact symmetric Gaussian elimination over the rationals (Sylvester's law
    of inertia); no eigenvalues are computed.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    for row in a:
        if len(row) != n:
            raise InvalidInputError("Gram matrix must be square")
    for i in range(n):
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise InvalidInputError("Gram matrix must be symmetric")
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and a[i][j] != 0), None
            )
            if pair is None:
                break
            # a[i][i] == a[j][j] == 0 but a[i][j] != 0: row/col i += row/col j
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = a[i][piv] / p
            if f:
                for k in range(n):
                    a[i][k] -= f * a[piv][k]
        for i in active:
            a[piv][i] = a[i][piv] = Fraction(0)
    return pos, neg, n - pos - neg


class RootLatticeType(NamedTuple):
    """Classification of the sublattice F^perp for r blown-up points.

    ``basis``/``gram`` are the spanning classes E1-E2, ..., E(r-1)-Er (plus
    F when r = d) and their Gram matrix.  ``simple_roots``/``cartan_gram``
    give a simple-root basis whose Gram matrix is minus the Cartan matrix of
    ``label``; for the affine case that is alpha0 = F - E1 + Ed together with
    E1-E2, ..., E(d-1)-Ed.
    """

    label: str
    basis: tuple[DivisorClass, ...]
    gram: tuple[tuple[int, ...], ...]
    simple_roots: tuple[DivisorClass, ...]
    cartan_gram: tuple[tuple[int, ...], ...]
    radical: tuple[DivisorClass, ...]


def _gram_of(lattice: PicardLattice, classes: Sequence[DivisorClass]):
    return tuple(tuple(pairing(lattice, a, b) for b in classes) for a in classes)


def cartan_matrix(label: str) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix of A_k (``"A3"``) or affine A~_k (``"A~3"``)."""
    m = re.fullmatch(r"A(~?)(\d+)", label)
    if not m:
        raise InvalidInputError(f"unsupported root lattice label {label!r}")
    affine, k = bool(m.group(1)), int(m.group(2))
    n = k + 1 if affine else k
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
        if i + 1 < n:
            c[i][i + 1] -= 1
            c[i + 1][i] -= 1
    if affine:
        if k == 1:
            c = [[2, -2], [-2, 2]]
        elif k > 1:
            c[0][n - 1] -= 1
            c[n - 1][0] -= 1
    return tuple(tuple(row) for row in c)


def f_perp_root_type(lattice: PicardLattice, r: int) -> RootLatticeType:
    """Classify F^perp when F = H - E1 - ... - Er is formed from r points."""
    d = lattice.degree
    if not isinstance(r, int) or not 1 < r <= d:
        raise InvalidInputError(f"r must satisfy 1 < r <= {d}, got {r!r}")
    roots = [lattice.E(i) - lattice.E(i + 1) for i in range(1, r)]
    f_r = f_subset_class(lattice, range(1, r + 1))
    basis = roots + ([f_r] if r == d else [])
    gram = _gram_of(lattice, basis)
    pos, neg, zero = inertia(gram)
    if pos:
        raise AssertionError("F^perp is never indefinite")  # excluded by Hodge index
    if zero == 0:
        label = f"A{r - 1}"
        simple = tuple(roots)
        radical: tuple[DivisorClass, ...] = ()
    elif zero == 1:
        label = f"A~{d - 1}"
        alpha0 = f_r - lattice.E(1) + lattice.E(d)
        simple = (alpha0, *roots)
        radical = (f_r,)
    else:
        raise AssertionError(f"unexpected radical of dimension {zero}")
    return RootLatticeType(
        label=label,
        basis=tuple(basis),
        gram=gram,
        simple_roots=simple,
        cartan_gram=_gram_of(lattice, simple),
        radical=radical,
    )
