"""Mori chamber decompositions of moving cones.

The chamber lists for the five degree-4 types with finite Mordell-Weil group
are fixed data; this module builds each chamber and certifies that together
they tile the moving cone.  It also covers the infinite chamber family of
the degree-2 type X_11, where the Mordell-Weil generator acts by a unipotent
matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .abelian import determinant
from .catalog import FibrationType
from .cones import RationalCone, cone, mov_cone, nef_cone
from .errors import DomainError, IntegrityError, InvalidInputError, UnsupportedTypeError
from .piclattice import CurveClass

__all__ = [
    "SIGMA_21",
    "SIGMA_10",
    "CHAMBER_TABLE",
    "ChamberDecomposition",
    "Certificate",
    "chamber_Ni",
    "mori_chambers",
    "certify",
    "flop_image",
    "apply_matrix",
    "X11_BASIS",
    "X11_SIGMA",
    "X11_GRAM",
    "x11_deg2_chamber",
    "x11_closed_form",
    "x11_sigma_power",
    "x11_sigma_images",
    "WalkStep",
    "x11_to_standard",
    "x11_walk",
    "X11_K_BOUND",
]

Matrix = tuple[tuple[int, ...], ...]

# Action on Pic(X) in the basis (H, E1, ..., E4), acting on column vectors.
SIGMA_21: Matrix = (
    (3, 1, 1, 0, 0),
    (-4, -2, -1, 0, 0),
    (-4, -1, -2, 0, 0),
    (0, 0, 0, 0, 1),
    (0, 0, 0, 1, 0),
)
SIGMA_10: Matrix = (
    (3, 1, 1, 0, 0),
    (-4, -1, -2, 0, 0),
    (-4, -2, -1, 0, 0),
    (0, 0, 0, 1, 0),
    (0, 0, 0, 0, 1),
)

# Chamber names per degree-4 type.  "N" is the nef cone, "N<i>" the cone
# N_i, and a "s:" prefix means the image under the catalog involution.
CHAMBER_TABLE: dict[str, tuple[str, ...]] = {
    "X_43": ("N", "N1", "N2", "N3", "N4"),
    "X_22": ("N", "N1", "N2"),
    "X_21": ("N", "N1", "N2", "s:N", "s:N1", "s:N2"),
    "X_11": ("N", "N1"),
    "X_10": ("N", "N1", "s:N", "s:N1"),
}


def _chamber_names(t: FibrationType) -> tuple[str, ...]:
    names = CHAMBER_TABLE.get(t.name) if t.degree == 4 and t.finite_mw else None
    if names is None:
        raise UnsupportedTypeError(
            f"no Mori chamber decomposition is available for {t.key_str}; supported: "
            + ", ".join(f"4:{n}" for n in CHAMBER_TABLE)
        )
    return names


def _matvec(m: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def apply_matrix(m: Sequence[Sequence[int]], c: RationalCone) -> RationalCone:
    """Image of a cone under a unimodular integer matrix acting on columns."""
    n = c.ambient_rank
    if len(m) != n or any(len(r) != n for r in m):
        raise InvalidInputError(f"matrix must be {n}x{n} to act on this cone")
    det = determinant(m)
    if abs(det) != 1:
        raise InvalidInputError(f"matrix is not unimodular (determinant {det})")
    return cone(
        [_matvec(m, r) for r in c.rays], n, lineality=[_matvec(m, l) for l in c.lineality]
    )


def flop_image(gamma: CurveClass, k: int, c: CurveClass) -> CurveClass:
    """Class of the strict transform of gamma after flopping a curve of class c
    that gamma meets with multiplicity k: gamma + k c."""
    if k < 0:
        raise InvalidInputError("flop multiplicity must be non-negative")
    if len(gamma.coords) != len(c.coords):
        raise InvalidInputError("curve classes of different ranks")
    return CurveClass(tuple(a + k * b for a, b in zip(gamma.coords, c.coords)))


def chamber_Ni(t: FibrationType, i: int) -> RationalCone:
    """cone({F_I in Nef : i in I} + {H - 2Ei})."""
    names = _chamber_names(t)
    if f"N{i}" not in names:
        listed = ", ".join(n for n in names if not n.startswith("s:"))
        raise DomainError(f"N_{i} is not a chamber of {t.key_str} (chambers: {listed})")
    rank = t.lattice.rank
    # the nef rays are the F_I; Ei has coefficient -1 exactly when i is in I
    gens = [r for r in nef_cone(t).rays if r[i] == -1]
    h2 = [0] * rank
    h2[0], h2[i] = 1, -2
    gens.append(tuple(h2))
    return cone(gens, rank)


@dataclass(frozen=True)
class Certificate:
    """Evidence that the chambers tile the target cone."""

    contained: bool
    full_dimensional: bool
    overlapping_pairs: tuple[tuple[str, str], ...]
    shared_facets: tuple[tuple[str, str, tuple[int, ...]], ...]
    boundary_facets: tuple[tuple[str, tuple[int, ...]], ...]
    unmatched_facets: tuple[tuple[str, tuple[int, ...]], ...]

    @property
    def ok(self) -> bool:
        return (
            self.contained
            and self.full_dimensional
            and not self.overlapping_pairs
            and not self.unmatched_facets
        )

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "contained": self.contained,
            "full_dimensional": self.full_dimensional,
            "overlapping_pairs": [list(p) for p in self.overlapping_pairs],
            "shared_facets": [
                {"chambers": [a, b], "normal": list(f)} for a, b, f in self.shared_facets
            ],
            "boundary_facets": [{"chamber": a, "normal": list(f)} for a, f in self.boundary_facets],
            "unmatched_facets": [
                {"chamber": a, "normal": list(f)} for a, f in self.unmatched_facets
            ],
        }


def certify(chambers: Sequence[tuple[str, RationalCone]], target: RationalCone) -> Certificate:
    """Check that full-dimensional, interior-disjoint chambers inside a convex
    target cover it, by matching every chamber facet either with a facet of
    the target or with the opposite facet of exactly one other chamber."""
    n = target.ambient_rank
    contained = all(target.contains_cone(c) for _, c in chambers)
    full = target.is_full_dimensional and all(c.is_full_dimensional for _, c in chambers)
    overlaps = []
    for a in range(len(chambers)):
        for b in range(a + 1, len(chambers)):
            if chambers[a][1].intersection(chambers[b][1]).dim == n:
                overlaps.append((chambers[a][0], chambers[b][0]))
    shared, boundary, unmatched = [], [], []
    target_facets = set(target.facets)
    for name, c in chambers:
        for f in c.facets:
            if f in target_facets:
                boundary.append((name, f))
                continue
            opposite = tuple(-x for x in f)
            face = set(c.facet_rays(f))
            mates = [
                other
                for other, d in chambers
                if other != name and opposite in d.facets and set(d.facet_rays(opposite)) == face
            ]
            if len(mates) != 1:
                unmatched.append((name, f))
            elif name < mates[0]:
                shared.append((name, mates[0], f))
    return Certificate(
        contained, full, tuple(overlaps), tuple(shared), tuple(boundary), tuple(unmatched)
    )


@dataclass(frozen=True)
class ChamberDecomposition:
    type_key: str
    chambers: tuple[tuple[str, RationalCone], ...]
    cover_target: RationalCone
    certificate: Certificate = field(compare=False)

    def chamber(self, name: str) -> RationalCone:
        for n, c in self.chambers:
            if n == name:
                return c
        raise InvalidInputError(f"no chamber named {name!r}")

    def to_json(self) -> dict:
        return {
            "type": self.type_key,
            "chambers": [{"name": n, "cone": c.to_json()} for n, c in self.chambers],
            "cover_target": self.cover_target.to_json(),
            "certificate": self.certificate.to_json(),
        }


def _build(t: FibrationType, name: str) -> RationalCone:
    base = name[2:] if name.startswith("s:") else name
    c = nef_cone(t) if base == "N" else chamber_Ni(t, int(base[1:]))
    if name.startswith("s:"):
        if t.involution is None:
            raise IntegrityError(f"{t.key_str} needs an involution matrix in the catalog")
        c = apply_matrix(t.involution, c)
    return c


def mori_chambers(t: FibrationType, verify: bool = True) -> ChamberDecomposition:
    """Build the listed chambers of Mov(X) and certify the decomposition."""
    names = _chamber_names(t)
    target = mov_cone(t)
    chambers = tuple((n, _build(t, n)) for n in names)
    cert = certify(chambers, target)
    if verify and not cert.ok:
        raise IntegrityError(
            f"chamber certificate failed for {t.key_str}: " f"{cert.to_json()}"
        )
    return ChamberDecomposition(t.key_str, chambers, target, cert)


# --- degree-2 X_11: the infinite family sigma^k(Nef) ------------------------

# Basis (H - E1 - E2, E2 - E1, E1), columns in (H, E1, E2) coordinates.
X11_BASIS: Matrix = ((1, 0, 0), (-1, -1, 1), (-1, 1, 0))
X11_SIGMA: Matrix = ((1, 2, 0), (0, 1, 1), (0, 0, 1))
X11_SIGMA_INV: Matrix = ((1, -2, 2), (0, 1, -1), (0, 0, 1))
X11_GRAM: Matrix = ((0, 0, 1), (0, -2, 1), (1, 1, -1))
# F, H - E1, H - E2, H in basis B
X11_NEF_RAYS: Matrix = ((1, 0, 0), (1, 1, 1), (1, 0, 1), (1, 1, 2))
X11_K_BOUND = 10**6


def _matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a))
    )


def x11_sigma_power(k: int) -> Matrix:
    """sigma^k in basis B by repeated squaring (k may be negative)."""
    if abs(k) > X11_K_BOUND:
        raise InvalidInputError(f"|k| must be at most {X11_K_BOUND}")
    base = X11_SIGMA if k >= 0 else X11_SIGMA_INV
    result: Matrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    e = abs(k)
    while e:
        if e & 1:
            result = _matmul(result, base)
        base = _matmul(base, base)
        e >>= 1
    return result


def x11_sigma_images(k: int) -> dict[str, tuple[int, ...]]:
    """sigma^k of F, H - E1, H - E2 and H, in basis B."""
    s = x11_sigma_power(k)
    names = ("F", "H-E1", "H-E2", "H")
    return {n: _matvec(s, r) for n, r in zip(names, X11_NEF_RAYS)}


def x11_deg2_chamber(k: int) -> RationalCone:
    """sigma^k(Nef(X)) in basis B."""
    return cone(list(x11_sigma_images(k).values()), 3)


def x11_closed_form(k: int) -> tuple[tuple[int, ...], ...]:
    """Columns of sigma^k(Nef) as explicit quadratic polynomials in k."""
    return (
        (1, 0, 0),
        (k * k + k + 1, k + 1, 1),
        (k * k - k + 1, k, 1),
        (2 * k * k + 1, 2 * k + 1, 2),
    )


def x11_to_standard(v: Sequence[int]) -> tuple[int, ...]:
    """Convert basis-B coordinates to (H, E1, E2) coordinates."""
    return _matvec(X11_BASIS, v)


@dataclass(frozen=True)
class WalkStep:
    k: int
    chamber: RationalCone
    images: dict
    shared_face_with_next: tuple[tuple[int, ...], ...] | None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "rays": [list(r) for r in self.chamber.rays],
            "rays_standard": [list(x11_to_standard(r)) for r in self.chamber.rays],
            "images": {n: list(v) for n, v in self.images.items()},
            "shared_face_with_next": None
            if self.shared_face_with_next is None
            else [list(r) for r in self.shared_face_with_next],
        }


def _shared_face(a: RationalCone, b: RationalCone) -> tuple[tuple[int, ...], ...]:
    return a.intersection(b).rays


def x11_walk(kmin: int, kmax: int) -> list[WalkStep]:
    """Chambers sigma^k(Nef) for kmin <= k <= kmax with the faces shared by
    consecutive chambers."""
    if kmin > kmax:
        raise InvalidInputError("kmin must not exceed kmax")
    steps = []
    cones = {k: x11_deg2_chamber(k) for k in range(kmin, kmax + 1)}
    for k in range(kmin, kmax + 1):
        shared = _shared_face(cones[k], cones[k + 1]) if k < kmax else None
        steps.append(WalkStep(k, cones[k], x11_sigma_images(k), shared))
    return steps

