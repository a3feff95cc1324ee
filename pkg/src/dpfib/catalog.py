"""Catalog of del Pezzo elliptic fibration types of degree at most four.

Each entry records the sections and proper prime vertical classes of one
fibration type, the expected Mordell-Weil group, and (for the degree-four
types whose Mori chambers are known) the extremal curve classes of the Mori
cone and the action of the Geiser involution on Pic(X).
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import IO, Iterable, Sequence

from .abelian import FgAbelianGroup, determinant
from .errors import CatalogError, InvalidInputError
from .piclattice import CurveClass, DivisorClass, PicardLattice, fiber_class, pairing

__all__ = [
    "FibrationType",
    "load_catalog",
    "default_catalog",
    "list_types",
    "get_type",
    "parse_key",
    "format_key",
    "catalog_to_json",
]

_FIELDS = {
    "degree",
    "name",
    "variant",
    "dimension_note",
    "sections",
    "verticals",
    "zero_section",
    "finite_mw",
    "expected_mw",
    "mori_curves",
    "involution",
    "note",
}
_REQUIRED = _FIELDS - {"dimension_note", "mori_curves", "involution", "note", "variant"}


@dataclass(frozen=True)
class FibrationType:
    degree: int
    name: str
    variant: str | None
    sections: tuple[DivisorClass, ...]
    verticals: tuple[DivisorClass, ...]
    zero_section: int
    finite_mw: bool
    expected_mw: FgAbelianGroup
    mori_curves: tuple[CurveClass, ...] | None = None
    involution: tuple[tuple[int, ...], ...] | None = None
    dimension_note: int = 3
    note: str | None = field(default=None, compare=False)

    @property
    def key(self) -> tuple[int, str, str | None]:
        return (self.degree, self.name, self.variant)

    @property
    def key_str(self) -> str:
        return format_key(self.key)

    @property
    def lattice(self) -> PicardLattice:
        return PicardLattice(self.degree)

    @property
    def zero(self) -> DivisorClass:
        return self.sections[self.zero_section]

    def exceptional_verticals(self) -> list[tuple[int, int]]:
        """Index pairs (i, j) of the vertical classes of the form Ei - Ej."""
        pairs = []
        for v in self.verticals:
            c = v.coords
            if c[0] != 0:
                continue
            plus = [i for i in range(1, len(c)) if c[i] == 1]
            minus = [i for i in range(1, len(c)) if c[i] == -1]
            if len(plus) == 1 and len(minus) == 1 and sum(map(abs, c)) == 2:
                pairs.append((plus[0], minus[0]))
        return pairs

    def section_indices(self) -> list[int]:
        """Indices i such that Ei is a listed section."""
        out = []
        for s in self.sections:
            c = s.coords
            if c[0] == 0 and sum(map(abs, c)) == 1 and 1 in c[1:]:
                out.append(c.index(1))
        return out

    def to_json(self) -> dict:
        out = {
            "degree": self.degree,
            "name": self.name,
            "variant": self.variant,
            "dimension_note": self.dimension_note,
            "sections": [s.to_json() for s in self.sections],
            "verticals": [v.to_json() for v in self.verticals],
            "zero_section": self.zero_section,
            "finite_mw": self.finite_mw,
            "expected_mw": self.expected_mw.to_json(),
            "mori_curves": None
            if self.mori_curves is None
            else [c.to_json() for c in self.mori_curves],
            "involution": None if self.involution is None else [list(r) for r in self.involution],
        }
        if self.note:
            out["note"] = self.note
        return out


def format_key(key: tuple[int, str, str | None]) -> str:
    degree, name, variant = key
    return f"{degree}:{name}" + (f":{variant}" if variant else "")


def parse_key(text: str) -> tuple[int, str, str | None]:
    """Parse ``"4:X_21:a"`` into ``(4, "X_21", "a")``."""
    parts = text.split(":")
    if len(parts) not in (2, 3) or not parts[0].isdigit() or not parts[1]:
        raise InvalidInputError(f"type key must look like DEGREE:NAME[:VARIANT], got {text!r}")
    return int(parts[0]), parts[1], parts[2] if len(parts) == 3 else None


def _int_vector(value, length: int, what: str) -> tuple[int, ...]:
    if not isinstance(value, list) or any(
        not isinstance(x, int) or isinstance(x, bool) for x in value
    ):
        raise CatalogError(f"{what}: expected a list of integers, got {value!r}")
    if len(value) != length:
        raise CatalogError(f"{what}: expected length {length}, got {len(value)}")
    return tuple(value)


def _build_entry(raw: dict, where: str) -> FibrationType:
    if not isinstance(raw, dict):
        raise CatalogError(f"{where}: entry must be an object")
    unknown = set(raw) - _FIELDS
    if unknown:
        raise CatalogError(f"{where}: unknown fields {sorted(unknown)}")
    missing = _REQUIRED - set(raw)
    if missing:
        raise CatalogError(f"{where}: missing fields {sorted(missing)}")
    degree = raw["degree"]
    if degree not in (1, 2, 3, 4) or isinstance(degree, bool):
        raise CatalogError(f"{where}: degree must be 1..4, got {degree!r}")
    name = raw["name"]
    if not isinstance(name, str) or not name:
        raise CatalogError(f"{where}: name must be a non-empty string")
    variant = raw.get("variant")
    if variant is not None and not isinstance(variant, str):
        raise CatalogError(f"{where}: variant must be a string or null")
    where = f"{where} ({format_key((degree, name, variant))})"
    rank = degree + 1
    lattice = PicardLattice(degree)
    f = fiber_class(lattice)

    if not isinstance(raw["sections"], list) or not isinstance(raw["verticals"], list):
        raise CatalogError(f"{where}: sections and verticals must be lists")
    sections = tuple(
        DivisorClass(_int_vector(s, rank, f"{where} section {k}"))
        for k, s in enumerate(raw["sections"])
    )
    verticals = tuple(
        DivisorClass(_int_vector(v, rank, f"{where} vertical {k}"))
        for k, v in enumerate(raw["verticals"])
    )
    if not sections:
        raise CatalogError(f"{where}: at least one section is required")
    for s in sections:
        q = pairing(lattice, s, f)
        if q != 1:
            raise CatalogError(f"{where}: section {s} has <S,F> = {q}, expected 1")
    for v in verticals:
        q = pairing(lattice, v, f)
        if q != 0:
            raise CatalogError(f"{where}: vertical class {v} has <V,F> = {q}, expected 0")

    zero = raw["zero_section"]
    if not isinstance(zero, int) or isinstance(zero, bool) or not 0 <= zero < len(sections):
        raise CatalogError(f"{where}: zero_section {zero!r} is not an index into sections")

    finite = raw["finite_mw"]
    if not isinstance(finite, bool):
        raise CatalogError(f"{where}: finite_mw must be a boolean")
    try:
        mw = raw["expected_mw"]
        expected = FgAbelianGroup(
            _int_scalar(mw["rank"], where), tuple(_int_scalar(t, where) for t in mw["torsion"])
        )
    except (KeyError, TypeError, InvalidInputError) as exc:
        if isinstance(exc, CatalogError):
            raise
        raise CatalogError(f"{where}: malformed expected_mw: {exc}") from None
    if finite != expected.is_finite:
        raise CatalogError(f"{where}: finite_mw={finite} contradicts expected_mw {expected}")

    mori = raw.get("mori_curves")
    if mori is not None:
        if not isinstance(mori, list):
            raise CatalogError(f"{where}: mori_curves must be a list or null")
        mori = tuple(
            CurveClass(_int_vector(c, rank, f"{where} mori curve {k}")) for k, c in enumerate(mori)
        )
    inv = raw.get("involution")
    if inv is not None:
        if not isinstance(inv, list) or len(inv) != rank:
            raise CatalogError(f"{where}: involution must be a {rank}x{rank} integer matrix")
        inv = tuple(_int_vector(r, rank, f"{where} involution row") for r in inv)
        if abs(determinant(inv)) != 1:
            raise CatalogError(f"{where}: involution matrix is not unimodular")
    dim = raw.get("dimension_note", 3)
    if not isinstance(dim, int) or dim < 3:
        raise CatalogError(f"{where}: dimension_note must be an integer >= 3")
    note = raw.get("note")
    if note is not None and not isinstance(note, str):
        raise CatalogError(f"{where}: note must be a string")

    return FibrationType(
        degree=degree,
        name=name,
        variant=variant,
        sections=sections,
        verticals=verticals,
        zero_section=zero,
        finite_mw=finite,
        expected_mw=expected,
        mori_curves=mori,
        involution=inv,
        dimension_note=dim,
        note=note,
    )


def _int_scalar(x, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise CatalogError(f"{where}: expected an integer, got {x!r}")
    return x


def load_catalog(source: bytes | str | IO) -> list[FibrationType]:
    """Parse and validate a catalog from bytes, text, or a binary/text stream."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("types"), list):
        raise CatalogError('catalog must be an object with a "types" list')
    entries = [_build_entry(raw, f"types[{k}]") for k, raw in enumerate(data["types"])]
    seen = set()
    for e in entries:
        if e.key in seen:
            raise CatalogError(f"duplicate catalog key {e.key_str}")
        seen.add(e.key)
    return entries


def default_catalog_text() -> str:
    return resources.files("dpfib").joinpath("data/catalog.json").read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def _default() -> tuple[FibrationType, ...]:
    return tuple(load_catalog(io.StringIO(default_catalog_text())))


def default_catalog() -> list[FibrationType]:
    """The embedded catalog transcribed from the classification tables."""
    return list(_default())


def _sort_key(t: FibrationType):
    return (t.degree, t.name, t.variant or "")


def list_types(
    catalog: Iterable[FibrationType] | None = None,
    degree: int | None = None,
    finite_mw: bool | None = None,
) -> list[str]:
    """Keys of the matching types, ordered by (degree, name, variant)."""
    if catalog is None:
        catalog = _default()
    picked = [
        t
        for t in catalog
        if (degree is None or t.degree == degree)
        and (finite_mw is None or t.finite_mw == finite_mw)
    ]
    return [t.key_str for t in sorted(picked, key=_sort_key)]


def get_type(key: str | tuple, catalog: Sequence[FibrationType] | None = None) -> FibrationType:
    """Look up a type by key; a missing variant is accepted when unambiguous."""
    if catalog is None:
        catalog = _default()
    degree, name, variant = parse_key(key) if isinstance(key, str) else key
    matches = [t for t in catalog if t.degree == degree and t.name == name]
    if variant is not None:
        matches = [t for t in matches if t.variant == variant]
    if not matches:
        raise InvalidInputError(f"unknown fibration type {format_key((degree, name, variant))}")
    if len(matches) > 1:
        options = ", ".join(t.key_str for t in matches)
        raise InvalidInputError(f"ambiguous type key {degree}:{name}; choose one of {options}")
    return matches[0]


def catalog_to_json(catalog: Iterable[FibrationType]) -> dict:
    return {"types": [t.to_json() for t in catalog]}
