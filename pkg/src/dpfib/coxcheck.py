"""Sparse polynomials over Q and homogeneity checks for graded presentations.

A presentation lists generators with their multidegrees and a set of
relations.  The relations of a graded ring must be homogeneous; the checker
groups the monomials of each relation by multidegree and reports the terms
that leave the dominant degree.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInputError, PolynomialSyntaxError

__all__ = [
    "Polynomial",
    "parse_polynomial",
    "format_polynomial",
    "format_monomial",
    "monomial_degree",
    "GradedPresentation",
    "load_presentation",
    "presentation_from_json",
    "builtin_presentations",
    "check_homogeneity",
    "HomogeneityReport",
    "RelationReport",
]

Exponent = tuple[int, ...]


class Polynomial:
    """Sparse polynomial: exponent vector -> nonzero rational coefficient.

    Terms keep the order in which they first appeared, so reports list
    monomials the way the relation was written.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, Fraction] | None = None):
        self.variables = tuple(variables)
        self.terms: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != len(self.variables):
                raise InvalidInputError("exponent vector does not match the variable list")
            if any(x < 0 for x in e):
                raise InvalidInputError("negative exponent")
            c = Fraction(c)
            if c:
                self.terms[tuple(e)] = c

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Polynomial":
        return cls(variables, {tuple(0 for _ in variables): Fraction(value)})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        idx = list(variables).index(name)
        return cls(variables, {tuple(int(i == idx) for i in range(len(variables))): Fraction(1)})

    def _check(self, other: "Polynomial") -> None:
        if other.variables != self.variables:
            raise InvalidInputError("polynomials over different variable lists")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.variables, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.variables, out)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise InvalidInputError("negative exponent")
        result = Polynomial.constant(self.variables, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)

    def is_zero(self) -> bool:
        return not self.terms

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        return Polynomial([mapping.get(v, v) for v in self.variables], self.terms)


# --- parsing -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "num" and "/" in value and int(value.split("/")[1]) == 0:
            raise PolynomialSyntaxError("zero denominator", start)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        return PolynomialSyntaxError(msg, tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.unary()
        return p

    def unary(self) -> Polynomial:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[:2] == ("op", "-"):
                raise self.error("negative exponent")
            if tok[0] != "num" or "/" in tok[1]:
                raise self.error("exponent must be a non-negative integer literal")
            self.take()
            base = base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, value, _ = tok
        if kind == "num":
            return Polynomial.constant(self.variables, Fraction(value))
        if kind == "id":
            if value not in self.variables:
                raise InvalidInputError(f"unknown variable {value!r} at position {tok[2]}")
            return Polynomial.variable(self.variables, value)
        if (kind, value) == ("op", "("):
            p = self.expr()
            if self.peek()[:2] != ("op", ")"):
                raise self.error("expected ')'")
            self.take()
            return p
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected token {value!r}", tok)


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` over the given variables.

    Grammar: integers, rationals ``a/b``, identifiers, ``+ - * ^`` and
    parentheses.  ``^`` binds tighter than ``*``, which binds tighter than
    ``+``/``-``; unary minus is allowed; exponents are integer literals.
    """
    if len(set(variables)) != len(variables):
        raise InvalidInputError("duplicate variable names")
    return _Parser(text, variables).parse()


def format_monomial(exponents: Exponent, variables: Sequence[str]) -> str:
    parts = []
    for v, k in zip(variables, exponents):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts) if parts else "1"


def _format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for k, (e, c) in enumerate(p.terms.items()):
        mono = format_monomial(e, p.variables)
        mag = abs(c)
        if mono == "1":
            body = _format_coefficient(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coefficient(mag)}*{mono}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def monomial_degree(exponents: Sequence[int], degrees: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Sum of exponent_v * degree_v over the variables."""
    if len(exponents) != len(degrees):
        raise InvalidInputError("exponent vector and degree list differ in length")
    if not degrees:
        return ()
    width = len(degrees[0])
    out = [0] * width
    for k, deg in zip(exponents, degrees):
        for j in range(width):
            out[j] += k * deg[j]
    return tuple(out)


# --- presentations -----------------------------------------------------------


@dataclass(frozen=True)
class GradedPresentation:
    name: str
    variables: tuple[str, ...]
    degrees: tuple[tuple[int, ...], ...]
    relations: tuple[Polynomial, ...]
    relation_texts: tuple[str, ...] = ()
    picard_rank: int | None = None
    as_printed: bool = False
    expected_offenders: tuple[tuple[str, tuple[int, ...]], ...] | None = field(
        default=None, compare=False
    )
    notes: str | None = field(default=None, compare=False)

    @property
    def grading_rank(self) -> int:
        return len(self.degrees[0]) if self.degrees else 0


def presentation_from_json(data: dict, as_printed: bool = False) -> GradedPresentation:
    if not isinstance(data, dict):
        raise InvalidInputError("presentation must be a JSON object")
    for key in ("name", "variables", "degrees", "relations"):
        if key not in data:
            raise InvalidInputError(f"presentation is missing {key!r}")
    variables = tuple(data["variables"])
    if not all(isinstance(v, str) and re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", v) for v in variables):
        raise InvalidInputError("variable names must be identifiers")
    degrees = tuple(tuple(int(x) for x in d) for d in data["degrees"])
    if len(degrees) != len(variables):
        raise InvalidInputError(
            f"{len(variables)} variables but {len(degrees)} degree vectors"
        )
    widths = {len(d) for d in degrees}
    if len(widths) > 1:
        raise InvalidInputError("degree vectors have different lengths")
    rank = data.get("picard_rank")
    if rank is not None and widths and widths != {rank}:
        raise InvalidInputError(
            f"degree vectors have length {widths.pop()} but the Picard rank is {rank}"
        )
    texts = data["relations"]
    expected = None
    if as_printed:
        printed = data.get("as_printed")
        if not printed:
            raise InvalidInputError(f"presentation {data['name']!r} has no as-printed variant")
        texts = printed["relations"]
        if "expected_offenders" in printed:
            expected = tuple(
                (o["monomial"], tuple(o["degree"])) for o in printed["expected_offenders"]
            )
    relations = tuple(parse_polynomial(t, variables) for t in texts)
    return GradedPresentation(
        name=data["name"],
        variables=variables,
        degrees=degrees,
        relations=relations,
        relation_texts=tuple(texts),
        picard_rank=rank,
        as_printed=as_printed,
        expected_offenders=expected,
        notes=data.get("notes"),
    )


def builtin_presentations() -> list[str]:
    """Names of the shipped presentation fixtures."""
    folder = resources.files("dpfib").joinpath("data/cox")
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def load_presentation(source: str | Path | dict, as_printed: bool = False) -> GradedPresentation:
    """Load a presentation from a dict, a JSON file, or a shipped fixture name."""
    if isinstance(source, dict):
        return presentation_from_json(source, as_printed)
    path = Path(source)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    elif str(source) in builtin_presentations():
        text = (
            resources.files("dpfib").joinpath(f"data/cox/{source}.json").read_text(encoding="utf-8")
        )
    else:
        raise InvalidInputError(
            f"no such presentation file or fixture: {source} "
            f"(fixtures: {', '.join(builtin_presentations())})"
        )
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"presentation is not valid JSON: {exc}") from None
    return presentation_from_json(data, as_printed)


# --- homogeneity -------------------------------------------------------------


@dataclass(frozen=True)
class RelationReport:
    index: int
    text: str
    homogeneous: bool
    degree: tuple[int, ...] | None
    groups: tuple[tuple[tuple[int, ...], tuple[str, ...]], ...]
    offenders: tuple[tuple[str, Fraction, tuple[int, ...], tuple[int, ...]], ...]

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "relation": self.text,
            "homogeneous": self.homogeneous,
            "degree": None if self.degree is None else list(self.degree),
            "groups": [
                {"degree": list(d), "monomials": list(ms)} for d, ms in self.groups
            ],
            "offenders": [
                {
                    "monomial": m,
                    "coefficient": _format_coefficient(c),
                    "degree": list(d),
                    "offset": list(o),
                }
                for m, c, d, o in self.offenders
            ],
        }


@dataclass(frozen=True)
class HomogeneityReport:
    name: str
    as_printed: bool
    relations: tuple[RelationReport, ...]

    @property
    def homogeneous(self) -> bool:
        return all(r.homogeneous for r in self.relations)

    def offender_set(self) -> set[tuple[str, tuple[int, ...]]]:
        return {(m, d) for r in self.relations for m, _, d, _ in r.offenders}

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "as_printed": self.as_printed,
            "homogeneous": self.homogeneous,
            "relations": [r.to_json() for r in self.relations],
        }

    def to_text(self) -> str:
        head = f"{self.name}{' (as printed)' if self.as_printed else ''}: "
        lines = [head + ("homogeneous" if self.homogeneous else "NOT homogeneous")]
        for r in self.relations:
            if r.homogeneous:
                deg = "()" if r.degree is None else _fmt_vec(r.degree)
                lines.append(f"  relation {r.index + 1}: homogeneous of multidegree {deg}")
                continue
            lines.append(
                f"  relation {r.index + 1}: inhomogeneous, reference multidegree {_fmt_vec(r.degree)}"
            )
            for d, ms in r.groups:
                mark = "reference" if d == r.degree else "outlier"
                lines.append(f"    {_fmt_vec(d)} [{mark}]: {', '.join(ms)}")
        return "\n".join(lines) + "\n"


def _fmt_vec(v: Iterable[int]) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def check_homogeneity(p: GradedPresentation) -> HomogeneityReport:
    """Group the monomials of each relation by multidegree.

    The reference degree of an inhomogeneous relation is the one carrying the
    most monomials, ties going to the degree of the earliest written monomial.
    The remaining monomials are reported with their offset from it.
    """
    reports = []
    for k, rel in enumerate(p.relations):
        text = p.relation_texts[k] if k < len(p.relation_texts) else format_polynomial(rel)
        by_degree: dict[tuple[int, ...], list[tuple[Exponent, Fraction]]] = {}
        for e, c in rel.terms.items():
            by_degree.setdefault(monomial_degree(e, p.degrees), []).append((e, c))
        groups = tuple(
            (d, tuple(format_monomial(e, p.variables) for e, _ in terms))
            for d, terms in by_degree.items()
        )
        if len(by_degree) <= 1:
            deg = next(iter(by_degree), None)
            reports.append(RelationReport(k, text, True, deg, groups, ()))
            continue
        counts = Counter({d: len(t) for d, t in by_degree.items()})
        best = max(counts.values())
        ref = next(d for d in by_degree if counts[d] == best)
        offenders = tuple(
            (
                format_monomial(e, p.variables),
                c,
                d,
                tuple(a - b for a, b in zip(d, ref)),
            )
            for d, terms in by_degree.items()
            if d != ref
            for e, c in terms
        )
        reports.append(RelationReport(k, text, False, ref, groups, offenders))
    return HomogeneityReport(p.name, p.as_printed, tuple(reports))
