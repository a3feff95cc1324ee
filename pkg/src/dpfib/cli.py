"""Command-line front end.

Exit codes: 0 success, 1 domain error (unsupported type, non-nef class,
failed self-test), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .catalog import FibrationType, default_catalog, get_type, list_types, load_catalog
from .chambers import mori_chambers, x11_to_standard, x11_walk, X11_K_BOUND
from .cones import RationalCone, eff_cone, mov_cone, nef_cone, nef_decompose
from .coxcheck import check_homogeneity, load_presentation
from .errors import DomainError, DpfibError, IntegrityError, InvalidInputError
from .graphs import build_graph, to_dot
from .mw import mordell_weil
from .piclattice import DivisorClass, parse_divisor
from .selftest import CRITERIA, run_selftest

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _global_options(defaults: bool) -> argparse.ArgumentParser:
    # shared so the options work both before and after the verb
    p = argparse.ArgumentParser(add_help=False)
    kw = {} if defaults else {"default": argparse.SUPPRESS}
    p.add_argument("--format", choices=("text", "json"), **({"default": "text"} | kw))
    p.add_argument("--out", metavar="PATH", **({"default": None} | kw))
    p.add_argument("--catalog", metavar="PATH", **({"default": None} | kw))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_options(defaults=False)
    parser = _Parser(
        prog="dpfib",
        description="Lattice computations for del Pezzo elliptic fibrations.",
        parents=[_global_options(defaults=True)],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    types = sub.add_parser("types", help="catalog listing", parents=[common])
    types_sub = types.add_subparsers(dest="action", required=True, parser_class=_Parser)
    tl = types_sub.add_parser("list", help="list type keys", parents=[common])
    tl.add_argument("--degree", type=int, choices=(1, 2, 3, 4))
    tl.add_argument("--finite-mw", action="store_true", help="only finite Mordell-Weil groups")

    p = sub.add_parser("mw", help="Mordell-Weil group", parents=[common])
    p.add_argument("key")
    p.add_argument("--zero-section", type=int, default=None, metavar="INDEX")

    p = sub.add_parser("cone", help="nef, effective or moving cone", parents=[common])
    p.add_argument("kind", choices=("nef", "eff", "mov"))
    p.add_argument("key")

    p = sub.add_parser("decompose", help="write a nef class in terms of H and F_I", parents=[common])
    p.add_argument("key")
    p.add_argument("divisor", help='coordinates "3,-2,-1" or a class such as "3H-2E1-E2"')

    p = sub.add_parser("chambers", help="certified Mori chamber decomposition", parents=[common])
    p.add_argument("key")

    p = sub.add_parser("walk-x11", help="chambers of the degree-2 type X_11", parents=[common])
    p.add_argument("--kmin", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)

    p = sub.add_parser("graph", help="intersection graph of Eff generators", parents=[common])
    p.add_argument("key")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--dot", action="store_true", help="Graphviz output with parallel edges")
    g.add_argument("--weighted", action="store_true", help="Graphviz output with labelled edges")

    p = sub.add_parser("coxcheck", help="homogeneity of a graded presentation", parents=[common])
    p.add_argument("file", help="presentation JSON file or a shipped fixture name")
    p.add_argument("--as-printed", action="store_true")

    sub.add_parser("selftest", help="run the built-in regression checks", parents=[common])
    return parser


# --- formatting helpers -------------------------------------------------------


def to_json_text(data, indent: int = 0) -> str:
    """Indented JSON with lists of scalars kept on one line."""
    pad = "  " * (indent + 1)
    if isinstance(data, dict):
        if not data:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {to_json_text(v, indent + 1)}" for k, v in data.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(data, list) and any(isinstance(x, (dict, list)) for x in data):
        items = [pad + to_json_text(v, indent + 1) for v in data]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(data, ensure_ascii=False)


def _vec(v) -> str:
    return "[" + ", ".join(str(x) for x in v) + "]"


def _cone_text(title: str, c: RationalCone, classes: bool = True) -> list[str]:
    lines = [f"{title}: {len(c.rays)} rays, dimension {c.dim}"]
    lines.append("rays:")
    lines += [f"  {DivisorClass(r) if classes else _vec(r)}" for r in c.rays]
    lines.append("facets:")
    lines += [f"  {_vec(f)}" for f in c.facets]
    if c.lineality:
        lines.append("lineality:")
        lines += [f"  {_vec(v)}" for v in c.lineality]
    if c.equations:
        lines.append("equations:")
        lines += [f"  {_vec(v)}" for v in c.equations]
    return lines


def _subset_name(subset) -> str:
    return "H" if subset is None else "F{" + ",".join(str(i) for i in subset) + "}"


# --- verbs -------------------------------------------------------------------


def _types(args, catalog):
    keys = list_types(catalog, degree=args.degree, finite_mw=True if args.finite_mw else None)
    return {"types": keys}, "\n".join(keys) + ("\n" if keys else "")


def _mw(args, catalog):
    t = get_type(args.key, catalog)
    if args.zero_section is not None and not 0 <= args.zero_section < len(t.sections):
        raise InvalidInputError(
            f"zero section index must be in 0..{len(t.sections) - 1} for {t.key_str}"
        )
    g = mordell_weil(t, args.zero_section)
    data = {"type": t.key_str, "group": g.to_json(), "text": str(g)}
    return data, f"{g}\n"


_CONES = {"nef": nef_cone, "eff": eff_cone, "mov": mov_cone}


def _cone(args, catalog):
    t = get_type(args.key, catalog)
    c = _CONES[args.kind](t)
    data = {"type": t.key_str, "kind": args.kind, "cone": c.to_json()}
    return data, "\n".join(_cone_text(f"{args.kind} cone of {t.key_str}", c)) + "\n"


def _decompose(args, catalog):
    t = get_type(args.key, catalog)
    d = parse_divisor(args.divisor, t.degree)
    terms = nef_decompose(t, d)
    data = {
        "type": t.key_str,
        "divisor": d.to_json(),
        "terms": [
            {
                "subset": None if s is None else list(s),
                "class": c.to_json(),
                "coefficient": k,
            }
            for s, c, k in terms
        ],
    }
    rhs = " + ".join(
        (f"{k}*" if k != 1 else "") + _subset_name(s) for s, _, k in terms
    ) or "0"
    lines = [f"{d} = {rhs}"]
    lines += [f"  {_subset_name(s)} = {c}" for s, c, _ in terms if s is not None]
    return data, "\n".join(lines) + "\n"


def _chambers(args, catalog):
    t = get_type(args.key, catalog)
    dec = mori_chambers(t)
    lines = [f"Mori chambers of {t.key_str}: {len(dec.chambers)}"]
    for name, c in dec.chambers:
        lines.append(f"{name}: " + ", ".join(str(DivisorClass(r)) for r in c.rays))
    cert = dec.certificate
    lines.append(
        f"certificate: {'ok' if cert.ok else 'FAILED'} "
        f"({len(cert.shared_facets)} shared facets, {len(cert.boundary_facets)} boundary facets)"
    )
    for a, b, f in cert.shared_facets:
        lines.append(f"  {a} | {b} across {_vec(f)}")
    return dec.to_json(), "\n".join(lines) + "\n"


def _walk(args, catalog):
    if max(abs(args.kmin), abs(args.kmax)) > X11_K_BOUND:
        raise InvalidInputError(f"|k| must be at most {X11_K_BOUND}")
    if args.kmax - args.kmin > 10_000:
        raise InvalidInputError("at most 10001 chambers per walk")
    steps = x11_walk(args.kmin, args.kmax)
    data = {"basis": ["H-E1-E2", "E2-E1", "E1"], "chambers": [s.to_json() for s in steps]}
    lines = ["basis B = (H-E1-E2, E2-E1, E1)"]
    for s in steps:
        lines.append(f"k={s.k}")
        for name, v in s.images.items():
            lines.append(f"  sigma^k({name}) = {_vec(v)} = {DivisorClass(x11_to_standard(v))}")
        if s.shared_face_with_next is not None:
            face = ", ".join(str(DivisorClass(x11_to_standard(r))) for r in s.shared_face_with_next)
            lines.append(f"  shares with k={s.k + 1}: cone({face})")
    return data, "\n".join(lines) + "\n"


def _graph(args, catalog):
    t = get_type(args.key, catalog)
    g = build_graph(t)
    if args.dot or args.weighted:
        return g.to_json(), to_dot(g, weighted=args.weighted)
    lines = [f"intersection graph of {t.key_str}"]
    for i, (v, q) in enumerate(zip(g.vertices, g.labels)):
        lines.append(f"  v{i} {v} ({q})")
    for i, j, m in g.edges:
        lines.append(f"  v{i} -- v{j} x{m}")
    return g.to_json(), "\n".join(lines) + "\n"


def _coxcheck(args, catalog):
    p = load_presentation(args.file, as_printed=args.as_printed)
    r = check_homogeneity(p)
    return r.to_json(), r.to_text()


def _selftest(args, catalog):
    results = run_selftest(catalog)
    ok = all(r.passed for r in results)
    data = {"passed": ok, "results": [r.to_json() for r in results]}
    lines = []
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        detail = f"  {r.detail}" if r.detail else ""
        lines.append(f"{tag} [{r.criterion}] {CRITERIA[r.criterion]}: {r.name}{detail}")
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return data, "\n".join(lines) + "\n", (EXIT_OK if ok else EXIT_DOMAIN)


_VERBS = {
    "types": _types,
    "mw": _mw,
    "cone": _cone,
    "decompose": _decompose,
    "chambers": _chambers,
    "walk-x11": _walk,
    "graph": _graph,
    "coxcheck": _coxcheck,
    "selftest": _selftest,
}


def _load_catalog(path: str | None) -> list[FibrationType]:
    if path is None:
        return default_catalog()
    try:
        with open(path, "rb") as fh:
            return load_catalog(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read catalog {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None, stdout) -> None:
    if out is None:
        stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    try:
        catalog = _load_catalog(args.catalog)
        result = _VERBS[args.verb](args, catalog)
        data, text, code = result if len(result) == 3 else (*result, EXIT_OK)
        if args.format == "json":
            text = to_json_text(data) + "\n"
        _emit(text, args.out, stdout)
        return code
    except InvalidInputError as exc:
        print(f"dpfib: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (DomainError, IntegrityError, DpfibError) as exc:
        print(f"dpfib: {exc}", file=stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"dpfib: error: {exc}", file=stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
