"""Picard-lattice computations for del Pezzo elliptic fibrations of degree at most four."""

from .abelian import FgAbelianGroup, quotient, smith_normal_form
from .catalog import FibrationType, default_catalog, get_type, list_types, load_catalog
from .chambers import apply_matrix, chamber_Ni, flop_image, mori_chambers, x11_deg2_chamber
from .cones import (
    RationalCone,
    cone,
    dual_cone,
    eff_cone,
    extremal_rays,
    mov_cone,
    nef_cone,
    nef_decompose,
)
from .coxcheck import check_homogeneity, load_presentation, parse_polynomial
from .errors import (
    DomainError,
    DpfibError,
    IntegrityError,
    InvalidInputError,
    UnsupportedTypeError,
)
from .graphs import build_graph, to_dot
from .mw import mordell_weil
from .piclattice import CurveClass, DivisorClass, PicardLattice, f_perp_root_type, pairing

__version__ = "0.1.0"

__all__ = [
    "FgAbelianGroup",
    "quotient",
    "smith_normal_form",
    "FibrationType",
    "default_catalog",
    "get_type",
    "list_types",
    "load_catalog",
    "apply_matrix",
    "chamber_Ni",
    "flop_image",
    "mori_chambers",
    "x11_deg2_chamber",
    "RationalCone",
    "cone",
    "dual_cone",
    "eff_cone",
    "extremal_rays",
    "mov_cone",
    "nef_cone",
    "nef_decompose",
    "check_homogeneity",
    "load_presentation",
    "parse_polynomial",
    "DomainError",
    "DpfibError",
    "IntegrityError",
    "InvalidInputError",
    "UnsupportedTypeError",
    "build_graph",
    "to_dot",
    "mordell_weil",
    "CurveClass",
    "DivisorClass",
    "PicardLattice",
    "f_perp_root_type",
    "pairing",
]
