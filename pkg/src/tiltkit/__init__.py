"""Exact computations with quiver algebras, modules and perfect complexes.

Modules:

* :mod:`tiltkit.algebra` -- quivers with relations, normal-form bases.
* :mod:`tiltkit.modules` -- representations, radicals, socles, traces, resolutions.
* :mod:`tiltkit.complexes` -- perfect complexes, Hom in the homotopy category.
* :mod:`tiltkit.criteria` -- socle/trace conditions on indecomposable projectives.
* :mod:`tiltkit.search` -- exceptional and tilting complexes, endomorphism algebras.
* :mod:`tiltkit.cli` -- the command-line front end.
"""

__version__ = "0.1.0"

from .algebra import (AlgebraBasis, Arrow, Path, PresentationError, Quiver, build_tensor_family, cartan_coxeter,
                      compute_basis, opposite_algebra, parse_algebra, TensorFamilySpec)
from .complexes import (ChainMap, PerfectComplex, cone, euler_pairing, hom_K, is_exceptional, is_indecomposable,
                        iso_K, minimize, stalk, two_term)
from .criteria import check_all_conditions, check_conditions, check_wd_conditions, findim_probe
from .field import Field
from .modules import Module, dual_module, hom_modules, min_resolution, projective, simple, structural_parts, trace
from .search import (SearchBounds, conclusions_report, endo_algebra, enumerate_exceptional, enumerate_tilting,
                     generates, recollement_witness_search)

__all__ = [
    "AlgebraBasis", "Arrow", "ChainMap", "Field", "Module", "Path", "PerfectComplex", "PresentationError", "Quiver",
    "SearchBounds", "TensorFamilySpec", "build_tensor_family", "cartan_coxeter", "check_all_conditions",
    "check_conditions", "check_wd_conditions", "compute_basis", "conclusions_report", "cone", "dual_module",
    "endo_algebra", "enumerate_exceptional", "enumerate_tilting", "euler_pairing", "findim_probe", "generates",
    "hom_K", "hom_modules", "is_exceptional", "is_indecomposable", "iso_K", "min_resolution", "minimize",
    "opposite_algebra", "parse_algebra", "projective", "recollement_witness_search", "simple", "stalk",
    "structural_parts", "trace", "two_term",
]
