"""Exact computation of Terwilliger algebras of group association schemes."""

from .catalog import CATALOG_SPECS, from_spec
from .classify import cross_check, predicted_almost_commutative
from .groups import FiniteGroup, conjugacy_classes
from .scheme import GroupScheme, build_scheme, is_almost_commutative
from .terwilliger import WedderburnReport, terwilliger_basis, wedderburn_report

__version__ = "0.1.0"

__all__ = [
    "CATALOG_SPECS",
    "FiniteGroup",
    "GroupScheme",
    "WedderburnReport",
    "build_scheme",
    "conjugacy_classes",
    "cross_check",
    "from_spec",
    "is_almost_commutative",
    "predicted_almost_commutative",
    "terwilliger_basis",
    "wedderburn_report",
]
