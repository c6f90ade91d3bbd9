"""Circle cutting of manifolds with boundary and its inverse, the radial-squared blowup, on explicit local models."""

from .blowup import (
    BlowupLiftInput,
    PolarDiffeoPair,
    blowup_pullback,
    lift_map_radial,
    lift_map_radial_squared,
    polar_correspondence,
    roundtrip_check,
)
from .cutting import (
    DistributionFrame,
    LocalMap,
    compose_maps,
    contact_momentum,
    cut_distribution,
    cut_form,
    cut_map,
    is_contact,
    is_symplectic,
    momentum_check,
    reduced_form,
)
from .forms import DiscForm, HalfForm, boundary_pullback, contract, ext_d, is_basic_invariant, lie_derivative, wedge
from .funcalg import CRational, DiscFunc, HalfFunc, descend_function, lift_function, mono_descends

__version__ = "0.1.0"

__all__ = [
    "BlowupLiftInput", "PolarDiffeoPair", "blowup_pullback", "lift_map_radial", "lift_map_radial_squared",
    "polar_correspondence", "roundtrip_check",
    "DistributionFrame", "LocalMap", "compose_maps", "contact_momentum", "cut_distribution", "cut_form", "cut_map",
    "is_contact", "is_symplectic", "momentum_check", "reduced_form",
    "DiscForm", "HalfForm", "boundary_pullback", "contract", "ext_d", "is_basic_invariant", "lie_derivative", "wedge",
    "CRational", "DiscFunc", "HalfFunc", "descend_function", "lift_function", "mono_descends",
]
