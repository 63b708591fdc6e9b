"""Relative Weyl groups of cuspidal Levi subgroups and the morphism phi.

Exact integer lattice arithmetic throughout; ``sln_oracle`` is an
independent matrix model of SL_n used to cross-check the type A values.
"""

from .companion import (ChiSystem, CompanionError, ExponentSystem, chi_characters,
                        companion_equations, component_count, free_rank, phi_base_sign,
                        torus_splitting)
from .frobenius import (Q_CAVEAT, ClassLabel, FrobeniusAction, FrobeniusError, H1Group,
                        TwistDatum, char_coefficient, h1, h1_map, minimal_levi,
                        res_label_map, restrict_via, restriction_label,
                        twisted_centralizer_order, twists_of)
from .lattice_core import (AbelianElement, AbelianHom, FiniteAbelianGroup, LatticeError,
                           smith_normal_form)
from .phi import (GammaCharacter, LinearCharacter, PhiError, PhiMorphism, TableRow,
                  compatibility_holds, gamma_character, phi_compute, phi_type_A, rho_bar,
                  table_generate)
from .root_datum import (CartanType, RootDatum, RootDatumError, build_simply_connected,
                         center_component_group, h_map, is_cuspidal, is_self_opposed)
from .weyl import (RelativeWeylGroup, WeylElement, WeylError, coxeter_element,
                   coxeter_partition, from_word, relative_type, relative_weyl_group)

__version__ = "0.1.0"

__all__ = [
    "AbelianElement", "AbelianHom", "CartanType", "ChiSystem", "ClassLabel", "CompanionError",
    "ExponentSystem", "FiniteAbelianGroup", "FrobeniusAction", "FrobeniusError",
    "GammaCharacter", "H1Group", "LatticeError", "LinearCharacter", "PhiError", "PhiMorphism",
    "Q_CAVEAT", "RelativeWeylGroup", "RootDatum", "RootDatumError", "TableRow", "TwistDatum",
    "WeylElement", "WeylError", "build_simply_connected", "center_component_group",
    "char_coefficient", "chi_characters", "companion_equations", "compatibility_holds",
    "component_count", "coxeter_element", "coxeter_partition", "free_rank", "from_word",
    "gamma_character", "h1", "h1_map", "h_map", "is_cuspidal", "is_self_opposed",
    "minimal_levi", "phi_base_sign", "phi_compute", "phi_type_A", "relative_type",
    "relative_weyl_group", "res_label_map", "restrict_via", "restriction_label", "rho_bar",
    "smith_normal_form", "table_generate", "torus_splitting", "twisted_centralizer_order",
    "twists_of",
]
