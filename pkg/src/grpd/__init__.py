"""Translation groupoids of finite group actions on graphs, with their free and
based path and loop groupoids."""

from .errors import BoundExceeded, ContextMismatch, GrpdError, InvalidStructure, LiftError
from .groups import (FiniteGroup, GroupAction, cyclic_group, direct_product, group_from_permutations,
                     isomorphism, klein_four, make_action, symmetric_group, trivial_action, trivial_group)
from .groupoid import (EquivalenceCertificate, FiniteGroupoid, TranslationGroupoid, are_equivalent,
                       conjugation_groupoid, isotropy, multiplication_groupoid, point_groupoid, skeleton,
                       standard_groupoid, translation_groupoid, unit_groupoid)
from .morphism import (EquivariantMap, NaturalTransformation, StrictMorphism, groupoid_pullback,
                       is_essential_equivalence, natural_transformation_exists, pullback_comparison,
                       translation_pullback)
from .space import (DiscretePath, GraphAction, GridSubdivision, PathSpace, SpaceGraph, constant_path,
                    enumerate_paths, free_path_translation_groupoid, interval_groupoid, orbit_quotient)
from .gpath import (GPath, build_Y_alpha, check_Y_alpha, chi, chi_inverse, chi_witness, colimit_normal_form,
                    gpath_act, gpath_equivalent_direct, induced_map, iso_check, lift_gpath, refine, xi,
                    xi_inverse)
from .loopbase import PathContext, based_groupoid, free_loop_groupoid, omega_via_path_loop, path_loop_morphism
from .homotopy import (check_homotopy, constant_homotopy, contraction_homotopy, equivariant_nt_exists,
                       verify_fibration_lift)
from .instance import Instance, load_corpus, load_instance

__version__ = "0.1.0"
