"""Stable graphs, universal posets of flows, and r-th roots of divisors on
tropical curves together with the cone complexes that parametrize them."""

from .abelian import (CoefficientGroup, GroupElement, Homomorphism, QuotientMap, Z, Zmod, divide_by,
                      gcd_shifted, induced_quotient_hom, is_mult_injective, quotient_mod_r, torsion_root)
from .cone_complex import (ComplexPoint, ConeComplex, ExtendedPoint, StructureMap, build_moduli_complex,
                           build_root_complex, classify_pair, coefficient_change_map, forgetful_fiber,
                           forgetful_point, inclusion_map, point_to_pair, power_map)
from .enumeration import GraphPoset, build_graph_poset, enumerate_stable_graphs
from .exceptions import ConsistencyError, NoSolutionError
from .flow_poset import (FlowPoset, FlowPosetElement, build_flow_poset, canonical_flow,
                         coefficient_change_poset, poset_fiber_over_graph)
from .flows import (Flow, GraphDivisor, RamificationSequence, act_on_divisor, act_on_flow, div_of_flow,
                    enumerate_flow_fiber, flow_from_divisor, h1_generators, kirchhoff_flows, lift_flow,
                    pushforward_flow, ramification_divisor)
from .graphs import (Graph, GraphAutomorphism, Isomorphism, Specialization, automorphism_group,
                     canonical_form, contract, is_isomorphic, subdivide)
from .roots import RootClass, RootInstance, delta_divisor, enumerate_roots, phi_flow, verify_root_bijection
from .tropical import (CurvePoint, Model, RationalFn, TropicalCurve, TropicalDivisor, common_model,
                       equivalent, four_point_divisor, is_principal, principal_segment_divisor,
                       ramification_divisor_on_curve, unit_laplacian_model)

__version__ = "0.1.0"
