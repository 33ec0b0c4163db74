"""Exact computation with finite categories over a base.

Reflections and coreflections into discrete (op)fibrations, the
tensor/complement calculus, ends and coends, Kan extensions, Karoubi
envelopes, and graph-to-evolutive-set reflections.
"""

from .errors import (DepthCapError, DomainError, FibraeError, ParseError,
                     SizeCapError, ValidationFailure)
from .fincat import (FinCategory, FunctorData, OverCategory, arrow_over,
                     build_category, compose_functors, coslice_over,
                     cyclic_group, discrete_category, enumerate_functors,
                     fiber, fiber_arrow, identity_functor, identity_over,
                     idem_monoid, interval, monoid_category, object_over,
                     one, opposite, parallel_pair, poset_category,
                     product_over, quotient_category, slice_over,
                     validate_category, validate_functor, validate_over)
from .setfun import (CONTRA, COV, SetFunctor, bifibration_inverse, complement,
                     constant_setfunctor, corepresentable, elements,
                     exponential_df_dof, is_discrete_fibration,
                     is_discrete_opfibration, nat_transformations,
                     representable, setfunctor_isomorphism,
                     setfunctors_isomorphic, to_copresheaf, to_presheaf,
                     validate_setfunctor)
from .overbase import (ComponentsResult, components, discrete_object,
                       hom_over, over_isomorphism, overs_isomorphic, sections,
                       ten, tensor_product_classical)
from .dinat import (ProfunctorData, check_strong_pullback, coend_classical,
                    constant_profunctor, end, hom_profunctor,
                    mapping_profunctor, product_profunctor, profunctor_over,
                    strong_coend, strong_dinaturals, validate_profunctor)
from .reflect import (CoreflectionResult, ReflectionResult, absolute_colimit,
                      absolute_limit, colimit_in_base, colimit_setfunctor,
                      coreflect_df, coreflect_dof, is_initial_functor,
                      limit_in_base, limit_setfunctor, reflect_df,
                      reflect_dof, verify_coreflection_universal,
                      verify_reflection_universal, weak_absolute_colimit,
                      weak_absolute_limit)
from .kan import (BaseChange, check_frobenius, lan, pullback_along,
                  pushforward, ran, weighted_colimit)
from .karoubi import (Idempotent, classifying_idempotent, fix_of_action,
                      idempotent_copresheaf, idempotent_presheaf, idempotents,
                      is_atom, karoubi_envelope, reflect_idempotent,
                      retract_of_representable, split_idempotent)
from .graphmod import (EvolutivePresentation, FinGraph, GraphMorphism,
                       InfinityReport, TwoSidedPresentation, coreflect_finite,
                       cycle_graph, cycle_spectrum, evolutive_graph,
                       functional_graphs_isomorphic, graph_components,
                       graph_product, integers_presentation,
                       is_graph_fibration, is_graph_opfibration, loop_graph,
                       make_graph, presentations_isomorphic, reflect_bij,
                       reflect_eset, reflect_graph_over_acyclic, reflect_idem,
                       reflect_periodic, two_sided_isomorphic,
                       validate_graph, validate_graph_morphism)

__version__ = "0.1.0"
