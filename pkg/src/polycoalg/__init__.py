"""Final coalgebras and finite limits for polynomial functors, on finite automata."""

from .automata import (AutMorphism, PAutomaton, QAutomaton, completion_K, completion_K_morphism,
                       extend_by_sink, find_isomorphism, hom_count, hom_enumerate, identity,
                       is_isomorphic, is_morphism, is_morphism_p, is_morphism_q, reflect_L,
                       restrict_to_labeled, validate, validate_p, validate_q)
from .behavior import (LazyTree, StepFunction, behavior, bisimilar, bisimulation_classes,
                       bottom_tree, canonical_form, clause_check, minimize, tree_eq_depth,
                       unfold_tree)
from .delta import (DeltaReport, ExtendedAction, coreflect_D, delta_check, delta_check_words,
                    factoring_check, is_delta)
from .errors import (AutomatonError, BoundExceeded, NonStabilizationError, ParseError,
                     PolyCoalgError, PreconditionError, SignatureError, SignatureMismatch)
from .fixpoint import (KripkeFrame, box, counterexample_check, dia, find_segerberg_counterexample,
                       gfp, lfp, segerberg_sides)
from .limits import LimitResult, equalizer_p, equalizer_q, product_p, product_q, pullback_q
from .signature import (BOT, SINK_SORT, Direction, Label, Signature, full_alphabet,
                        load_signature, make_signature, render_signature)

__version__ = "0.1.0"
