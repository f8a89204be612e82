"""Petri net synthesis from labelled transition systems, with product and
articulation decomposition."""

from .lts import (Lts, LtsError, LabelOverlap, UnknownState, UnsupportedInput, are_isomorphic,
                  articulate_lts, is_deterministic, is_totally_reachable, parikh, product,
                  reachable, restrict, useful_labels)
from .petri import (PetriNet, NetError, NotEnabled, NotAdequate, ResourceError, StateCapExceeded,
                    Unbounded, articulate_pn, disjoint_sum, enabled, fire, is_dominated, k_bound,
                    reachability_graph, add_complement_places)
from .regions import ESSP, SSP, Region, solve_separation
from .synthesis import (Outcome, SynthesisReport, presynthesis, synthesize, synthesize_adequate,
                        verify)
from .factorization import NotAProduct, factor, gdiam_violations, label_classes, synthesize_factorized
from .articulation import (articul_expression, build_graph, fuse_cycles, refine_partition,
                           synthesize_articulated)
from .decompose import Articulation, Leaf, Product, ambiguous_form, decompose, evaluate, synthesize_mixed
from .formats import FormatError, emit_lts, emit_pn, parse_lts, parse_pn

__version__ = "0.1.0"
