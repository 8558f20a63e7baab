"""Difference-based symbolic encoding of trajectories into formal concepts."""

from .analysis import (DiffMatrix, IntentSignature, common_intents, concept_diff, diff_matrix,
                       intent_signature, realizes)
from .core import QualifiedToken, Symbol, Token, collapse, compare_values, compose_tokens
from .encoder import (AttributedInterval, FormalContext, Interval, SampleSeries, breakpoints,
                      context_of, encode, preprocess, union_prune_pass)
from .errors import (CapacityError, DerivationError, DiffConceptsError, InvalidArgumentError,
                     InvalidValueError, ParseError, SchemaError)
from .fca import ConceptLattice, FormalConcept, concepts, derive_extent, derive_intent, lattice
from .sensor import (AttributeSelection, Polyline, derive_series, parse_polyline_json,
                     parse_series_csv, resample_uniform, unwrap_angles)

__version__ = "0.1.0"
