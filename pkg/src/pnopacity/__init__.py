"""Opacity verification for bounded labeled Petri nets.

The pipeline: build the basis reachability graph of a labeled net, derive
its observer and initial-state estimator by subset construction, pair them
into a two-way observer, and scan the pairs for intersections that expose
the secret. A bounded brute-force oracle over the full reachability graph
cross-validates the verdicts.
"""

from .automata import Dfa, observer, reverse, run
from .basis import (
    Brg,
    EdgeOrigin,
    Explanation,
    Secret,
    SecretBasisSplit,
    SecretClosureReport,
    basis_successors,
    build_brg,
    check_secret_closure,
    explanations,
    minimal_explanations,
    secret_basis_partition,
)
from .errors import (
    BoundExceeded,
    CyclicUnobservableSubnet,
    EmptyInitial,
    NoViolation,
    NotEnabled,
    OpacityError,
    ParseError,
    SecretClosureRequired,
    SemanticError,
    UnknownTransition,
)
from .net import (
    LabeledPetriNet,
    Marking,
    PetriNet,
    SubnetView,
    ValidationReport,
    enabled,
    fire,
    fire_sequence,
    format_marking,
    is_acyclic,
    observe,
    parikh,
    unobservable_subnet,
    validate_net,
)
from .netfile import NetDocument, parse_net_document, serialize_net_document, to_system
from .oracle import (
    SecretPartition,
    WordViolation,
    basis_containment_check,
    brute_force_infinite_step,
    brute_force_k_step,
    secret_partition,
)
from .reachability import (
    BoundConfig,
    Edge,
    Lts,
    build_rg,
    consistent_markings,
    language_upto,
    unobservable_reach,
)
from .twoway import (
    OpacityVerdict,
    StateViolation,
    TwObserver,
    TwState,
    WitnessPath,
    build_two_way,
    check_infinite_step,
    check_k_step,
    extract_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
