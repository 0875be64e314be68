"""freevol: free-group splittings, Dehn twists, and volume-based certificates."""

from freevol.errors import (
    BasisMismatch,
    EmptyWord,
    FreevolError,
    HypothesisViolated,
    InvalidSplitting,
    NotAnAutomorphism,
    NotFillingEvidence,
    NotProperSubgroup,
    NotReduced,
    TieDetected,
    TrivialSubgroup,
    UsageError,
)
from freevol.filling import FillingCertificate, check_f1_for, check_f2, check_f3, check_filling
from freevol.pingpong import (
    IwipCertificate,
    PingPongConfig,
    TwistWord,
    certify,
    configure,
    empirical_no_periodic_orbit,
    parse_twist_word,
    realize,
)
from freevol.splittings import (
    AMALGAM,
    HNN,
    CyclicSplitting,
    MarkedPair,
    dehn_twist,
    transform,
    validate,
    vertex_groups,
)
from freevol.stallings import (
    LabeledGraph,
    contains,
    is_malnormal,
    isomorphic,
    pullback,
    subgroup_graph,
)
from freevol.twisting import (
    TwistConstants,
    bcc,
    bcc_between,
    check_volume_growth_bounds,
    constants,
    graph_composition,
    graph_surgery,
    piece_bound,
)
from freevol.volume import analyze, bilipschitz_sample, free_volume, translation_length
from freevol.words import (
    Automorphism,
    Basis,
    CyclicWord,
    apply,
    apply_cyclic,
    compose,
    invert,
    parse_word,
    power,
    render_word,
)

__version__ = "0.1.0"

__all__ = [
    "AMALGAM",
    "Automorphism",
    "Basis",
    "BasisMismatch",
    "CyclicSplitting",
    "CyclicWord",
    "EmptyWord",
    "FillingCertificate",
    "FreevolError",
    "HNN",
    "HypothesisViolated",
    "InvalidSplitting",
    "IwipCertificate",
    "LabeledGraph",
    "MarkedPair",
    "NotAnAutomorphism",
    "NotFillingEvidence",
    "NotProperSubgroup",
    "NotReduced",
    "PingPongConfig",
    "TieDetected",
    "TrivialSubgroup",
    "TwistConstants",
    "TwistWord",
    "UsageError",
    "analyze",
    "apply",
    "apply_cyclic",
    "bcc",
    "bcc_between",
    "bilipschitz_sample",
    "certify",
    "check_f1_for",
    "check_f2",
    "check_f3",
    "check_filling",
    "check_volume_growth_bounds",
    "compose",
    "configure",
    "constants",
    "contains",
    "dehn_twist",
    "empirical_no_periodic_orbit",
    "free_volume",
    "graph_composition",
    "graph_surgery",
    "invert",
    "is_malnormal",
    "isomorphic",
    "parse_twist_word",
    "parse_word",
    "piece_bound",
    "power",
    "pullback",
    "realize",
    "render_word",
    "subgroup_graph",
    "transform",
    "translation_length",
    "validate",
    "vertex_groups",
]
