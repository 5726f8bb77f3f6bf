"""morphauto: detect hidden automatic sequences in fixed points of word
morphisms, certify them with explicit uniform representations, and certify
or witness non-automaticity with exact spectral tests and factor-complexity
profiles."""

from .constructions import (
    BlockConstructionError,
    BlockMorphism,
    CriterionNotSatisfied,
    CupParams,
    UniformRepresentation,
    block_morphism,
    cup_transform,
    iso_equivalent,
    minimize_uniform,
    representation_from_spec,
    reshuffle_uniformize,
    verify_back,
)
from .criteria import (
    AnagramCertificate,
    AnalysisReport,
    AnalyzeOptions,
    BlockCertificate,
    Verdict,
    analyze,
    anagram_decomposition,
    eigenvector_criterion,
    gcd_obstruction,
    irrationality_verdict,
)
from .linalg import (
    IncidenceData,
    IntPolynomial,
    RadiusBracket,
    SpectralReport,
    char_poly,
    incidence,
    integer_roots,
    is_primitive,
    left_eigencheck,
    perron_frequencies,
    radius_bracket,
    spectral_report,
)
from .sequences import (
    ComplexityProfile,
    empirical_frequencies,
    factor_complexity,
    prefix_equal,
    sturmian_witness,
)
from .words import (
    Alphabet,
    Coding,
    InternalCheckError,
    MorphParseError,
    MorphicSpec,
    Morphism,
    SpecError,
    Word,
    parikh_vector,
    parse_morphism,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AnagramCertificate",
    "AnalysisReport",
    "AnalyzeOptions",
    "BlockCertificate",
    "BlockConstructionError",
    "BlockMorphism",
    "Coding",
    "ComplexityProfile",
    "CriterionNotSatisfied",
    "CupParams",
    "IncidenceData",
    "IntPolynomial",
    "InternalCheckError",
    "MorphParseError",
    "MorphicSpec",
    "Morphism",
    "RadiusBracket",
    "SpecError",
    "SpectralReport",
    "UniformRepresentation",
    "Verdict",
    "Word",
    "analyze",
    "anagram_decomposition",
    "block_morphism",
    "char_poly",
    "cup_transform",
    "eigenvector_criterion",
    "empirical_frequencies",
    "factor_complexity",
    "gcd_obstruction",
    "incidence",
    "integer_roots",
    "irrationality_verdict",
    "is_primitive",
    "iso_equivalent",
    "left_eigencheck",
    "minimize_uniform",
    "parikh_vector",
    "parse_morphism",
    "perron_frequencies",
    "prefix_equal",
    "radius_bracket",
    "representation_from_spec",
    "reshuffle_uniformize",
    "spectral_report",
    "sturmian_witness",
    "verify_back",
]
