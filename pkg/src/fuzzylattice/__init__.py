"""fuzzylattice: lattice-based fuzzy expert-system engine.

A knowledge base is compiled from a fuzzy information system into the power
set lattice of its attributes, each node carrying the elementary sets of the
indiscernibility relation and the reliability-resolved production rules
derived from them. Consultations run phase by phase: fuzzify crisp inputs,
fire matching rules (Mamdani), defuzzify per disease by centroid of area,
and refine the probable-disease list.
"""

from importlib import resources
from pathlib import Path

from .errors import (
    CapacityExceededError,
    EmptySystemError,
    FuzzyLatticeError,
    InconsistentKnowledgeError,
    InvalidAxesError,
    KBFormatError,
    MissingInputError,
    NoActivationError,
    NoInputsError,
    OutOfUniverseError,
    PatientFileError,
    PhaseOrderError,
    UnknownAttributeError,
    UnknownDiseaseError,
    UnknownPhaseError,
    UnknownTermError,
)
from .fuzzy import (
    AggregatedOutput,
    LinguisticTerm,
    LinguisticVariable,
    TermActivation,
    TriangularMF,
    clip_and_aggregate,
    defuzz_centroid,
    firing_strength,
    fuzzify,
    label_crisp,
    term_from_range,
    tri_membership,
)
from .inference import (
    ConsultationReport,
    DiseaseAssessment,
    ExplanationRow,
    PhaseResult,
    ProbableDisease,
    RuleActivation,
    STRICT_LEVEL,
    SUBSET_CLOSURE,
    SurfaceGrid,
    explain,
    infer_phase,
    refine_list,
    run_consultation,
    select_rules,
    surface_grid,
)
from .kb import (
    AttributeSubset,
    CompiledKB,
    Conflict,
    ConflictPolicy,
    ConflictReport,
    ElementarySet,
    InfoRow,
    InformationSystem,
    KBStats,
    Lattice,
    LatticeNode,
    PhaseSpec,
    Rule,
    build_lattice,
    compile_kb,
    dump_compiled,
    equivalence_classes,
    generate_rules,
    indiscernible,
    load_compiled,
    load_information_system,
    load_kb,
    parse_information_system,
    save_compiled,
)

__version__ = "0.1.0"


def bundled_kb_path() -> Path:
    """Filesystem path of the bundled low-back-pain reference KB."""
    return Path(resources.files("fuzzylattice").joinpath("assets/lowback.yaml"))


def load_bundled_kb() -> CompiledKB:
    """Parse and compile the bundled reference knowledge base."""
    return load_kb(bundled_kb_path())
