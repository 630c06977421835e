"""Causal conditional distributions over finite (pre)ordered event sets:
lowerset locales, sheaves of causal sections, empirical models, exact-LP
locality and causal fractions, and quantum instrument diagrams."""

from .errors import (
    CausalSheafError,
    DiagramError,
    EnumerationLimitError,
    FormatError,
    NormalizationError,
    NotCausalError,
    OrderError,
    ScenarioError,
    ScopeError,
    SnapError,
)
from .order import (
    CausalRelationship,
    Preorder,
    chain_order,
    classify,
    closure,
    discrete_order,
    downset,
    enumerate_posets,
    enumerate_preorders,
    indiscrete_order,
    lowersets,
)
from .locale import (
    CausalScenario,
    CoverSet,
    LocaleElement,
    bottom,
    element,
    global_cover,
    is_cover,
    join,
    leq,
    meet,
    singleton_element,
    top,
    varphi,
    varphi_inverse,
)
from .sections import (
    CausalSection,
    Incompatible,
    SectionFactorization,
    assemble,
    count_gluings,
    count_sections,
    enumerate_sections,
    factorize,
    from_table,
    glue,
    is_causal,
    restrict,
)
from .distributions import (
    BOOLEAN,
    NONNEG_RATIONAL,
    RATIONAL,
    SectionDistribution,
    Semiring,
    convex_mix,
    delta,
    marginalize,
)
from .models import (
    CausalityVerdict,
    CompatibleFamily,
    ConditionalDistribution,
    EmpiricalModel,
    FamilyIncompatibleError,
    check_causality,
    check_no_signalling,
    fix_inputs,
    from_compatible_family,
    reduce_to_support,
    restrict_model,
    to_compatible_family,
)
from .analysis import (
    CausalFraction,
    ExactLP,
    LocalityCertificate,
    LPResult,
    causal_fraction,
    is_local,
    lp_solve,
    sweep,
)
from .realize import (
    Diagram,
    Instrument,
    RealizedTable,
    Wire,
    diamond_builtin,
    evaluate,
    evaluate_raw,
    validate,
)

__version__ = "0.1.0"
