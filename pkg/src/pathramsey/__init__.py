"""Desk-scale toolkit for size-Ramsey experiments on powers of paths.

Exposes immutable graphs with power/blow-up constructors, a pseudorandom
class generator and verifier, two-colour cover and long-path engines, a
brute-force arrow oracle, and validated embedding machinery, all tied
together by an induction-step pipeline and CLI.
"""

from .colouring import (
    ArrowVerdict,
    AuxColouring,
    EdgeColouring,
    KstReport,
    arrow_check,
    blue_path_to_blue_power,
    build_aux_colouring,
    find_blue_biclique,
    find_subgraph,
    kst_bound_check,
    mono_clique_in_clique,
)
from .embedding import (
    ConstantsChain,
    Embedding,
    EmbeddingReport,
    LLLInstance,
    TemplateResult,
    check_template_containment,
    constants_chain,
    embed_base_case,
    lll_embed,
    make_lll_instance,
    validate_embedding,
)
from .errors import (
    BaseCaseError,
    BudgetExceededError,
    CertificationError,
    ConstructionError,
    GraphFormatError,
    LLLFailureError,
    NoCoverFoundError,
    NoPathFoundError,
    ParameterError,
    ParameterInfeasibleError,
    PathRamseyError,
    PreconditionError,
)
from .graphs import (
    BlowupMap,
    Graph,
    PathWitness,
    complete_bipartite,
    complete_blowup,
    complete_graph,
    cycle_graph,
    density_pair,
    density_set,
    distances,
    empty_graph,
    girth_violation,
    graph_from_text,
    graph_to_text,
    induced_subgraph,
    max_degree,
    path_graph,
    path_power,
    power,
    random_graph,
    read_edge_list,
    sheared_blowup,
    write_edge_list,
)
from .partition import (
    PartitionResult,
    Segment,
    auxiliary_graph,
    long_path_through_sets,
    partition_two_coloured,
    prune_top,
    segment_path,
    sparsify,
    two_colouring_from_graph,
    verify_partition,
)
from .pipeline import (
    EdgeBudgetReport,
    PipelineConfig,
    StepOutcome,
    base_case_driver,
    build_step_host,
    edge_budget,
    induction_step,
    sheared_host_edge_count,
)
from .pseudorandom import (
    ClassPParams,
    DensityCertificate,
    GenerationConfig,
    GenerationLog,
    GoodQuadruple,
    chernoff_bound,
    fit_density_certificate,
    generate_class_p,
    is_good,
    quad,
    verify_class_p,
    verify_density_propagation,
    verify_edgeboost,
)

__version__ = "0.1.0"
