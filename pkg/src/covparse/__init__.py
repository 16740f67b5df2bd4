"""Non-projective dependency parsing with list-based transition systems.

The package implements two variants of Covington-style parsing: the
classic monotonic system, whose arc decisions are final, and a
non-monotonic system that may overwrite earlier decisions.  It provides
an exact loss oracle for the former, efficient loss bounds plus a
search-based exact auditor for the latter, a greedy averaged-perceptron
parser trainable with static and dynamic oracles, and a synthetic
treebank generator for end-to-end exercise.
"""

from .audit import (
    AUDIT_CSV_COLUMNS,
    BoundAudit,
    BoundViolationError,
    SearchSpaceError,
    audit_bounds,
    exact_loss,
    write_audit_csv,
)
from .covington import (
    Arc,
    ArcSet,
    Configuration,
    IllegalTransitionError,
    LEFT_ARC,
    NO_ARC,
    RIGHT_ARC,
    SHIFT,
    Transition,
    TransitionKind,
    apply_nonmonotonic,
    initial_config,
    is_terminal,
    legal_monotonic,
    legal_nonmonotonic,
    path_exists,
    step_monotonic,
    step_nonmonotonic,
    weakly_connected,
)
from .cycles import (
    Digraph,
    InDegreeError,
    classify_cycles,
    count_cycles_indeg1,
    elementary_cycles,
)
from .features import NULL, N_TEMPLATES, TEMPLATES, dump_features, extract_features
from .model import Model, ModelFormatError
from .oracles import (
    GoldTree,
    LossBounds,
    LossVariant,
    loss_bounds_nonmono,
    loss_mono,
    missing_gold_arcs,
    oracle_mono,
    oracle_nonmono,
    oracle_transitions,
    static_next,
    unreachable_mono,
    unreachable_nonmono,
)
from .synthetic import crossing_fraction, make_treebank
from .training import (
    EvalReport,
    NonmonoStats,
    TrainOptions,
    evaluate,
    evaluate_model,
    parse_corpus,
    parse_sentence,
    train,
)
from .treebank import (
    ConllFormatError,
    Corpus,
    DEFAULT_ROOT_LABEL,
    Sentence,
    Token,
    TreeValidationError,
    parse_conllx,
    emit_conllx,
    gold_predictions,
    read_conllx_file,
    validate_sentence,
    write_conllx_file,
)

__version__ = "0.1.0"
