"""coditkit: edit-plan data pipeline and evaluation toolkit.

The public API below is the in-process binding surface: training harnesses
import these functions directly instead of shelling out to the CLI, and the
two are kept in parity by the test suite.
"""

__version__ = "0.1.0"

from .edits import (
    BACKEND_LONGEST_MATCH,
    BACKEND_MINIMAL,
    BACKENDS,
    POLICIES,
    POLICY_LEFTMOST,
    POLICY_POSITIONAL,
    POLICY_STRICT,
    ConsistencyReport,
    EditOperation,
    EditPlan,
    OpKind,
    apply_plan,
    check_consistency,
    compute_edit_script,
    parse_plan,
    serialize_plan,
    to_keep_annotated,
)
from .errors import (
    AmbiguousInsert,
    CoditkitError,
    EmptyCorpus,
    EmptyStats,
    LengthMismatch,
    MalformedPlan,
    MissingCrossScore,
    MissingMarker,
    ParseError,
    SpanNotFound,
    SpecOutOfBounds,
    UnknownToken,
    ZeroLength,
)
from .metrics import (
    METRIC_NAMES,
    MetricsReport,
    SignificanceResult,
    bleu4,
    bootstrap_test,
    evaluate_corpus,
    gleu,
    sari,
    xmatch,
)
from .noising import (
    MAX_PRETRAIN_LEN,
    MIN_PRETRAIN_LEN,
    NoiseKind,
    NoiseSpan,
    NoiseSpec,
    PretrainExample,
    SpanStats,
    compute_span_stats,
    corrupt,
    example_rng,
    length_filter,
    make_pretrain_example,
    sample_noise_spec,
)
from .rerank import (
    DIRECTION_EDIT_WITH_GEN,
    DIRECTION_GEN_WITH_EDIT,
    DIRECTIONS,
    Candidate,
    RankedCandidate,
    RerankedList,
    combine,
    normalize_logprob,
    rerank,
    wrap_generation_as_edit_output,
)
from .tasks import (
    TASKS,
    BugFixExample,
    CodeReviewExample,
    CommentUpdateExample,
    ExtractedTarget,
    build_bugfix_input,
    build_code_review_input,
    build_comment_update_input,
    build_task_input,
    copy_rate,
    extract_target,
)
from .tokens import (
    ALL_MARKERS,
    MASK,
    OPERATION_MARKERS,
    SEPARATOR,
    TokenSeq,
    Tokenizer,
    detokenize,
    load_tokenizer,
    sanitize_text,
    tokenize,
)
