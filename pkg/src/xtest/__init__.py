"""xtest: a domain-independent adaptive test engine driven by XML test files.

The engine holds no domain knowledge; all content arrives as ``<Test>``
documents in the shipped test-definition language. Sessions combine four
selection modes (free document order, causal forward/backward links, dynamic
ordering constraints, balanced repetition) over a two-set scheduler and are
fully deterministic for a given seed.
"""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    AnswerOption,
    BalancedConfig,
    Completion,
    Diagnostic,
    MultipleChoice,
    Numeric,
    Question,
    TestDefinition,
    TrueFalse,
)
from .parser import (  # noqa: F401
    parse_test_definition,
    serialize_test_definition,
    definition_hash,
)
from .validation import classify_questions, validate_references  # noqa: F401
from .answers import (  # noqa: F401
    BooleanAnswer,
    ChoiceSelection,
    NumericAnswer,
    TextAnswer,
    evaluate_answer,
    select_fired_option,
)
from .engine import (  # noqa: F401
    EventingPolicy,
    SessionConfig,
    SessionReport,
    SessionState,
    TerminationMode,
    is_finished,
    next_question,
    score_session,
    start_session,
    submit_answer,
)
