"""XML parsing and serialization for test definitions.

``parse_test_definition`` turns a ``<Test>`` document into a
:class:`~xtest.model.TestDefinition`; ``serialize_test_definition`` emits the
canonical XML form, and a parse of that form is structurally equal to the
original model. The element vocabulary lives in the shipped ``xtest.schema``
file, which is also the documented extension point (see docs/language.md).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from xml.etree import ElementTree as ET

from .errors import ParseError
from .model import (
    AnswerOption,
    BalancedConfig,
    Completion,
    Correctness,
    Diagnostic,
    MultipleChoice,
    Numeric,
    OrderType,
    Question,
    QuestionFormat,
    QuestionKind,
    Severity,
    TestDefinition,
    TrueFalse,
)

_FORMAT_TYPE_NAMES = {"choice", "true_false", "completion", "numeric"}


@dataclass(frozen=True)
class Schema:
    """Parsed ``xtest.schema`` document."""

    data: dict

    @property
    def root_tag(self) -> str:
        return self.data["root"]

    def children_of(self, tag: str) -> list[str]:
        return self.data["elements"].get(tag, {}).get("children", [])

    @property
    def formats(self) -> dict[str, str]:
        return self.data["formats"]

    @classmethod
    def from_text(cls, text: str) -> "Schema":
        data = json.loads(text)
        for key in ("root", "elements", "formats"):
            if key not in data:
                raise ValueError(f"schema document missing '{key}'")
        unknown = set(data["formats"].values()) - _FORMAT_TYPE_NAMES
        if unknown:
            # Format semantics are a closed set; the schema may only rename
            # or add descriptive elements, not invent grading rules.
            raise ValueError(f"schema maps elements to unknown format types: {sorted(unknown)}")
        return cls(data)

    @classmethod
    def load(cls, path: str | Path) -> "Schema":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def default(cls) -> "Schema":
        text = resources.files("xtest").joinpath("xtest.schema").read_text(encoding="utf-8")
        return cls.from_text(text)


_DEFAULT_SCHEMA: Schema | None = None


def default_schema() -> Schema:
    global _DEFAULT_SCHEMA
    if _DEFAULT_SCHEMA is None:
        _DEFAULT_SCHEMA = Schema.default()
    return _DEFAULT_SCHEMA


def _text_of(element: ET.Element) -> str:
    return "".join(element.itertext()).strip()


def _parse_bool(value: str, *, context: str) -> bool:
    if value == "true":
        return True
    if value == "false":
        return False
    raise ParseError(f"{context}: expected 'true' or 'false', got {value!r}", code="E-BAD-FORMAT")


def _split_refs(value: str | None) -> tuple[str, ...]:
    if not value:
        return ()
    return tuple(value.split())


def _parse_balanced(raw: str) -> BalancedConfig:
    tokens = raw.split()
    if len(tokens) != 2:
        raise ParseError(
            f"balanced attribute must hold two tokens 'n p', got {raw!r}", code="E-BAD-BALANCED"
        )
    try:
        window_n = int(tokens[0])
        threshold_p = float(tokens[1])
    except ValueError:
        raise ParseError(f"balanced attribute is not numeric: {raw!r}", code="E-BAD-BALANCED")
    if window_n < 1 or not 0.0 <= threshold_p <= 100.0:
        raise ParseError(
            f"balanced attribute out of range (n >= 1, 0 <= p <= 100): {raw!r}",
            code="E-BAD-BALANCED",
        )
    return BalancedConfig(window_n=window_n, threshold_p=threshold_p)


def _parse_choice(element: ET.Element, qid: str) -> MultipleChoice:
    multi = _parse_bool(element.get("multi", "false"), context=f"{qid}/Choice@multi")
    choices: list[str] = []
    correct: set[int] = set()
    for child in element:
        tag = _localname(child.tag)
        if tag != "Option":
            continue
        if _parse_bool(child.get("correct", "false"), context=f"{qid}/Option@correct"):
            correct.add(len(choices))
        choices.append(_text_of(child))
    if len(choices) < 2:
        raise ParseError(
            "Choice format requires at least two Option children",
            code="E-BAD-FORMAT",
            question_id=qid,
        )
    if not correct:
        raise ParseError(
            "Choice format requires at least one correct Option",
            code="E-BAD-FORMAT",
            question_id=qid,
        )
    return MultipleChoice(
        choices=tuple(choices), correct_indices=frozenset(correct), multi_select=multi
    )


def _parse_true_false(element: ET.Element, qid: str) -> TrueFalse:
    raw = element.get("correct")
    if raw is None:
        raise ParseError(
            "TrueFalse format requires a correct attribute", code="E-BAD-FORMAT", question_id=qid
        )
    return TrueFalse(correct=_parse_bool(raw, context=f"{qid}/TrueFalse@correct"))


def _parse_completion(element: ET.Element, qid: str) -> Completion:
    case_sensitive = _parse_bool(
        element.get("caseSensitive", "false"), context=f"{qid}/Completion@caseSensitive"
    )
    accepted = tuple(_text_of(child) for child in element if _localname(child.tag) == "Accept")
    if not accepted:
        raise ParseError(
            "Completion format requires at least one Accept child",
            code="E-BAD-FORMAT",
            question_id=qid,
        )
    return Completion(accepted=accepted, case_sensitive=case_sensitive)


def _parse_numeric(element: ET.Element, qid: str) -> Numeric:
    raw_expected = element.get("expected")
    if raw_expected is None:
        raise ParseError(
            "Numeric format requires an expected attribute", code="E-BAD-FORMAT", question_id=qid
        )
    try:
        expected = float(raw_expected)
        tolerance = float(element.get("tolerance", "0"))
    except ValueError:
        raise ParseError(
            "Numeric attributes must be numbers", code="E-BAD-FORMAT", question_id=qid
        )
    if tolerance < 0:
        raise ParseError(
            "Numeric tolerance must be >= 0", code="E-BAD-FORMAT", question_id=qid
        )
    return Numeric(expected=expected, tolerance=tolerance)


_FORMAT_PARSERS = {
    "choice": _parse_choice,
    "true_false": _parse_true_false,
    "completion": _parse_completion,
    "numeric": _parse_numeric,
}


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _parse_option(element: ET.Element, correctness: Correctness) -> AnswerOption:
    return AnswerOption(
        correctness=correctness,
        body=_text_of(element),
        forward_refs=_split_refs(element.get("forward")),
        backward_refs=_split_refs(element.get("backward")),
    )


def _parse_question(
    element: ET.Element, schema: Schema, diagnostics: list[Diagnostic]
) -> Question:
    qid = element.get("id")
    if qid is None:
        raise ParseError("xTest element without id attribute")

    order_refs = _split_refs(element.get("order"))
    if len(set(order_refs)) != len(order_refs):
        deduped: list[str] = []
        for ref in order_refs:
            if ref not in deduped:
                deduped.append(ref)
        diagnostics.append(
            Diagnostic(
                Severity.WARNING,
                "W-DUP-ORDER-REF",
                "duplicate order references collapsed",
                question_id=qid,
            )
        )
        order_refs = tuple(deduped)

    raw_order_type = element.get("orderType", OrderType.NORMAL.value)
    try:
        order_type = OrderType(raw_order_type)
    except ValueError:
        raise ParseError(
            f"orderType must be one of normal|alternative, got {raw_order_type!r}",
            code="E-BAD-ENUM",
            question_id=qid,
        )
    raw_kind = element.get("type", QuestionKind.NORMAL.value)
    try:
        kind = QuestionKind(raw_kind)
    except ValueError:
        raise ParseError(
            f"type must be one of normal|forced, got {raw_kind!r}",
            code="E-BAD-ENUM",
            question_id=qid,
        )

    prompt = ""
    options: list[AnswerOption] = []
    fmt: QuestionFormat | None = None
    known_children = set(schema.children_of("xTest"))
    for child in element:
        tag = _localname(child.tag)
        if tag == "Print":
            prompt = _text_of(child)
        elif tag == "Right":
            options.append(_parse_option(child, Correctness.RIGHT))
        elif tag == "Wrong":
            options.append(_parse_option(child, Correctness.WRONG))
        elif tag in schema.formats:
            if fmt is not None:
                raise ParseError(
                    "question declares more than one format payload",
                    code="E-BAD-FORMAT",
                    question_id=qid,
                )
            fmt = _FORMAT_PARSERS[schema.formats[tag]](child, qid)
        elif tag in known_children:
            pass  # schema-extended descriptive element; accepted and ignored
        else:
            diagnostics.append(
                Diagnostic(
                    Severity.WARNING,
                    "W-UNKNOWN-ELEMENT",
                    f"unknown element <{tag}> ignored",
                    question_id=qid,
                )
            )

    if fmt is None:
        fmt = TrueFalse(correct=True)
        diagnostics.append(
            Diagnostic(
                Severity.WARNING,
                "W-NO-FORMAT",
                "question has no format payload; defaulting to true/false",
                question_id=qid,
            )
        )

    return Question(
        id=qid,
        prompt=prompt,
        format=fmt,
        options=tuple(options),
        order_refs=order_refs,
        order_type=order_type,
        kind=kind,
    )


def parse_test_definition(xml_text: str, schema: Schema | None = None) -> TestDefinition:
    """Parse one XML test document.

    Raises :class:`ParseError` with codes E-XML, E-DUP-ID, E-BAD-BALANCED,
    E-BAD-ENUM or E-BAD-FORMAT. Unknown elements produce warning diagnostics
    attached to the returned definition instead of failing the parse.
    """
    schema = schema or default_schema()
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise ParseError(f"malformed XML: {exc}")

    if _localname(root.tag) != schema.root_tag:
        raise ParseError(f"root element must be <{schema.root_tag}>, got <{_localname(root.tag)}>")

    diagnostics: list[Diagnostic] = []
    balanced = None
    raw_balanced = root.get("balanced")
    if raw_balanced is not None:
        balanced = _parse_balanced(raw_balanced)

    questions: list[Question] = []
    seen: set[str] = set()
    for child in root:
        tag = _localname(child.tag)
        if tag != "xTest":
            diagnostics.append(
                Diagnostic(
                    Severity.WARNING, "W-UNKNOWN-ELEMENT", f"unknown element <{tag}> ignored"
                )
            )
            continue
        question = _parse_question(child, schema, diagnostics)
        if question.id in seen:
            raise ParseError(
                f"duplicate question id {question.id!r}",
                code="E-DUP-ID",
                question_id=question.id,
            )
        seen.add(question.id)
        questions.append(question)

    return TestDefinition(
        test_id=root.get("id", ""),
        balanced=balanced,
        questions=tuple(questions),
        parse_diagnostics=tuple(diagnostics),
    )


def _format_number(value: float) -> str:
    return f"{value:g}"


def _format_element(fmt: QuestionFormat) -> ET.Element:
    if isinstance(fmt, MultipleChoice):
        element = ET.Element("Choice")
        if fmt.multi_select:
            element.set("multi", "true")
        for index, choice in enumerate(fmt.choices):
            option = ET.SubElement(element, "Option")
            if index in fmt.correct_indices:
                option.set("correct", "true")
            option.text = choice
        return element
    if isinstance(fmt, TrueFalse):
        element = ET.Element("TrueFalse")
        element.set("correct", "true" if fmt.correct else "false")
        return element
    if isinstance(fmt, Completion):
        element = ET.Element("Completion")
        if fmt.case_sensitive:
            element.set("caseSensitive", "true")
        for accepted in fmt.accepted:
            ET.SubElement(element, "Accept").text = accepted
        return element
    if isinstance(fmt, Numeric):
        element = ET.Element("Numeric")
        element.set("expected", _format_number(fmt.expected))
        if fmt.tolerance:
            element.set("tolerance", _format_number(fmt.tolerance))
        return element
    raise TypeError(f"unknown format payload: {fmt!r}")


def serialize_test_definition(definition: TestDefinition) -> str:
    """Canonical XML form; re-parsing yields a structurally equal definition."""
    root = ET.Element("Test")
    if definition.test_id:
        root.set("id", definition.test_id)
    if definition.balanced is not None:
        root.set(
            "balanced",
            f"{definition.balanced.window_n} {_format_number(definition.balanced.threshold_p)}",
        )
    for question in definition.questions:
        q_el = ET.SubElement(root, "xTest")
        q_el.set("id", question.id)
        if question.order_refs:
            q_el.set("order", " ".join(question.order_refs))
        if question.order_type is not OrderType.NORMAL:
            q_el.set("orderType", question.order_type.value)
        if question.kind is not QuestionKind.NORMAL:
            q_el.set("type", question.kind.value)
        if question.prompt:
            ET.SubElement(q_el, "Print").text = question.prompt
        q_el.append(_format_element(question.format))
        for option in question.options:
            tag = "Right" if option.correctness is Correctness.RIGHT else "Wrong"
            o_el = ET.SubElement(q_el, tag)
            if option.forward_refs:
                o_el.set("forward", " ".join(option.forward_refs))
            if option.backward_refs:
                o_el.set("backward", " ".join(option.backward_refs))
            if option.body:
                o_el.text = option.body
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


def definition_hash(definition: TestDefinition) -> str:
    """Content hash of the canonical serialization (used to pin replays)."""
    return hashlib.sha256(serialize_test_definition(definition).encode("utf-8")).hexdigest()
