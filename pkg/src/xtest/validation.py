"""Static analysis over a parsed test definition.

``validate_references`` reports dangling references, unreachable forced
questions and reference cycles; ``classify_questions`` splits the question
set into the scheduler's free / forced / final groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .model import Diagnostic, QuestionKind, Severity, TestDefinition


@dataclass(frozen=True)
class QuestionClasses:
    free_ids: tuple[str, ...]
    forced_ids: frozenset[str]
    final_ids: frozenset[str]


@dataclass
class ValidationResult:
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.ERROR]

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.WARNING]


def dangling_references(definition: TestDefinition) -> list[Diagnostic]:
    """E-DANGLING-REF for every reference that does not resolve to a question."""
    found = []
    for qid, edges in definition.ref_graph.items():
        for edge in edges:
            if not definition.has_question(edge.target):
                found.append(
                    Diagnostic(
                        Severity.ERROR,
                        "E-DANGLING-REF",
                        f"{edge.kind.value} reference to undefined question {edge.target!r}",
                        question_id=qid,
                    )
                )
    return found


def _reference_cycles(definition: TestDefinition) -> list[list[str]]:
    graph = nx.DiGraph()
    graph.add_nodes_from(definition.question_ids)
    for qid, edges in definition.ref_graph.items():
        for edge in edges:
            if definition.has_question(edge.target):
                graph.add_edge(qid, edge.target)
    cycles = []
    for cycle in nx.simple_cycles(graph):
        # canonical rotation (smallest node first) keeps reports stable
        # across runs regardless of hash seed
        pivot = cycle.index(min(cycle))
        cycles.append(cycle[pivot:] + cycle[:pivot])
    cycles.sort(key=lambda nodes: (len(nodes), nodes))
    return cycles


def validate_references(definition: TestDefinition) -> list[Diagnostic]:
    """All reference-level findings, parse warnings included.

    Cycles are legal (the runtime bounds them with a visit cap) but every
    elementary cycle is reported as W-CYCLE so authors can see them.
    """
    diagnostics = list(definition.parse_diagnostics)
    diagnostics.extend(dangling_references(definition))

    referenced: set[str] = set()
    for edges in definition.ref_graph.values():
        referenced.update(edge.target for edge in edges)
    for question in definition.questions:
        # Any inbound reference kind (order, forward or backward) makes a
        # forced question reachable.
        if question.kind is QuestionKind.FORCED and question.id not in referenced:
            diagnostics.append(
                Diagnostic(
                    Severity.WARNING,
                    "W-UNREACHABLE-FORCED",
                    "forced question is never referenced and can never be selected",
                    question_id=question.id,
                )
            )

    for cycle in _reference_cycles(definition):
        diagnostics.append(
            Diagnostic(
                Severity.WARNING,
                "W-CYCLE",
                "reference cycle: " + " -> ".join(cycle + [cycle[0]]),
                question_id=cycle[0],
            )
        )
    return diagnostics


def error_diagnostics(definition: TestDefinition) -> list[Diagnostic]:
    """The session-blocking subset (cheap; skips cycle enumeration)."""
    return dangling_references(definition)


def classify_questions(definition: TestDefinition) -> QuestionClasses:
    """Free / forced / final split used by the scheduler.

    final questions are those with no outgoing references at all, ignoring
    self references on forward/backward links.
    """
    free: list[str] = []
    forced: set[str] = set()
    finals: set[str] = set()
    for question in definition.questions:
        if question.kind is QuestionKind.FORCED:
            forced.add(question.id)
        else:
            free.append(question.id)
        if question.order_refs:
            continue
        causal_targets = {
            target
            for option in question.options
            for target in (*option.forward_refs, *option.backward_refs)
        }
        if causal_targets <= {question.id}:
            finals.add(question.id)
    return QuestionClasses(
        free_ids=tuple(free), forced_ids=frozenset(forced), final_ids=frozenset(finals)
    )
