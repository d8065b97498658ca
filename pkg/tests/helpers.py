"""Seeded random test-definition generator for fuzz and property tests.

Generated documents always reference existing question ids, so they carry no
E-level diagnostics and any session over them must terminate within the
engine's selection bound.
"""

from __future__ import annotations

import random
from xml.etree import ElementTree as ET

from xtest import parse_test_definition
from xtest.model import TestDefinition


def random_definition_xml(
    rng: random.Random,
    *,
    min_questions: int = 1,
    max_questions: int = 8,
    with_refs: bool = True,
    allow_balanced: bool = True,
    allow_forced: bool = True,
    ensure_cycle: bool = False,
) -> str:
    count = rng.randint(min_questions, max_questions)
    if ensure_cycle:
        count = max(count, 2)
    ids = [f"q{i}" for i in range(count)]
    root = ET.Element("Test")
    root.set("id", f"fuzz-{rng.randrange(1 << 30)}")
    if allow_balanced and rng.random() < 0.4:
        window = rng.randint(1, max(1, count))
        threshold = rng.choice([0, 25, 50, 70, 100])
        root.set("balanced", f"{window} {threshold}")

    for index, qid in enumerate(ids):
        q_el = ET.SubElement(root, "xTest")
        q_el.set("id", qid)
        if with_refs and count > 1 and rng.random() < 0.5:
            targets = rng.sample(ids, k=rng.randint(1, min(3, count)))
            q_el.set("order", " ".join(targets))
            if rng.random() < 0.4:
                q_el.set("orderType", "alternative")
        if allow_forced and index > 0 and rng.random() < 0.3:
            q_el.set("type", "forced")
        ET.SubElement(q_el, "Print").text = f"prompt for {qid}"
        _random_format(rng, q_el)
        if with_refs and rng.random() < 0.7:
            right = ET.SubElement(q_el, "Right")
            if rng.random() < 0.6:
                right.set("forward", rng.choice(ids))
            wrong = ET.SubElement(q_el, "Wrong")
            if rng.random() < 0.6:
                wrong.set("backward", rng.choice(ids))
    if ensure_cycle:
        # explicit two-node ordering cycle between the first and last question
        first, last = root[0], root[-1]
        first_order = (first.get("order", "") + " " + ids[-1]).split()
        last_order = (last.get("order", "") + " " + ids[0]).split()
        first.set("order", " ".join(dict.fromkeys(first_order)))
        last.set("order", " ".join(dict.fromkeys(last_order)))
    return ET.tostring(root, encoding="unicode")


def _random_format(rng: random.Random, q_el: ET.Element) -> None:
    kind = rng.choice(["true_false", "choice", "completion", "numeric"])
    if kind == "true_false":
        ET.SubElement(q_el, "TrueFalse").set("correct", rng.choice(["true", "false"]))
    elif kind == "choice":
        choice = ET.SubElement(q_el, "Choice")
        if rng.random() < 0.5:
            choice.set("multi", "true")
        total = rng.randint(2, 4)
        correct_at = rng.sample(range(total), k=rng.randint(1, total))
        for i in range(total):
            option = ET.SubElement(choice, "Option")
            option.text = f"option {i}"
            if i in correct_at:
                option.set("correct", "true")
    elif kind == "completion":
        completion = ET.SubElement(q_el, "Completion")
        for word in rng.sample(["alpha", "beta", "gamma", "delta"], k=rng.randint(1, 2)):
            ET.SubElement(completion, "Accept").text = word
    else:
        numeric = ET.SubElement(q_el, "Numeric")
        numeric.set("expected", str(rng.randint(-5, 20)))
        if rng.random() < 0.5:
            numeric.set("tolerance", "0.5")


def random_definition(rng: random.Random, **kwargs) -> TestDefinition:
    return parse_test_definition(random_definition_xml(rng, **kwargs))
