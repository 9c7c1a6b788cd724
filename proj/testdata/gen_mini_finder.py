#!/usr/bin/env python3
"""Regenerates the mini QA fixture and its golden outputs.

The cleanup rules are implemented here independently of the C++ library so the
golden files act as a cross-check, not an echo. Running this script rewrites:

    testdata/mini_finder_raw.jsonl
    testdata/golden/mini_records.jsonl
    testdata/golden/mini_reconciliation.txt
"""

import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))

MISSING_ANSWER = "No ground truth provided by the authors."
NUMERICAL_GROUP = "Numerical reasoning"
NUMERICAL_FINE = {"Addition", "Compositional", "Division", "Multiplication", "Subtraction"}
FLIPPED_IDS = {"8dc5ccdd", "2dba4bde"}


def raw_records():
    """40 records exercising every cleanup rule at least once."""
    recs = []

    def add(rid, text, rtype, category, answer, references, reasoning):
        recs.append({
            "id": rid,
            "text": text,
            "type": rtype,
            "category": category,
            "answer": answer,
            "references": references,
            "reasoning": reasoning,
        })

    # The two rows whose reasoning flag is corrected by rule 3.
    add("8dc5ccdd", "How did management justify the change in segment reporting?",
        "Logical reasoning", "Financials",
        "Management cited the 2023 reorganization into three operating units.",
        ["2023 annual report, segment note"], False)
    add("2dba4bde", "Why did the effective tax rate fall between FY2022 and FY2023?",
        "Logical reasoning", "Financials",
        "A one-time deferred tax remeasurement reduced the FY2023 rate.",
        ["FY2023 10-K, income tax note"], False)

    # The stray fine-type label fixed by rule 1.
    add("a1b20001", "What is the change in gross margin from FY2022 to FY2023?",
        "Subtract", "Financials",
        "Gross margin rose by 1.2 percentage points._X000D_",
        ["FY2023 income statement"], True)

    # Rows with no ground truth, filled by rule 2.
    add("a1b20002", "What are the issuer's FY2030 emission reduction commitments?",
        "Information extraction", "ESG", "",
        ["Sustainability report 2023"], False)
    add("a1b20003", "How many employees were covered by the 2023 safety audit?",
        "Information extraction", "People", "",
        ["2023 safety disclosure_X000D_"], False)
    add("a1b20004", "What portion of FY2023 revenue came from recurring contracts?",
        "Division", "Financials", "",
        ["FY2023 revenue disaggregation note"], True)

    specs = [
        ("Information extraction", "Financials", 8, False),
        ("Information extraction", "Products", 3, False),
        ("Information extraction", "ESG", 2, False),
        ("Logical reasoning", "Financials", 3, True),
        ("Logical reasoning", "People", 1, True),
        ("Addition", "Financials", 4, True),
        ("Compositional", "Financials", 4, True),
        ("Compositional", "Products", 2, True),
        ("Division", "Financials", 2, True),
        ("Multiplication", "Financials", 3, True),
        ("Subtraction", "Financials", 2, True),
    ]
    n = 0
    for rtype, category, count, reasoning in specs:
        for _ in range(count):
            n += 1
            rid = "c%07x" % n
            answer = f"Reported value {n * 17} million USD for item {n}."
            if n % 5 == 0:
                answer += "_X000D_ See note 14."
            # Some sources store the flag as a string; the loader accepts both.
            flag = reasoning if n % 3 else str(reasoning).lower()
            add(rid, f"Benchmark question number {n} about {category.lower()} data?",
                rtype, category, answer,
                [f"Reference document {n}", f"Supplement {n}_X000D_"], flag)
    assert len(recs) == 40, len(recs)
    return recs


def clean(records):
    out = []
    tallies = {
        "total": 0, "renamed": 0, "filled": 0, "flipped": 0,
        "by_type": {}, "by_group": {}, "by_category": {},
        "true": 0, "false": 0,
    }
    for raw in records:
        rec = {
            "id": raw["id"],
            "question": raw["text"],
            "answer": raw["answer"],
            "references": list(raw["references"]),
            "category": raw["category"],
            "question_reasoning": raw["type"],
            "reasoning": raw["reasoning"] if isinstance(raw["reasoning"], bool)
                         else raw["reasoning"] == "true",
        }
        if rec["question_reasoning"] == "Subtract":
            rec["question_reasoning"] = "Subtraction"
            tallies["renamed"] += 1
        if rec["answer"] == "":
            rec["answer"] = MISSING_ANSWER
            tallies["filled"] += 1
        if rec["id"] in FLIPPED_IDS and not rec["reasoning"]:
            rec["reasoning"] = True
            tallies["flipped"] += 1
        rec["reasoning_group"] = (NUMERICAL_GROUP
                                  if rec["question_reasoning"] in NUMERICAL_FINE
                                  else rec["question_reasoning"])
        tallies["total"] += 1
        tallies["by_type"][rec["question_reasoning"]] = \
            tallies["by_type"].get(rec["question_reasoning"], 0) + 1
        tallies["by_group"][rec["reasoning_group"]] = \
            tallies["by_group"].get(rec["reasoning_group"], 0) + 1
        tallies["by_category"][rec["category"]] = \
            tallies["by_category"].get(rec["category"], 0) + 1
        tallies["true" if rec["reasoning"] else "false"] += 1
        out.append(rec)
    return out, tallies


def reconciliation_text(t):
    lines = [
        f"records: {t['total']}",
        f"step1 subtract renamed: {t['renamed']}",
        f"step2 answers filled: {t['filled']}",
        f"step3 reasoning flipped: {t['flipped']}",
        "question_reasoning:",
    ]
    lines += [f"  {k}: {v}" for k, v in sorted(t["by_type"].items())]
    lines.append("reasoning_group:")
    lines += [f"  {k}: {v}" for k, v in sorted(t["by_group"].items())]
    lines.append("reasoning:")
    lines.append(f"  true: {t['true']}")
    lines.append(f"  false: {t['false']}")
    lines.append("category:")
    lines += [f"  {k}: {v}" for k, v in sorted(t["by_category"].items())]
    return "\n".join(lines) + "\n"


def main():
    raw = raw_records()
    cleaned, tallies = clean(raw)

    with open(os.path.join(HERE, "mini_finder_raw.jsonl"), "w") as f:
        for r in raw:
            f.write(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n")

    os.makedirs(os.path.join(HERE, "golden"), exist_ok=True)
    # Matches the library's canonical serialization: sorted keys, no spaces.
    with open(os.path.join(HERE, "golden", "mini_records.jsonl"), "w") as f:
        for r in cleaned:
            f.write(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n")
    with open(os.path.join(HERE, "golden", "mini_reconciliation.txt"), "w") as f:
        f.write(reconciliation_text(tallies))

    print(f"wrote {len(raw)} raw and {len(cleaned)} cleaned records")


if __name__ == "__main__":
    main()
