#!/usr/bin/env python3
"""Fixture calibration: diff parsed corpus metrics against the oracle CSV.

Run from the repo root while editing the petclinic fixture; prints one line
per mismatch plus distribution summaries. Exit 0 when fully aligned.
"""
import csv
import sys
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from secrit.criticality import TieRule, assess_records, level_counts
from secrit.metrics import MetricKind, attribute_metric, compute_lcom
from secrit.sources import load_project

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "tests/fixtures/petclinic"
ORACLE = ROOT / "tests/fixtures/oracle/metrics_oracle.csv"


def main() -> int:
    classes, diags = load_project(CORPUS)
    for d in diags:
        print(f"diag: {d.path}: {d.message}")

    with open(ORACLE, newline="") as f:
        oracle = {
            (row["class"], row["method_signature"]): row for row in csv.DictReader(f)
        }

    got = {}
    loc = {r.fqn: r.value for r in attribute_metric(classes, MetricKind.LOC)}
    cc = {r.fqn: r.value for r in attribute_metric(classes, MetricKind.CC)}
    lcom_by_class = {c.qualified_name: compute_lcom(c) for c in classes}
    for cls in classes:
        for m in cls.concrete_methods():
            sig = m.fqn.split(".", 1)[1]
            got[(cls.qualified_name, sig)] = (cc[m.fqn], loc[m.fqn], lcom_by_class[cls.qualified_name])

    mismatches = 0
    for key, row in sorted(oracle.items()):
        want = (int(row["cc"]), int(row["loc"]), int(row["lcom"]))
        if key not in got:
            print(f"MISSING  {key[0]}.{key[1]}  want cc={want[0]} loc={want[1]} lcom={want[2]}")
            mismatches += 1
            continue
        g = got[key]
        if g != want:
            delta = []
            for name, gv, wv in zip(("cc", "loc", "lcom"), g, want):
                if gv != wv:
                    delta.append(f"{name}: got {gv} want {wv}")
            print(f"DIFF     {key[0]}.{key[1]}  " + "; ".join(delta))
            mismatches += 1
    for key in sorted(got):
        if key not in oracle:
            print(f"EXTRA    {key[0]}.{key[1]}  cc={got[key][0]} loc={got[key][1]}")
            mismatches += 1

    print(f"\nmethods parsed: {len(got)} (oracle: {len(oracle)}), mismatches: {mismatches}")
    for kind, want in ((MetricKind.LOC, (35, 55, 9)), (MetricKind.CC, (5, 13, 81)), (MetricKind.LCOM, (23, 26, 21))):
        a = assess_records(attribute_metric(classes, kind), TieRule.TIES_JOIN_LOWER)
        c = level_counts(a)
        tag = "OK" if (c["High"], c["Medium"], c["Low"]) == want else "MISMATCH"
        print(f"{kind.value}: {c} want {want} {tag}")
    a = assess_records(attribute_metric(classes, MetricKind.LOC), TieRule.TIES_JOIN_LOWER)
    table1 = {
        "OwnerController.showOwner(int)": 27,
        "OwnerController.initUpdateOwnerForm(int)": 29,
        "OwnerController.processFindForm(String,int)": 1,
        "OwnerRepositoryCustomImpl.findOwner(String)": 55,
        "OwnerRepositoryCustomImpl.findById(int)": 24,
        "OwnerRepositoryCustomImpl.findByLastName(String)": 25,
        "OwnerRepositoryCustomImpl.save(Owner)": 12,
        "PetController.processCreationForm(Pet)": 10,
    }
    by_fqn = {x.fqn: x for x in a}
    for fqn, want_rank in table1.items():
        x = by_fqn.get(fqn)
        if x is None:
            print(f"rank: {fqn} NOT FOUND")
            continue
        tag = "OK" if x.rank == want_rank else "RANK-DIFF"
        print(f"rank {x.rank:3d} (want {want_rank:3d}) level={x.level.label:6s} {fqn} {tag}")
    cnt = Counter(v for v in lcom_by_class.values())
    print("class LCOM values:", dict(sorted(cnt.items())))
    return 0 if mismatches == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
