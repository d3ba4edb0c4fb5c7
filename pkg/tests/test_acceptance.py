"""Acceptance criteria 1 to 8, one manifest each.

Each test runs its manifest through the suite runner, checks the wall
clock budget and adds independent oracle checks where they are cheap.  A
``criterion N: PASS|FAIL`` line per criterion is printed in the terminal
summary (see ``conftest.py``) and when this file is run as a script.
"""

import time

import pytest

from conftest import DATA, ACCEPTANCE_LINES
from oracles import gauge_class_count, groupoid_functors, unipotent_order
from stokes_skeleton.cli import suite
from stokes_skeleton.complex2 import StratComplex2, build_cycle
from stokes_skeleton.groupoid import FiniteGroupoid
from stokes_skeleton.groups import PreorderedIndex, build_unipotent_stokes_group, cyclic_group, symmetric_group
from stokes_skeleton.io import load_json
from stokes_skeleton.presenters import build_curve_presenter, curve_spec_from_json

CRITERIA = {
    1: ("criterion1_micro_example", 1.0),
    2: ("criterion2_subdivision", 30.0),
    3: ("criterion3_simply_connected", 1.0),
    4: ("criterion4_descent", 60.0),
    5: ("criterion5_pushout", 60.0),
    6: ("criterion6_curve", 1.0),
    7: ("criterion7_glp", 5.0),
    8: ("criterion8_unipotent", 10.0),
}


def _extra_1():
    K = build_cycle(4)
    for m in (2, 3, 5):
        assert gauge_class_count(K, cyclic_group(m))[1] == m
    assert gauge_class_count(K, symmetric_group(3))[1] == 3


def _extra_3():
    for name in ("triangle", "cone4"):
        K = StratComplex2.from_json(load_json(DATA / "complexes" / f"{name}.json"))
        for G in (cyclic_group(2), cyclic_group(3)):
            assert gauge_class_count(K, G)[1] == 1


def _extra_6():
    Z2 = cyclic_group(2)
    spec = curve_spec_from_json(load_json(DATA / "curves" / "one_puncture_l2.json"), Z2)
    P = build_curve_presenter(spec).groupoid
    funs = groupoid_functors(P, FiniteGroupoid.from_group(Z2))
    assert len(funs) == 32
    pinned = {P.gen_index[f"C/s0.{a}[{u}]"]: u for a in (0, 1) for u in (0, 1)}
    corrected = [arrows for _, arrows in funs if all(arrows[g] == u for g, u in pinned.items())]
    assert corrected and all(arrows[P.gen_index["A/a"]] == 0 for arrows in corrected)


def _extra_8():
    for length in (1, 2, 3, 4):
        for p in (2, 3):
            assert build_unipotent_stokes_group(PreorderedIndex.chain(length), p).order == \
                unipotent_order([1] * length, p)


EXTRA = {1: _extra_1, 3: _extra_3, 6: _extra_6, 8: _extra_8}


def run_criterion(n: int) -> tuple[bool, float, str]:
    name, budget = CRITERIA[n]
    start = time.perf_counter()
    doc = suite(str(DATA / "acceptance" / f"{name}.json"), cap=10 ** 7)
    elapsed = time.perf_counter() - start
    failed = [e["name"] for e in doc["experiments"] if not e["pass"]]
    detail = f"{doc['passed']}/{doc['total']} experiments in {elapsed:.2f}s, budget {budget:.0f}s"
    if failed:
        detail += f", failed: {', '.join(failed)}"
    ok = doc["pass"] and doc["total"] > 0 and elapsed < budget
    if ok and n in EXTRA:
        try:
            EXTRA[n]()
        except AssertionError:
            ok, detail = False, detail + ", oracle cross-check failed"
    return ok, elapsed, detail


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, _, detail = run_criterion(n)
    ACCEPTANCE_LINES[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(ACCEPTANCE_LINES[n])
    assert ok, detail


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        ok, _, detail = run_criterion(n)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
