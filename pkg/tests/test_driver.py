import json
from pathlib import Path

import pytest

from skolem import HAS_ZERO, NO_ZERO, UNKNOWN_BOUNDED, decide_skolem, emit_report, parse_problem
from skolem.lrs import term_at
from skolem.reduction import crt_split
from skolem.sunit import brute_zero_set

ROOT = Path(__file__).resolve().parent.parent
CORPUS = sorted((ROOT / "corpus").glob("*.skolem"))
GOLDEN = Path(__file__).parent / "golden"


def load(name):
    return parse_problem((ROOT / "corpus" / name).read_text())


def components(problem):
    return crt_split(problem.characteristic, problem.variables, problem.ideal, problem.coefficients, problem.initial)


def oracle_zeros(problem, bound):
    sets = [set(brute_zero_set(c.lrs, bound)) for c in components(problem)]
    return sorted(set.intersection(*sets))


def finite(problem):
    return all(c.ring.is_finite for c in components(problem))


@pytest.mark.parametrize("name", ["fibonacci_mod6", "powers_of_two_mod3"])
def test_golden_reports(name):
    report = decide_skolem(load(f"{name}.skolem"))
    got = json.loads(emit_report(report, "json", emit_zero_set=name == "fibonacci_mod6"))
    assert got.pop("timing_seconds") >= 0
    assert got == json.loads((GOLDEN / f"{name}.json").read_text())


def test_fibonacci_report_contents():
    doc = json.loads(emit_report(decide_skolem(load("fibonacci_mod6.skolem")), "json"))
    assert doc["schema"] == "skolem-report/1"
    assert doc["verdict"] == HAS_ZERO and doc["witness"] == 0
    assert [c["zero_set"] for c in doc["components"]] == ["3Z", "4Z"]


@pytest.mark.parametrize("path", [p for p in CORPUS if finite(parse_problem(p.read_text()))], ids=lambda p: p.stem)
def test_finite_corpus_matches_brute_force(path):
    problem = parse_problem(path.read_text())
    report = decide_skolem(problem)
    truth = oracle_zeros(problem, 10**4)
    assert [n for n in range(10**4 + 1) if report.contains(n)] == truth
    if truth:
        assert report.verdict == HAS_ZERO and report.witness == truth[0]
    else:
        assert report.verdict == NO_ZERO


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_witnesses_are_zeros(path):
    problem = parse_problem(path.read_text())
    report = decide_skolem(problem)
    if report.verdict == HAS_ZERO:
        assert report.witness_verified
        assert all(term_at(c.lrs, report.witness).is_zero() for c in components(problem))


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_larger_bounds_never_flip_decided_verdicts(path):
    problem = parse_problem(path.read_text())
    verdicts = [decide_skolem(problem, bound=b).verdict for b in (64, 128, 256)]
    for small, large in zip(verdicts, verdicts[1:]):
        if small in (HAS_ZERO, NO_ZERO):
            assert large == small


def test_frobenius_powers_end_to_end():
    report = decide_skolem(load("frobenius_powers.skolem"))
    assert report.verdict == HAS_ZERO and report.witness == 1
    (comp,) = report.components
    assert comp.component.set.describe() == "{2^a}"
    assert str(comp.component.cert) == "CERTIFIED_UP_TO(4096)"
    assert report.contains(8192) and not report.contains(8191)


def test_supplied_decomposition_is_used():
    report = decide_skolem(load("split_ring_with_decomposition.skolem"))
    assert report.verdict == HAS_ZERO and report.witness == 0
    assert len(report.assumptions) == 2
    assert [n for n in range(200) if report.contains(n)] == [0]


def test_missing_decomposition_is_reported():
    report = decide_skolem(load("needs_decomposition.skolem"))
    assert report.verdict == UNKNOWN_BOUNDED
    assert "primary_decomposition" in report.reason
    text = emit_report(report)
    assert text.startswith("verdict: UNKNOWN_BOUNDED")


def test_text_report_lists_components():
    text = emit_report(decide_skolem(load("fibonacci_mod6.skolem")), emit_zero_set=True)
    assert "verdict: HAS_ZERO (witness n = 0, verified)" in text
    assert "p=2 (Z/2): 3Z  [PROVEN]" in text and "base 2: 12Z" in text
    with pytest.raises(ValueError):
        emit_report(decide_skolem(load("fibonacci_mod6.skolem")), "xml")


def test_backend_override():
    problem = load("two_n_mod4.skolem")
    forced = decide_skolem(problem, backend="certify", certify_bound=256)
    assert forced.verdict == HAS_ZERO
    assert [n for n in range(300) if forced.contains(n)] == list(range(0, 300, 2))
