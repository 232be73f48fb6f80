"""The release checklist, one test per criterion at the stated caps.

The checklist runs once per session (solver and pentagon at letter count 6,
the chain suite at 5) and each criterion reports through its own test, so
`pytest -v` shows one pass/fail line per criterion. Every comparison in the
checklist is exact; there are no tolerances anywhere.
"""

import json

import pytest

from liedescent.acceptance import run_all
from liedescent.cli import main

CRITERIA = [
    (1, "calculus-kernel"),
    (2, "chern-simons-primitive"),
    (3, "abelian-descent"),
    (4, "row-cohomology"),
    (5, "cocycle-suite"),
    (6, "kv-solve"),
    (7, "pentagon"),
    (8, "descent-chain"),
    (9, "affine-family"),
    (10, "determinism"),
]


@pytest.fixture(scope="module")
def results():
    return {r.index: r for r in run_all(6)}


@pytest.mark.parametrize(
    "index,name", CRITERIA, ids=[f"{i:02d}-{name}" for i, name in CRITERIA]
)
def test_criterion(results, index, name):
    result = results[index]
    assert result.name == name
    print(result.line())
    for line in result.detail_lines():
        print(line)
    assert result.ok, "\n".join([result.line(), *result.detail_lines()])


def test_reports_are_byte_identical(capsys):
    """Criterion 10 at the command level: the whole verify-all report, run
    twice in both formats, is reproduced byte for byte."""
    first = main(["verify-all", "--degree", "4"])
    out1 = capsys.readouterr().out
    second = main(["verify-all", "--degree", "4"])
    out2 = capsys.readouterr().out
    assert (first, second) == (0, 0)
    assert out1.encode() == out2.encode()

    first = main(["verify-all", "--degree", "4", "--format", "json"])
    json1 = capsys.readouterr().out
    second = main(["verify-all", "--degree", "4", "--format", "json"])
    json2 = capsys.readouterr().out
    assert (first, second) == (0, 0)
    assert json1.encode() == json2.encode()
    assert json.loads(json1)["status"] == "pass"
