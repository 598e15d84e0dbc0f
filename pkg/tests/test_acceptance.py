"""One test per acceptance criterion; each prints a PASS/FAIL line with timing."""

import json
import subprocess
import sys
import time

import pytest

from sl2check.registry import execute, resolve_params

# (criterion, check, params, time budget in seconds)
CRITERIA = [
    (1, "identities", {}, 1),
    (2, "invariants", {"D": 8}, 10),
    (3, "free-module", {"D": 10}, 5),
    (4, "grosshans", {"D": 6}, 60),
    (5, "extension", {"D": 8, "r": 2}, 60),
    (6, "frobenius-kernels", {"D": 4, "r": 2}, 300),
    (7, "rational-cohomology", {"D": 6, "E": 6, "i_max": 2}, 1800),
    (8, "proposition", {"D": 6, "E": 6, "r": 2}, 1800),
    (9, "g1-graded", {"D": 8, "i_max": 2}, 1800),
    (10, "infrastructure", {"D": 4, "E": 4}, 300),
]


def _announce(capsys, line):
    with capsys.disabled():
        print(f"\n{line}", flush=True)


FLAGS = {"D": "--max-degree", "E": "--truncation", "r": "--r", "i_max": "--i-max"}


@pytest.mark.parametrize("criterion,check,params,budget", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(criterion, check, params, budget, capsys):
    # fresh interpreter per criterion, so timings do not benefit from warm caches
    params = resolve_params(check, params)
    argv = [sys.executable, "-m", "sl2check", "run", check, "--json", "--no-cache"]
    for k, v in params.items():
        argv += [FLAGS[k], str(v)]
    start = time.perf_counter()
    proc = subprocess.run(argv, capture_output=True, check=False)
    wall = time.perf_counter() - start
    doc = json.loads(proc.stdout)
    ok = proc.returncode == 0 and doc["status"] == "pass" and wall < budget
    shown = " ".join(f"{k}={v}" for k, v in params.items()) or "-"
    _announce(capsys, f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {check} {shown}  {wall:.2f}s (budget {budget}s)")
    assert doc["status"] == "pass", json.dumps(doc["details"], indent=1)[:4000]
    assert doc["criterion"] == criterion
    assert wall < budget


def test_criterion_details():
    """Spot checks on the payloads behind the status flags."""
    ident = execute("identities", {}).details
    oracle = ident["evaluation_oracle"]
    assert oracle["passed"] and oracle["points"] >= 8 * 20 and oracle["field_degrees"] == list(range(1, 9))
    rat = execute("rational-cohomology", resolve_params("rational-cohomology", {"D": 6, "E": 6, "i_max": 1})).details
    assert rat["h1_dims"] == [1, 1, 1] and rat["grid"]["stabilized"] and rat["extension_class_survives"]
    g1 = execute("g1-graded", {"D": 6, "i_max": 2}).details
    assert g1["nontrivial"] and g1["oracle_agrees"]


def test_quick_profile_end_to_end(capsys, tmp_path):
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "sl2check", "run-all", "--profile", "quick", "--json", "--cache-dir", str(tmp_path)],
        capture_output=True,
        check=False,
    )
    wall = time.perf_counter() - start
    doc = json.loads(proc.stdout)
    ok = proc.returncode == 0 and wall < 30 and all(r["status"] == "pass" for r in doc["reports"])
    _announce(capsys, f"quick profile: {'PASS' if ok else 'FAIL'}  {len(doc['reports'])} checks  {wall:.2f}s (budget 30s)")
    assert proc.returncode == 0 and wall < 30
