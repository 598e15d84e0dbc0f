"""Named checks, run reports, profiles and parallel execution."""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable

from . import __version__
from . import checks as K

SCHEMA_VERSION = "1.0"
DEFAULTS = {"D": 4, "E": 4, "r": 1, "i_max": 1}
STATUSES = ("pass", "fail", "inconclusive")


class UnknownCheck(KeyError):
    pass


class GuardViolation(ValueError):
    pass


@dataclass(frozen=True)
class CheckDescriptor:
    name: str
    claim: str
    kind: str  # exact-subspace | dimension | boolean | stabilization
    params: tuple[str, ...]
    call: Callable[..., dict]
    criterion: int | None = None


def _infrastructure(D: int, E: int) -> dict:
    dd = K.differentials_square_to_zero(D, E)
    det = determinism_probe(("grosshans.steps", "g1-graded"))
    return {"passed": dd["passed"] and det["passed"], "d_squared": dd, "determinism": det}


_CHECKS = [
    CheckDescriptor(
        "identities",
        "(ad)^2 + ad = ab*cd; (ad)^(2^r) + (bc)^(2^r) = 1; sigma swaps ad and bc; ad + (ad)^(2^r) lies in k[G/N]",
        "boolean",
        (),
        lambda: K.ring_identities(4),
        1,
    ),
    CheckDescriptor(
        "identities.minimal-polynomial",
        "ad is a root of x^2 + x + ab*cd over k[G/N], and ad is not in k[G/N]",
        "boolean",
        (),
        K.minimal_polynomial_check,
    ),
    CheckDescriptor(
        "invariants",
        "k[U\\G] = k[c,d]; k[G/T]^U = k[U\\G]^T = k[cd] = k[U\\G]^N = k[G/N]^U; k[G/N]^G = k[G/T]^G = k",
        "exact-subspace",
        ("D",),
        lambda D: K.invariant_rings(D),
        2,
    ),
    CheckDescriptor(
        "free-module",
        "k[G/T] = k[G/N] (+) k[G/N]*ad; d/dx (x^2 + x + ab*cd) = 1",
        "dimension",
        ("D",),
        lambda D: K.free_module(D),
        3,
    ),
    CheckDescriptor(
        "grosshans",
        "step 0 = k and step 2 = span{1, ab, ad, cd}; gr k[G/T] = gr k[G/N][x]/(x^2 + ab*cd) with squares in gr k[G/N]; graded pieces split into nabla characters",
        "exact-subspace",
        ("D",),
        lambda D: K.grosshans(D, 8),
        4,
    ),
    CheckDescriptor(
        "grosshans.steps",
        "step 2 of k[G/T] is span{1, ab, ad, cd}; step 2 of k[G/N] is span{1, ab, cd}",
        "exact-subspace",
        ("D",),
        lambda D: K.grosshans_steps(D),
    ),
    CheckDescriptor(
        "extension",
        "0 -> k[G/N] -> k[G/T] -> k[G/N] -> 0 is non-split for G and split for G_r with lift (ad)^(2^r)",
        "boolean",
        ("D", "r"),
        lambda D, r: K.extension(D, r, 6),
        5,
    ),
    CheckDescriptor(
        "frobenius-kernels",
        "H^1(G_r, k[G/N]) classes die in larger truncations; H^0(G_r, k[G/N]) untwists to k[G/N]",
        "dimension",
        ("D", "r"),
        lambda D, r: K.frobenius_kernels(D, r, 8),
        6,
    ),
    CheckDescriptor(
        "rational-cohomology",
        "H^1(G, k[G/N]) = k, carried by the extension class; H^0 equals invariants",
        "stabilization",
        ("D", "E", "i_max"),
        lambda D, E, i_max: K.rational_cohomology(D, E, i_max),
        7,
    ),
    CheckDescriptor(
        "proposition",
        "H^1(G, k[G/N]) = k but lim_r H^1(G_r, k[G/N]) = 0; H^0(G, k[G/N]) = k = lim_r H^0(G_r, k[G/N])",
        "boolean",
        ("D", "E", "r"),
        lambda D, E, r: K.proposition(D, E, r),
        8,
    ),
    CheckDescriptor(
        "g1-graded",
        "H^i(G_1, gr k[G/N]) != 0 for some i > 0",
        "dimension",
        ("D", "i_max"),
        lambda D, i_max: K.g1_graded(D, i_max),
        9,
    ),
    CheckDescriptor(
        "infrastructure",
        "d o d = 0 on every constructed complex; reports are byte-identical across runs",
        "boolean",
        ("D", "E"),
        _infrastructure,
        10,
    ),
]

REGISTRY: dict[str, CheckDescriptor] = {c.name: c for c in _CHECKS}

PROFILES: dict[str, dict[str, dict]] = {
    "quick": {
        "identities": {},
        "invariants": {"D": 4},
        "free-module": {"D": 6},
        "grosshans": {"D": 4},
        "extension": {"D": 4, "r": 2},
        "frobenius-kernels": {"D": 4, "r": 2},
        "rational-cohomology": {"D": 4, "E": 4, "i_max": 1},
        "proposition": {"D": 4, "E": 4, "r": 2},
        "g1-graded": {"D": 4, "i_max": 2},
        "infrastructure": {"D": 2, "E": 2},
    },
    "full": {
        "identities": {},
        "invariants": {"D": 8},
        "free-module": {"D": 10},
        "grosshans": {"D": 6},
        "extension": {"D": 8, "r": 2},
        "frobenius-kernels": {"D": 4, "r": 2},
        "rational-cohomology": {"D": 6, "E": 6, "i_max": 2},
        "proposition": {"D": 6, "E": 6, "r": 2},
        "g1-graded": {"D": 8, "i_max": 2},
        "infrastructure": {"D": 4, "E": 4},
    },
}

_BOUNDS = {"D": (0, 12), "E": (0, 8), "r": (1, 4), "i_max": (0, 3)}


def descriptor(name: str) -> CheckDescriptor:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownCheck(f"unknown check {name!r}; known: {', '.join(REGISTRY)}") from None


def resolve_params(name: str, overrides: dict | None = None, base: dict | None = None) -> dict:
    """Parameters a check actually uses: base (profile or defaults) then overrides."""
    desc = descriptor(name)
    merged = dict(DEFAULTS)
    merged.update(base or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    params = {k: merged[k] for k in desc.params}
    for k, v in params.items():
        lo, hi = _BOUNDS[k]
        if not isinstance(v, int) or not lo <= v <= hi:
            raise GuardViolation(f"{name}: {k}={v!r} outside [{lo}, {hi}]")
    if "E" in params and "D" in params and params["D"] > params["E"]:
        raise GuardViolation(f"{name}: need D <= E (got D={params['D']}, E={params['E']})")
    return params


# ----------------------------------------------------------------- reports


@dataclass
class RunReport:
    check: str
    params: dict
    status: str
    details: dict
    wall_time: float = field(default=0.0, compare=False)
    raw: dict | None = field(default=None, compare=False, repr=False)

    def payload(self) -> dict:
        """Deterministic content (wall time excluded)."""
        if self.raw is not None:
            return self.raw
        desc = descriptor(self.check)
        return {
            "schema_version": SCHEMA_VERSION,
            "check": self.check,
            "criterion": desc.criterion,
            "claim": desc.claim,
            "kind": desc.kind,
            "params": self.params,
            "status": self.status,
            "code_version": code_version(),
            "details": self.details,
        }

    def to_json(self) -> str:
        return dumps(self.payload())

    @classmethod
    def from_payload(cls, payload: dict, wall_time: float = 0.0) -> "RunReport":
        return cls(payload["check"], payload["params"], payload["status"], payload["details"], wall_time, payload)


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@lru_cache(maxsize=None)
def code_version() -> str:
    """Package version plus a digest of the package sources."""
    h = hashlib.sha256()
    root = Path(__file__).parent
    for path in sorted(root.glob("*.py")):
        h.update(path.name.encode())
        h.update(path.read_bytes())
    return f"{__version__}+{h.hexdigest()[:12]}"


def _status(result: dict) -> str:
    if result.get("passed"):
        return "pass"
    if result.get("inconclusive"):
        return "inconclusive"
    return "fail"


def execute(name: str, params: dict) -> RunReport:
    desc = descriptor(name)
    start = time.perf_counter()
    result = desc.call(**params)
    wall = time.perf_counter() - start
    details = json.loads(dumps(result))  # normalize to plain JSON values
    return RunReport(name, params, _status(result), details, wall)


def _execute_job(job: tuple[str, dict]) -> tuple[dict, float]:
    rep = execute(*job)
    return rep.payload(), rep.wall_time


def execute_many(jobs: list[tuple[str, dict]], workers: int = 1) -> list[RunReport]:
    """Run independent checks, optionally in a bounded process pool; order is preserved."""
    if workers <= 1 or len(jobs) <= 1:
        return [execute(n, p) for n, p in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        out = list(pool.map(_execute_job, jobs))
    return [RunReport.from_payload(p, w) for p, w in out]


def profile_jobs(profile: str, overrides: dict | None = None) -> list[tuple[str, dict]]:
    if profile not in PROFILES:
        raise GuardViolation(f"unknown profile {profile!r}; use one of {sorted(PROFILES)}")
    return [(name, resolve_params(name, overrides, base)) for name, base in PROFILES[profile].items()]


def determinism_probe(names: tuple[str, ...]) -> dict:
    """Run checks twice in fresh interpreters and compare payload bytes."""
    import subprocess
    import sys

    rows = {}
    ok = True
    env = dict(os.environ)
    for name in names:
        outs = []
        for _ in range(2):
            proc = subprocess.run(
                [sys.executable, "-m", "sl2check", "run", name, "--json", "--no-cache"],
                capture_output=True,
                env=env,
                check=False,
            )
            outs.append(proc.stdout)
        same = outs[0] == outs[1] and bool(outs[0])
        rows[name] = same
        ok &= same
    return {"passed": ok, "identical": rows}


# ------------------------------------------------------------------ schema


def schema() -> dict:
    return json.loads(resources.files("sl2check").joinpath("report.schema.json").read_text())


def validate(doc: dict) -> None:
    import jsonschema

    jsonschema.validate(doc, schema())
