"""Named suites of generated pairs with their expected classification.

A census run builds each instance, computes the full report and compares
verdict, case and table line with the expectation.  Instances are
independent, so they can be spread over worker processes; results come back
in suite order.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .classify import full_report
from .errors import PregeomError, TheoremViolation
from .gen import GeneratorSpec, generate


@dataclass(frozen=True)
class Instance:
    id: str
    spec: GeneratorSpec
    verdict: tuple[str, ...]
    case: str | None = None
    line: str | None = None


def _I(id_, name, verdict, case=None, line=None, **params) -> Instance:
    return Instance(id_, GeneratorSpec(name, {k: str(v) for k, v in params.items()}), verdict, case, line)


PB, NB = "primitive-basic", "normal-basic"

_QUICK = [
    _I("fano", "fano", (PB, NB), "i"),
    _I("points_pairs_S4", "points_pairs_S4", (NB,), "iv"),
    _I("f20_case_iia", "f20_case_iia", (NB,), "ii-a"),
    _I("c52_Z3_S3", "construction_5_2", (PB, NB), "iii", t1="Z3", t2="S3"),
    _I("c52_Z2_Z2", "construction_5_2", (PB, NB), "iii", t1="Z2", t2="Z2"),
    _I("c52_Z5_F20", "construction_5_2", (PB, NB), "iii", t1="Z5", t2="F20"),
    _I("gl_2_1", "gamma_lambda", (PB, NB), "iii", "line-iii", p=2, d=1),
    _I("gl_3_1", "gamma_lambda", (PB, NB), "iii", "line-iii", p=3, d=1),
    _I("gl_2_2", "gamma_lambda", (PB, NB), "iii", "line-iii", p=2, d=2),
    _I("gl_3_1_partial", "gamma_lambda", (PB, NB), "iii", "line-iii", p=3, d=1, **{"lambda": "0,1,inf"}),
    _I("gl_2_2_partial", "gamma_lambda", (PB, NB), "iii", "line-iii", p=2, d=2, **{"lambda": "0,1,inf"}),
    _I("gl_5_1_partial", "gamma_lambda", (PB, NB), "iii", "line-iii", p=5, d=1, **{"lambda": "0,2,inf"}),
    _I("cyclic_pair_4", "cyclic_pair", ("neither-basic",), m=4),
    _I("fano_plus_fano", "fano_plus_fano", (PB,)),
]

_A5 = [
    _I("line_i_A5", "line_i_A5", (PB, NB), "iii", "line-i"),
    _I("case_iib_A5", "case_iib_A5", (PB, NB), "ii-b"),
    _I("line_ii_A5", "line_ii_A5", (PB, NB), "iii", "line-ii"),
]

SUITES: dict[str, list[Instance]] = {
    "quick": _QUICK,
    "battery": _QUICK + _A5,
}


@dataclass
class CensusRow:
    id: str
    ok: bool
    seconds: float
    verdict: tuple[str, ...] = ()
    case: str | None = None
    line: str | None = None
    error: str | None = None
    theorem_violation: bool = False
    report: dict[str, Any] = field(default_factory=dict)


def run_instance(inst: Instance) -> CensusRow:
    t0 = time.perf_counter()
    try:
        a = generate(inst.spec)
        rep = full_report(a)
    except TheoremViolation as exc:
        return CensusRow(inst.id, False, time.perf_counter() - t0, error=str(exc), theorem_violation=True)
    except PregeomError as exc:
        return CensusRow(inst.id, False, time.perf_counter() - t0, error=f"{type(exc).__name__}: {exc}")
    line = rep.table1_line.line if rep.table1_line else None
    ok = rep.verdict == inst.verdict and rep.case_tag == inst.case and line == inst.line
    err = None if ok else (f"expected {inst.verdict}/{inst.case}/{inst.line}, "
                           f"got {rep.verdict}/{rep.case_tag}/{line}")
    return CensusRow(inst.id, ok, time.perf_counter() - t0, rep.verdict, rep.case_tag, line, err,
                     report=rep.to_dict())


def run_suite(name: str, workers: int = 1) -> list[CensusRow]:
    if name not in SUITES:
        raise KeyError(name)
    insts = SUITES[name]
    if workers <= 1:
        return [run_instance(i) for i in insts]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(run_instance, insts))
