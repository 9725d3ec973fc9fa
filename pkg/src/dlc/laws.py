"""Randomized verification of the algebraic law matrix.

Each logic is checked against the residuated-lattice axioms R1-R10, the
negation axioms N1-N4, the monoidal-dual axioms M1-M3, and idempotence.
Positive cells must survive sampling; negative cells must produce a
concrete counterexample witness.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .carriers import INF, F64Carrier, XReal, XRealCarrier
from .core import (
    And,
    BoolConst,
    Expr,
    Impl,
    LogicId,
    LogicKind,
    MAnd,
    MOr,
    Not,
    Or,
    random_formula,
)
from .errors import (
    CarrierError,
    FlagViolation,
    UndefinedConnective,
    ValidationError,
)
from .semantics import _binary_ops, interpret, stl_nary_c


class AxiomId(Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"
    R6 = "R6"
    R7 = "R7"
    R8 = "R8"
    R9 = "R9"
    R10 = "R10"
    N1 = "N1"
    N2 = "N2"
    N3 = "N3"
    N4 = "N4"
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    IDEM_MONOID = "IDEM"


@dataclass
class LawReport:
    logic: str
    axiom: str
    samples_run: int
    verdict: str  # pass | counterexample | not-applicable
    tol: float
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "logic": self.logic,
            "axiom": self.axiom,
            "samples_run": self.samples_run,
            "verdict": self.verdict,
            "tol": self.tol,
            "witness": self.witness,
        }


# ---------------------------------------------------------------------------
# Per-logic value domains


class ValueDomain:
    """Sampling, comparison, and value-level connectives for one logic."""

    def __init__(self, logic: LogicId):
        self.logic = logic
        if logic.kind is LogicKind.STL_INFTY:
            self.carrier = XRealCarrier
        else:
            self.carrier = F64Carrier
        c = self.carrier
        if logic.kind is LogicKind.STL:
            nu = logic.nu
            self.ops = {
                "and": lambda x, y: stl_nary_c(c, "conj", nu, [x, y]),
                "or": lambda x, y: stl_nary_c(c, "disj", nu, [x, y]),
                "not": c.neg,
            }
            # idempotence for this logic targets its soft conjunction
            self.ops["mand"] = self.ops["and"]
        else:
            self.ops = dict(_binary_ops(logic, c))
        self.consts: Dict[str, object] = {}
        if logic.is_fuzzy:
            self.consts = {"top": c.one, "bottom": c.zero}
        elif logic.kind is LogicKind.DL2:
            self.consts = {"top": c.zero}
        elif logic.kind is LogicKind.STL_INFTY:
            self.consts = {"top": c.plus_inf(), "bottom": c.minus_inf()}

    # -- sampling ---------------------------------------------------------

    def sample(self, rng: random.Random):
        k = self.logic.kind
        if self.logic.is_fuzzy:
            u = rng.random()
            if u < 0.05:
                return 0.0
            if u < 0.10:
                return 1.0
            return rng.random()
        if k is LogicKind.DL2:
            return 0.0 if rng.random() < 0.05 else rng.uniform(-10.0, 0.0)
        if k is LogicKind.STL:
            return rng.uniform(-10.0, 10.0)
        u = rng.random()  # extended reals: finite bulk plus both infinities
        if u < 0.04:
            return XRealCarrier.plus_inf()
        if u < 0.08:
            return XRealCarrier.minus_inf()
        return XReal(rng.uniform(-10.0, 10.0))

    def witnesses(self) -> List:
        if self.logic.is_fuzzy:
            return [0.0, 1 / 3, 0.5, 2 / 3, 1.0]
        if self.logic.kind is LogicKind.DL2:
            return [0.0, -1 / 3, -0.5, -2 / 3, -1.0]
        if self.logic.kind is LogicKind.STL:
            return [-1.0, -1 / 3, 1 / 3, 2 / 3, 1.0]
        return [
            XReal(v) for v in (-1.0, -1 / 3, 0.0, 1 / 3, 1.0)
        ] + [XRealCarrier.plus_inf(), XRealCarrier.minus_inf()]

    # -- comparison -------------------------------------------------------

    def value(self, x) -> float:
        return self.carrier.primal(x)

    def eq(self, a, b, tol: float) -> bool:
        va, vb = self.value(a), self.value(b)
        if va == vb:  # covers matching infinities exactly
            return True
        return abs(va - vb) <= tol

    def leq(self, a, b, tol: float) -> bool:
        va, vb = self.value(a), self.value(b)
        return va <= vb + tol if (va == va) else False


def sample_value(domain: ValueDomain, rng: random.Random):
    return domain.sample(rng)


# ---------------------------------------------------------------------------
# Axiom templates (value level)


def _template(axiom: AxiomId):
    """Return (arity, kind, needed, lhs, rhs); lhs/rhs take (ops, consts, xs)."""
    A = AxiomId
    t = {
        A.R1: (2, "eq", ["and"], lambda o, c, x: o["and"](x[0], x[1]),
               lambda o, c, x: o["and"](x[1], x[0])),
        A.R2: (3, "eq", ["and"],
               lambda o, c, x: o["and"](o["and"](x[0], x[1]), x[2]),
               lambda o, c, x: o["and"](x[0], o["and"](x[1], x[2]))),
        A.R3: (2, "eq", ["or"], lambda o, c, x: o["or"](x[0], x[1]),
               lambda o, c, x: o["or"](x[1], x[0])),
        A.R4: (3, "eq", ["or"],
               lambda o, c, x: o["or"](o["or"](x[0], x[1]), x[2]),
               lambda o, c, x: o["or"](x[0], o["or"](x[1], x[2]))),
        A.R5: (2, "eq", ["and", "or"],
               lambda o, c, x: o["and"](x[0], o["or"](x[0], x[1])),
               lambda o, c, x: x[0]),
        A.R6: (2, "eq", ["and", "or"],
               lambda o, c, x: o["or"](x[0], o["and"](x[0], x[1])),
               lambda o, c, x: x[0]),
        A.R7: (3, "leq", ["and", "or"],
               lambda o, c, x: o["and"](x[0], o["or"](x[1], x[2])),
               lambda o, c, x: o["or"](o["and"](x[0], x[1]),
                                       o["and"](x[0], x[2]))),
        A.R8: (3, "eq", ["mand"],
               lambda o, c, x: o["mand"](o["mand"](x[0], x[1]), x[2]),
               lambda o, c, x: o["mand"](x[0], o["mand"](x[1], x[2]))),
        A.R9: (1, "eq", ["mand", "top"],
               lambda o, c, x: o["mand"](x[0], c["top"]),
               lambda o, c, x: x[0]),
        A.N1: (1, "eq", ["not", "impl", "bottom"],
               lambda o, c, x: o["not"](x[0]),
               lambda o, c, x: o["impl"](x[0], c["bottom"])),
        A.N2: (1, "eq", ["not"],
               lambda o, c, x: o["not"](o["not"](x[0])),
               lambda o, c, x: x[0]),
        A.N3: (2, "eq", ["not", "and", "or"],
               lambda o, c, x: o["not"](o["and"](x[0], x[1])),
               lambda o, c, x: o["or"](o["not"](x[0]), o["not"](x[1]))),
        A.N4: (2, "eq", ["not", "and", "or"],
               lambda o, c, x: o["not"](o["or"](x[0], x[1])),
               lambda o, c, x: o["and"](o["not"](x[0]), o["not"](x[1]))),
        A.M1: (3, "eq", ["mor"],
               lambda o, c, x: o["mor"](o["mor"](x[0], x[1]), x[2]),
               lambda o, c, x: o["mor"](x[0], o["mor"](x[1], x[2]))),
        A.M2: (2, "eq", ["not", "mand", "mor"],
               lambda o, c, x: o["not"](o["mand"](x[0], x[1])),
               lambda o, c, x: o["mor"](o["not"](x[0]), o["not"](x[1]))),
        A.M3: (2, "eq", ["not", "mand", "mor"],
               lambda o, c, x: o["not"](o["mor"](x[0], x[1])),
               lambda o, c, x: o["mand"](o["not"](x[0]), o["not"](x[1]))),
        A.IDEM_MONOID: (1, "eq", ["mand"],
                        lambda o, c, x: o["mand"](x[0], x[0]),
                        lambda o, c, x: x[0]),
    }
    return t[axiom]


def _applicable(domain: ValueDomain, needed: List[str]) -> bool:
    for item in needed:
        if item in ("top", "bottom"):
            if item not in domain.consts:
                return False
        elif item not in domain.ops:
            return False
    return True


def check_axiom_values(
    logic: LogicId,
    axiom: AxiomId,
    n_samples: int = 1000,
    tol: float = 1e-9,
    seed: int = 0,
) -> LawReport:
    if axiom is AxiomId.R10:
        return check_residuation(logic, n_samples, tol, seed)
    domain = ValueDomain(logic)
    arity, kind, needed, lhs, rhs = _template(axiom)
    name = logic.kind.value
    if not _applicable(domain, needed):
        return LawReport(name, axiom.value, 0, "not-applicable", tol)
    rng = random.Random(seed)
    witnesses = domain.witnesses()
    run = 0
    # witness tuples first (constant repetition covers the known failures),
    # then random samples
    streams = [tuple([w] * arity) for w in witnesses]
    for w in witnesses:
        for v in witnesses:
            if arity >= 2:
                streams.append(tuple([w, v] + [w] * (arity - 2)))
    for _ in range(n_samples):
        streams.append(tuple(sample_value(domain, rng) for _ in range(arity)))
    for xs in streams:
        run += 1
        a = lhs(domain.ops, domain.consts, xs)
        b = rhs(domain.ops, domain.consts, xs)
        ok = domain.eq(a, b, tol) if kind == "eq" else domain.leq(a, b, tol)
        if not ok:
            witness = {
                "xs": [domain.value(x) for x in xs],
                "lhs": domain.value(a),
                "rhs": domain.value(b),
            }
            return LawReport(name, axiom.value, run, "counterexample", tol, witness)
    return LawReport(name, axiom.value, run, "pass", tol)


def check_residuation(
    logic: LogicId, n_samples: int = 1000, tol: float = 1e-9, seed: int = 0
) -> LawReport:
    """R10: x (.) y <= z iff y <= x => z, off the decision boundary."""
    domain = ValueDomain(logic)
    name = logic.kind.value
    if not _applicable(domain, ["mand", "impl"]):
        return LawReport(name, AxiomId.R10.value, 0, "not-applicable", tol)
    rng = random.Random(seed)
    ops = domain.ops
    run = 0
    attempts = 0
    while run < n_samples and attempts < 50 * n_samples:
        attempts += 1
        x, y, z = (sample_value(domain, rng) for _ in range(3))
        prod = ops["mand"](x, y)
        resid = ops["impl"](x, z)
        vp, vz = domain.value(prod), domain.value(z)
        vy, vr = domain.value(y), domain.value(resid)
        # resample anything grazing either inequality boundary
        if _near(vp, vz, tol) or _near(vy, vr, tol):
            continue
        run += 1
        if (vp <= vz) != (vy <= vr):
            witness = {
                "x": domain.value(x),
                "y": vy,
                "z": vz,
                "x_mand_y": vp,
                "x_impl_z": vr,
            }
            return LawReport(name, AxiomId.R10.value, run, "counterexample", tol,
                             witness)
    return LawReport(name, AxiomId.R10.value, run, "pass", tol)


def _near(a: float, b: float, tol: float) -> bool:
    if a == b:
        return True
    if not (abs(a) < INF and abs(b) < INF):
        return False
    return abs(a - b) <= tol


# ---------------------------------------------------------------------------
# Formula-level checks


def _formula_template(axiom: AxiomId, profile):
    A = AxiomId
    bot = lambda: BoolConst(False, profile)

    t = {
        A.R1: (2, lambda x: And([x[0], x[1]]), lambda x: And([x[1], x[0]])),
        A.R2: (3, lambda x: And([And([x[0], x[1]]), x[2]]),
               lambda x: And([x[0], And([x[1], x[2]])])),
        A.R3: (2, lambda x: Or([x[0], x[1]]), lambda x: Or([x[1], x[0]])),
        A.R4: (3, lambda x: Or([Or([x[0], x[1]]), x[2]]),
               lambda x: Or([x[0], Or([x[1], x[2]])])),
        A.R5: (2, lambda x: And([x[0], Or([x[0], x[1]])]), lambda x: x[0]),
        A.R6: (2, lambda x: Or([x[0], And([x[0], x[1]])]), lambda x: x[0]),
        A.R8: (3, lambda x: MAnd([MAnd([x[0], x[1]]), x[2]]),
               lambda x: MAnd([x[0], MAnd([x[1], x[2]])])),
        A.N1: (1, lambda x: Not(x[0]), lambda x: Impl(x[0], bot())),
        A.N2: (1, lambda x: Not(Not(x[0])), lambda x: x[0]),
        A.N3: (2, lambda x: Not(And([x[0], x[1]])),
               lambda x: Or([Not(x[0]), Not(x[1])])),
        A.N4: (2, lambda x: Not(Or([x[0], x[1]])),
               lambda x: And([Not(x[0]), Not(x[1])])),
        A.M1: (3, lambda x: MOr([MOr([x[0], x[1]]), x[2]]),
               lambda x: MOr([x[0], MOr([x[1], x[2]])])),
        A.M2: (2, lambda x: Not(MAnd([x[0], x[1]])),
               lambda x: MOr([Not(x[0]), Not(x[1])])),
        A.M3: (2, lambda x: Not(MOr([x[0], x[1]])),
               lambda x: MAnd([Not(x[0]), Not(x[1])])),
        A.IDEM_MONOID: (1, lambda x: MAnd([x[0], x[0]]), lambda x: x[0]),
    }
    return t.get(axiom)


def check_axiom_formulas(
    logic: LogicId,
    axiom: AxiomId,
    depth: int = 2,
    n_samples: int = 100,
    seed: int = 0,
    tol: float = 1e-9,
) -> LawReport:
    """Instantiate axiom metavariables with random closed formulas."""
    if axiom is AxiomId.R10:
        return check_residuation(logic, n_samples, tol, seed)
    name = logic.kind.value
    profile = logic.flag_profile
    tmpl = _formula_template(axiom, profile)
    if tmpl is None:
        return LawReport(name, axiom.value, 0, "not-applicable", tol)
    arity, mk_lhs, mk_rhs = tmpl
    domain = ValueDomain(logic)
    carrier = domain.carrier
    rng = random.Random(seed)
    run = 0
    for _ in range(n_samples):
        xs = [random_formula(profile, depth, rng.getrandbits(48)) for _ in range(arity)]
        try:
            le = mk_lhs(xs)
            re = mk_rhs(xs)
            a = interpret(logic, le, carrier=carrier)
            b = interpret(logic, re, carrier=carrier)
        except (FlagViolation, UndefinedConnective, CarrierError):
            return LawReport(name, axiom.value, run, "not-applicable", tol)
        run += 1
        if not domain.eq(a, b, tol):
            witness = {
                "lhs": domain.value(a),
                "rhs": domain.value(b),
                "formulas": "random instantiation",
            }
            return LawReport(name, axiom.value, run, "counterexample", tol, witness)
    return LawReport(name, axiom.value, run, "pass", tol)


# ---------------------------------------------------------------------------
# The full matrix


GROUPS = {
    "R1-10": [AxiomId[f"R{i}"] for i in range(1, 11)],
    "N1": [AxiomId.N1],
    "N2-4": [AxiomId.N2, AxiomId.N3, AxiomId.N4],
    "M1-3": [AxiomId.M1, AxiomId.M2, AxiomId.M3],
    "Idem": [AxiomId.IDEM_MONOID],
}

# expected group verdicts (yes = every member axiom passes)
EXPECTED_MATRIX = {
    "goedel": {"R1-10": "yes", "N1": "yes", "N2-4": "no", "M1-3": "yes",
               "Idem": "yes"},
    "lukasiewicz": {"R1-10": "yes", "N1": "yes", "N2-4": "yes", "M1-3": "yes",
                    "Idem": "no"},
    # M2/M3 genuinely fail under the published negation and strong
    # disjunction clauses (witness x = y = 1/3, r = 2), even though the
    # source tables claim a monoidal dual; we report what the clauses do.
    "yager": {"R1-10": "yes", "N1": "yes", "N2-4": "yes", "M1-3": "no",
              "Idem": "no"},
    "product": {"R1-10": "yes", "N1": "yes", "N2-4": "no", "M1-3": "yes",
                "Idem": "no"},
    "dl2": {"R1-10": "yes", "N1": "no", "N2-4": "no", "M1-3": "no",
            "Idem": "no"},
    "stl": {"R1-10": "no", "N1": "no", "N2-4": "yes", "M1-3": "no",
            "Idem": "yes"},
    "stl-inf": {"R1-10": "yes", "N1": "no", "N2-4": "yes", "M1-3": "yes",
                "Idem": "yes"},
}


def matrix_logics() -> List[LogicId]:
    from .core import ALL_FUZZY, DL2, STL_INFTY, stl

    return list(ALL_FUZZY) + [DL2, stl(1.0), STL_INFTY]


def table3_matrix(seed: int = 0, n_samples: int = 1000, tol: float = 1e-9) -> dict:
    """Verdict for every (logic x axiom) cell plus Table-style group cells."""
    cells: Dict[str, Dict[str, LawReport]] = {}
    groups: Dict[str, Dict[str, str]] = {}
    for logic in matrix_logics():
        name = logic.kind.value
        cells[name] = {}
        for axiom in AxiomId:
            rep = check_axiom_values(logic, axiom, n_samples, tol, seed)
            cells[name][axiom.value] = rep
        groups[name] = {}
        for gname, members in GROUPS.items():
            verdicts = [cells[name][m.value].verdict for m in members]
            groups[name][gname] = "yes" if all(v == "pass" for v in verdicts) else "no"
    return {
        "version": "dlc-report/1",
        "kind": "law-matrix",
        "seed": seed,
        "samples": n_samples,
        "tol": tol,
        "cells": {
            lg: {ax: rep.to_json() for ax, rep in row.items()}
            for lg, row in cells.items()
        },
        "groups": groups,
    }


def render_matrix(matrix: dict) -> str:
    """Plain-text table of the group verdicts."""
    names = list(matrix["groups"].keys())
    headers = list(GROUPS.keys())
    width = max(len(n) for n in names) + 2
    lines = [" " * width + "  ".join(f"{h:>6}" for h in headers)]
    for n in names:
        row = matrix["groups"][n]
        lines.append(
            f"{n:<{width}}" + "  ".join(f"{row[h]:>6}" for h in headers)
        )
    return "\n".join(lines)
