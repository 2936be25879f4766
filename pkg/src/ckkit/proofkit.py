"""Hilbert-style proof checking for CK, CKB, IK and IKB.

A proof script is a numbered sequence of steps, each of which is an
intuitionistic tautology (decided by ``ipc_valid``), an axiom-schema
instance, modus ponens, or necessitation.  ``check_proof`` accepts a
script iff every step discharges its side condition and the last step
proves the declared goal; rejection names the first failing step.

``ipc_valid`` decides intuitionistic propositional validity by
contraction-free backward proof search (Dyckhoff's G4ip calculus).  Box
and diamond subformulas are treated as opaque atoms, identical
subformulas sharing one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from .axioms import logic_axioms, metavariables, schema
from .formula import (
    And,
    Atom,
    Box,
    Diamond,
    FALSE,
    Falsum,
    Formula,
    Implies,
    Or,
    parse,
    render,
    substitute,
)

__all__ = [
    "ipc_valid",
    "Taut",
    "AxiomInst",
    "MP",
    "Nec",
    "ProofStep",
    "ProofScript",
    "Verdict",
    "check_proof",
    "builtin_scripts",
    "parse_proof_script",
    "load_proof_script",
    "ProofFormatError",
]


# ---------------------------------------------------------------------------
# intuitionistic propositional validity (G4ip)

def _atomic(f: Formula) -> bool:
    # Box/Diamond subformulas are opaque atoms for the propositional search
    return isinstance(f, (Atom, Box, Diamond))


_memo: dict[tuple[frozenset, Formula], bool] = {}


def _prove(gamma: frozenset, goal: Formula) -> bool:
    key = (gamma, goal)
    cached = _memo.get(key)
    if cached is not None:
        return cached
    result = _prove_uncached(set(gamma), goal)
    _memo[key] = result
    return result


def _prove_uncached(gamma: set, goal: Formula) -> bool:
    # Saturate with invertible rules first.
    while True:
        if FALSE in gamma or goal in gamma:
            return True
        if isinstance(goal, And):
            g = frozenset(gamma)
            return _prove(g, goal.left) and _prove(g, goal.right)
        if isinstance(goal, Implies):
            return _prove(frozenset(gamma | {goal.left}), goal.right)
        progress = False
        for f in list(gamma):
            if isinstance(f, And):
                gamma.remove(f)
                gamma.add(f.left)
                gamma.add(f.right)
                progress = True
                break
            if isinstance(f, Or):
                gamma.remove(f)
                return _prove(frozenset(gamma | {f.left}), goal) and _prove(
                    frozenset(gamma | {f.right}), goal
                )
            if isinstance(f, Implies):
                a = f.left
                if isinstance(a, Falsum):
                    # falsum is never in gamma here, so this hypothesis is inert
                    gamma.remove(f)
                    progress = True
                    break
                if a in gamma:
                    gamma.remove(f)
                    gamma.add(f.right)
                    progress = True
                    break
                if isinstance(a, And):
                    gamma.remove(f)
                    gamma.add(Implies(a.left, Implies(a.right, f.right)))
                    progress = True
                    break
                if isinstance(a, Or):
                    gamma.remove(f)
                    gamma.add(Implies(a.left, f.right))
                    gamma.add(Implies(a.right, f.right))
                    progress = True
                    break
        if not progress:
            break
    # Non-invertible choices.
    if isinstance(goal, Or):
        g = frozenset(gamma)
        if _prove(g, goal.left) or _prove(g, goal.right):
            return True
    for f in gamma:
        if isinstance(f, Implies) and isinstance(f.left, Implies):
            rest = frozenset(gamma - {f})
            nested = f.left
            if _prove(rest | {Implies(nested.right, f.right)}, nested) and _prove(
                rest | {f.right}, goal
            ):
                return True
    return False


def ipc_valid(f: Formula) -> bool:
    """Intuitionistic propositional validity, modal subformulas as atoms."""
    return _prove(frozenset(), f)


# ---------------------------------------------------------------------------
# proof scripts

@dataclass(frozen=True)
class Taut:
    formula: Formula


@dataclass(frozen=True)
class AxiomInst:
    name: str
    assignment: Mapping[str, Formula]
    formula: Formula

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))


@dataclass(frozen=True)
class MP:
    i: int
    j: int
    formula: Formula


@dataclass(frozen=True)
class Nec:
    i: int
    formula: Formula


ProofStep = Union[Taut, AxiomInst, MP, Nec]


@dataclass(frozen=True)
class ProofScript:
    logic: str
    steps: tuple[ProofStep, ...]
    goal: Formula


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    step: int | None = None
    reason: str | None = None

    def __str__(self) -> str:
        if self.accepted:
            return "ACCEPTED"
        return f"REJECTED step {self.step}: {self.reason}"


def check_proof(s: ProofScript) -> Verdict:
    """Check every step of a script; reject at the first failing step."""
    if s.logic not in ("CK", "CKB", "IK", "IKB"):
        return Verdict(False, 0, f"unknown logic {s.logic!r}")
    admissible = logic_axioms(s.logic)
    if not s.steps:
        return Verdict(False, 0, "empty proof")
    for k, step in enumerate(s.steps, start=1):
        if isinstance(step, Taut):
            if not ipc_valid(step.formula):
                return Verdict(False, k, f"'{render(step.formula)}' is not an intuitionistic tautology")
        elif isinstance(step, AxiomInst):
            try:
                sch = schema(step.name)
            except KeyError:
                return Verdict(False, k, f"unknown axiom schema {step.name!r}")
            if step.name not in admissible:
                return Verdict(False, k, f"axiom {step.name} is not admissible in {s.logic}")
            expected = substitute(sch.shape, step.assignment)
            if expected != step.formula:
                return Verdict(
                    False, k,
                    f"formula does not match the {step.name} instance "
                    f"'{render(expected)}'",
                )
            if any(v not in metavariables(sch) for v in step.assignment):
                return Verdict(False, k, f"assignment names a metavariable {step.name} does not have")
        elif isinstance(step, MP):
            for idx in (step.i, step.j):
                if not 1 <= idx < k:
                    return Verdict(False, k, f"step index {idx} does not refer strictly backwards")
            minor = s.steps[step.i - 1].formula
            major = s.steps[step.j - 1].formula
            if not isinstance(major, Implies) or major.left != minor or major.right != step.formula:
                return Verdict(
                    False, k,
                    f"modus ponens shape mismatch: step {step.j} must prove "
                    f"'{render(minor)} -> {render(step.formula)}'",
                )
        elif isinstance(step, Nec):
            if not 1 <= step.i < k:
                return Verdict(False, k, f"step index {step.i} does not refer strictly backwards")
            if step.formula != Box(s.steps[step.i - 1].formula):
                return Verdict(False, k, "necessitation must box the premise formula")
        else:
            return Verdict(False, k, f"unknown step kind {type(step).__name__}")
    last = s.steps[-1].formula
    if last != s.goal:
        return Verdict(False, len(s.steps), "last step does not prove the goal")
    return Verdict(True)


def builtin_scripts() -> dict[str, ProofScript]:
    """Shipped proof scripts, keyed by name.

    ``n_in_ckb`` derives the axiom N (no diamond-falsum) inside CKB from
    K-dia and B-dia.
    """
    f = parse
    n_in_ckb = ProofScript(
        logic="CKB",
        goal=f("<> false -> false"),
        steps=(
            Taut(f("false -> [] false")),
            Nec(1, f("[] (false -> [] false)")),
            AxiomInst(
                "K_DIA",
                {"A": FALSE, "B": Box(FALSE)},
                f("[] (false -> [] false) -> (<> false -> <> [] false)"),
            ),
            MP(2, 3, f("<> false -> <> [] false")),
            AxiomInst("B_DIA", {"A": FALSE}, f("<> [] false -> false")),
            Taut(f("(<> false -> <> [] false) -> ((<> [] false -> false) -> (<> false -> false))")),
            MP(4, 6, f("(<> [] false -> false) -> (<> false -> false)")),
            MP(5, 7, f("<> false -> false")),
        ),
    )
    return {"n_in_ckb": n_in_ckb}


# ---------------------------------------------------------------------------
# proof file format

class ProofFormatError(ValueError):
    pass


_STEP_RE = re.compile(r"^(\d+)\.\s+(taut|axiom|mp|nec)\s+(.*)$")
_AXIOM_RE = re.compile(r"^(\w+)\s*\{([^}]*)\}\s*(.*)$")


def parse_proof_script(text: str) -> ProofScript:
    """Parse the line-oriented proof script format.

    Header lines ``logic:`` and ``goal:``, then numbered steps::

        k. taut <formula>
        k. axiom NAME {A=<formula>; B=<formula>} <formula>
        k. mp i j <formula>
        k. nec i <formula>
    """
    logic: str | None = None
    goal: Formula | None = None
    steps: list[ProofStep] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("logic:"):
            logic = line.partition(":")[2].strip()
            continue
        if line.startswith("goal:"):
            goal = parse(line.partition(":")[2].strip())
            continue
        m = _STEP_RE.match(line)
        if m is None:
            raise ProofFormatError(f"line {lineno}: cannot parse step {line!r}")
        number, kind, rest = int(m.group(1)), m.group(2), m.group(3).strip()
        if number != len(steps) + 1:
            raise ProofFormatError(f"line {lineno}: expected step {len(steps) + 1}, got {number}")
        if kind == "taut":
            steps.append(Taut(parse(rest)))
        elif kind == "axiom":
            am = _AXIOM_RE.match(rest)
            if am is None:
                raise ProofFormatError(f"line {lineno}: cannot parse axiom step")
            assignment: dict[str, Formula] = {}
            body = am.group(2).strip()
            if body:
                for entry in body.split(";"):
                    var, eq, ftext = entry.partition("=")
                    if not eq:
                        raise ProofFormatError(f"line {lineno}: bad assignment entry {entry!r}")
                    assignment[var.strip()] = parse(ftext)
            steps.append(AxiomInst(am.group(1), assignment, parse(am.group(3))))
        elif kind == "mp":
            parts = rest.split(None, 2)
            if len(parts) != 3:
                raise ProofFormatError(f"line {lineno}: mp needs two indices and a formula")
            steps.append(MP(int(parts[0]), int(parts[1]), parse(parts[2])))
        else:  # nec
            parts = rest.split(None, 1)
            if len(parts) != 2:
                raise ProofFormatError(f"line {lineno}: nec needs an index and a formula")
            steps.append(Nec(int(parts[0]), parse(parts[1])))
    if logic is None:
        raise ProofFormatError("missing 'logic:' header")
    if goal is None:
        raise ProofFormatError("missing 'goal:' header")
    return ProofScript(logic=logic, steps=tuple(steps), goal=goal)


def load_proof_script(path) -> ProofScript:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_proof_script(fh.read())
