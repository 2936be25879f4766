"""Formula evaluation over birelational models.

Truth clauses at a world w:

  * atoms: w in V(P); falsum: w fallible;
  * and/or pointwise;
  * implication: every <=-successor forcing the antecedent forces the
    consequent;
  * box: all R-successors of all <=-successors force the body;
  * diamond (guarded clause, the implemented semantics): every
    <=-successor of w has an R-successor forcing the body.

``eval_diamond_unguarded`` evaluates with the classical existential
diamond clause instead (throughout the formula); on forward-confluent
models the two evaluators agree.

Formulas are compiled to postfix programs and evaluated for all worlds
at once as bitmasks, over batches of models, by the selected kernel
(compiled extension or pure Python; see ckkit._kernel).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _kernel
from .formula import And, Atom, Box, Diamond, Falsum, Formula, Implies, Or
from .kripke import KripkeModel, PackedModel

__all__ = [
    "Program",
    "compile_formula",
    "eval_packed",
    "eval_packed_batch",
    "EvalContext",
    "eval_formula",
    "eval",
    "valid_in_model",
    "eval_diamond_unguarded",
    "truth_mask",
]

MAX_WORLDS = 63
MAX_STACK = 64

OP_ATOM = 0
OP_FALSUM = 1
OP_AND = 2
OP_OR = 3
OP_IMP = 4
OP_BOX = 5
OP_DIA = 6
OP_DIAC = 7


@dataclass(frozen=True)
class Program:
    ops: np.ndarray
    args: np.ndarray
    stack_need: int


def compile_formula(
    f: Formula, prop_index: Mapping[str, int], classical_diamond: bool = False
) -> Program:
    """Postfix-compile f; atoms missing from prop_index read the fallible mask."""
    ops: list[int] = []
    args: list[int] = []
    depth = 0
    max_depth = 0

    def emit(op: int, arg: int = 0, pop: int = 0) -> None:
        nonlocal depth, max_depth
        ops.append(op)
        args.append(arg)
        depth += 1 - pop
        max_depth = max(max_depth, depth)

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            emit(OP_ATOM, prop_index.get(g.name, -1))
        elif isinstance(g, Falsum):
            emit(OP_FALSUM)
        elif isinstance(g, And):
            walk(g.left)
            walk(g.right)
            emit(OP_AND, pop=2)
        elif isinstance(g, Or):
            walk(g.left)
            walk(g.right)
            emit(OP_OR, pop=2)
        elif isinstance(g, Implies):
            walk(g.left)
            walk(g.right)
            emit(OP_IMP, pop=2)
        elif isinstance(g, Box):
            walk(g.inner)
            emit(OP_BOX, pop=1)
        elif isinstance(g, Diamond):
            walk(g.inner)
            emit(OP_DIAC if classical_diamond else OP_DIA, pop=1)
        else:
            raise TypeError(f"not a formula: {g!r}")

    walk(f)
    return Program(
        ops=np.asarray(ops, dtype=np.int32),
        args=np.asarray(args, dtype=np.int32),
        stack_need=max_depth,
    )


def _pack_arrays(models: Sequence[PackedModel]):
    n = models[0].n
    nprops = len(models[0].props)
    count = len(models)
    up = np.empty((count, n), dtype=np.uint64)
    rel = np.empty((count, n), dtype=np.uint64)
    fal = np.empty(count, dtype=np.uint64)
    vals = np.empty((count, max(nprops, 1)), dtype=np.uint64)
    for i, pm in enumerate(models):
        up[i, :] = pm.up
        rel[i, :] = pm.rel
        fal[i] = pm.fallible
        for k in range(nprops):
            vals[i, k] = pm.vals[k]
    return up, rel, fal, vals


def eval_packed_batch(
    models: Sequence[PackedModel], f: Formula, classical_diamond: bool = False
) -> np.ndarray:
    """Truth masks of f over a batch of models sharing world count and props."""
    if not models:
        return np.empty(0, dtype=np.uint64)
    n = models[0].n
    props = models[0].props
    if any(pm.n != n or pm.props != props for pm in models):
        raise ValueError("batch models must share world count and proposition list")
    if n > MAX_WORLDS:
        raise ValueError(f"at most {MAX_WORLDS} worlds supported")
    prog = compile_formula(f, {p: k for k, p in enumerate(props)}, classical_diamond)
    up, rel, fal, vals = _pack_arrays(models)
    out = np.empty(len(models), dtype=np.uint64)
    kernel = _kernel.eval_programs
    if prog.stack_need > MAX_STACK and _kernel.BACKEND == "compiled":
        from ._kernel import _evalpy

        kernel = _evalpy.eval_programs
    kernel(prog.ops, prog.args, n, up, rel, fal, vals, out)
    return out


def eval_packed(pm: PackedModel, f: Formula, classical_diamond: bool = False) -> int:
    """Truth mask of f over a single packed model."""
    return int(eval_packed_batch([pm], f, classical_diamond)[0])


class EvalContext:
    """Memoized evaluation against one immutable model.

    Truth masks are cached per (formula, diamond clause); entries never
    change once written, so contexts can be shared between readers.
    """

    def __init__(self, model: KripkeModel):
        self.model = model
        self._packed = model.packed
        self._memo: dict[tuple[Formula, bool], int] = {}

    def mask(self, f: Formula, classical_diamond: bool = False) -> int:
        key = (f, classical_diamond)
        cached = self._memo.get(key)
        if cached is None:
            cached = eval_packed(self._packed, f, classical_diamond)
            self._memo[key] = cached
        return cached

    def eval(self, world: str, f: Formula, classical_diamond: bool = False) -> bool:
        i = self.model.index(world)
        return bool((self.mask(f, classical_diamond) >> i) & 1)

    def valid(self, f: Formula, classical_diamond: bool = False) -> bool:
        full = (1 << self._packed.n) - 1
        return self.mask(f, classical_diamond) == full


def truth_mask(m: KripkeModel, f: Formula, classical_diamond: bool = False) -> int:
    return eval_packed(m.packed, f, classical_diamond)


def eval_formula(m: KripkeModel, world: str, f: Formula) -> bool:
    """Truth of f at a world, guarded diamond clause."""
    i = m.index(world)
    return bool((truth_mask(m, f) >> i) & 1)


# public alias; shadows the builtin only inside this module's namespace
eval = eval_formula


def valid_in_model(m: KripkeModel, f: Formula) -> bool:
    """True iff f holds at every world of m."""
    return truth_mask(m, f) == (1 << len(m.worlds)) - 1


def eval_diamond_unguarded(m: KripkeModel, world: str, f: Formula) -> bool:
    """Truth of f at a world with the classical (existential) diamond clause."""
    i = m.index(world)
    return bool((truth_mask(m, f, classical_diamond=True) >> i) & 1)
