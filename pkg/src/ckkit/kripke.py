"""Birelational Kripke models with fallible worlds.

A model is a tuple (W, W_bot, <=, R, V): a nonempty set of worlds, a
subset of fallible worlds, a reflexive-transitive intuitionistic order,
a modal relation, and a monotone valuation.  Well-formedness conditions:

  * <= is reflexive and transitive;
  * w <= v and w in V(P) implies v in V(P)        (monotonicity);
  * W_bot is a subset of V(P) for every P          (saturation);
  * w in W_bot and (w <= v or w R v) implies v in W_bot  (fallible closure).

``validate_model`` checks all of this and reports every violation, not
just the first.  ``frame_report`` computes symmetry and the two
confluence conditions and derives class membership (CK/CKB/IK/IKB).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterator, Mapping

__all__ = [
    "KripkeModel",
    "PackedModel",
    "ModelDescription",
    "ModelValidationError",
    "FrameReport",
    "validate_model",
    "model_violations",
    "frame_report",
    "figure2_model",
    "figure2_description",
    "parse_model_description",
    "load_model",
    "format_model",
    "export_dot",
    "bits",
    "transitive_closure",
    "is_symmetric",
    "is_forward_confluent",
    "is_backward_confluent",
]

CLASS_NAMES = ("CK", "CKB", "IK", "IKB")


# ---------------------------------------------------------------------------
# bitmask helpers (shared with search and semantics)

def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def transitive_closure(rows: list[int]) -> list[int]:
    """Transitive closure of a relation given as successor bitmask rows."""
    rows = list(rows)
    n = len(rows)
    for k in range(n):
        bk = 1 << k
        for i in range(n):
            if rows[i] & bk:
                rows[i] |= rows[k]
    return rows


def _in_rows(rows: tuple[int, ...] | list[int]) -> list[int]:
    """Predecessor rows: _in_rows(r)[v] = {w : v in r[w]}."""
    n = len(rows)
    cols = [0] * n
    for w in range(n):
        for v in bits(rows[w]):
            cols[v] |= 1 << w
    return cols


def is_symmetric(rel: tuple[int, ...] | list[int]) -> bool:
    n = len(rel)
    for w in range(n):
        for v in bits(rel[w]):
            if not (rel[v] >> w) & 1:
                return False
    return True


def is_forward_confluent(up: tuple[int, ...] | list[int], rel: tuple[int, ...] | list[int]) -> bool:
    """w R v and w <= w' implies some v' with v <= v' and w' R v'."""
    n = len(up)
    for w in range(n):
        rw = rel[w]
        if not rw:
            continue
        for wp in bits(up[w]):
            rwp = rel[wp]
            for v in bits(rw):
                if not (rwp & up[v]):
                    return False
    return True


def is_backward_confluent(up: tuple[int, ...] | list[int], rel: tuple[int, ...] | list[int]) -> bool:
    """w R v and v <= v' implies some w' with w <= w' and w' R v'."""
    n = len(up)
    rin = _in_rows(rel)
    for w in range(n):
        for v in bits(rel[w]):
            uw = up[w]
            for vp in bits(up[v]):
                if not (uw & rin[vp]):
                    return False
    return True


# ---------------------------------------------------------------------------
# models

@dataclass(frozen=True)
class PackedModel:
    """Bitmask encoding of a model over worlds indexed 0..n-1.

    up[i] is the mask of <=-successors of world i (including i itself),
    rel[i] the mask of R-successors, fallible the mask of fallible worlds,
    vals[k] the extension of props[k].
    """

    n: int
    up: tuple[int, ...]
    rel: tuple[int, ...]
    fallible: int
    props: tuple[str, ...]
    vals: tuple[int, ...]
    names: tuple[str, ...] = ()

    def world_names(self) -> tuple[str, ...]:
        if self.names:
            return self.names
        return tuple(f"w{i + 1}" for i in range(self.n))

    def to_model(self) -> "KripkeModel":
        names = self.world_names()
        order = frozenset(
            (names[i], names[j]) for i in range(self.n) for j in bits(self.up[i])
        )
        relation = frozenset(
            (names[i], names[j]) for i in range(self.n) for j in bits(self.rel[i])
        )
        valuation = {
            p: frozenset(names[j] for j in bits(mask))
            for p, mask in zip(self.props, self.vals)
        }
        return KripkeModel(
            worlds=names,
            fallible=frozenset(names[j] for j in bits(self.fallible)),
            order=order,
            relation=relation,
            valuation=valuation,
        )


@dataclass(frozen=True)
class KripkeModel:
    """A validated model.  Immutable; all queries are pure."""

    worlds: tuple[str, ...]
    fallible: frozenset[str]
    order: frozenset[tuple[str, str]]
    relation: frozenset[tuple[str, str]]
    valuation: Mapping[str, frozenset[str]]

    def index(self, world: str) -> int:
        try:
            return self.worlds.index(world)
        except ValueError:
            raise KeyError(f"unknown world {world!r}") from None

    @cached_property
    def packed(self) -> PackedModel:
        idx = {w: i for i, w in enumerate(self.worlds)}
        n = len(self.worlds)
        up = [0] * n
        rel = [0] * n
        for a, b in self.order:
            up[idx[a]] |= 1 << idx[b]
        for a, b in self.relation:
            rel[idx[a]] |= 1 << idx[b]
        fal = 0
        for w in self.fallible:
            fal |= 1 << idx[w]
        props = tuple(sorted(self.valuation))
        vals = tuple(
            sum(1 << idx[w] for w in self.valuation[p]) for p in props
        )
        return PackedModel(
            n=n, up=tuple(up), rel=tuple(rel), fallible=fal,
            props=props, vals=vals, names=self.worlds,
        )

    def description(self) -> "ModelDescription":
        return ModelDescription(
            worlds=self.worlds,
            fallible=tuple(sorted(self.fallible)),
            order_pairs=tuple(sorted(self.order)),
            rel_pairs=tuple(sorted(self.relation)),
            valuation={p: tuple(sorted(ws)) for p, ws in self.valuation.items()},
            close_order=False,
        )


@dataclass(frozen=True)
class ModelDescription:
    """Raw, unvalidated model data as read from a .km file or built by hand."""

    worlds: tuple[str, ...]
    fallible: tuple[str, ...] = ()
    order_pairs: tuple[tuple[str, str], ...] = ()
    rel_pairs: tuple[tuple[str, str], ...] = ()
    valuation: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    close_order: bool = True


class ModelValidationError(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("model is not well-formed:\n  " + "\n  ".join(self.violations))


def model_violations(desc: ModelDescription) -> list[str]:
    """All well-formedness violations of a model description (empty if valid)."""
    violations: list[str] = []
    if not desc.worlds:
        return ["empty world set"]
    seen: set[str] = set()
    for w in desc.worlds:
        if w in seen:
            violations.append(f"duplicate world {w!r}")
        seen.add(w)
    known = set(desc.worlds)

    def check_world(w: str, where: str) -> bool:
        if w not in known:
            violations.append(f"unknown world {w!r} in {where}")
            return False
        return True

    for w in desc.fallible:
        check_world(w, "fallible set")
    for a, b in desc.order_pairs:
        check_world(a, "intuitionistic order")
        check_world(b, "intuitionistic order")
    for a, b in desc.rel_pairs:
        check_world(a, "modal relation")
        check_world(b, "modal relation")
    for p, ws in desc.valuation.items():
        for w in ws:
            check_world(w, f"valuation of {p}")
    if violations:
        return violations

    idx = {w: i for i, w in enumerate(desc.worlds)}
    n = len(desc.worlds)
    up = [1 << i for i in range(n)] if desc.close_order else [0] * n
    for a, b in desc.order_pairs:
        up[idx[a]] |= 1 << idx[b]
    if desc.close_order:
        up = transitive_closure(up)
    else:
        for i in range(n):
            if not (up[i] >> i) & 1:
                violations.append(f"order not reflexive at {desc.worlds[i]!r}")
        closed = transitive_closure(list(up))
        for i in range(n):
            extra = closed[i] & ~up[i]
            for j in bits(extra):
                violations.append(
                    f"order not transitive: {desc.worlds[i]!r} reaches {desc.worlds[j]!r} indirectly only"
                )
    rel = [0] * n
    for a, b in desc.rel_pairs:
        rel[idx[a]] |= 1 << idx[b]
    fal = 0
    for w in desc.fallible:
        fal |= 1 << idx[w]

    for p in sorted(desc.valuation):
        vmask = 0
        for w in desc.valuation[p]:
            vmask |= 1 << idx[w]
        for i in bits(vmask):
            for j in bits(up[i] & ~vmask):
                violations.append(
                    f"valuation not monotone: {desc.worlds[i]!r} <= {desc.worlds[j]!r} "
                    f"but only {desc.worlds[i]!r} is in V({p})"
                )
        for i in bits(fal & ~vmask):
            violations.append(
                f"fallible world {desc.worlds[i]!r} missing from V({p})"
            )
    for i in bits(fal):
        for j in bits((up[i] | rel[i]) & ~fal):
            violations.append(
                f"fallible set not closed: {desc.worlds[i]!r} reaches non-fallible {desc.worlds[j]!r}"
            )
    return violations


def validate_model(desc: ModelDescription) -> KripkeModel:
    """Validate a description, raising ModelValidationError listing every violation."""
    violations = model_violations(desc)
    if violations:
        raise ModelValidationError(violations)
    idx = {w: i for i, w in enumerate(desc.worlds)}
    n = len(desc.worlds)
    up = [1 << i for i in range(n)]
    for a, b in desc.order_pairs:
        up[idx[a]] |= 1 << idx[b]
    up = transitive_closure(up)
    order = frozenset(
        (desc.worlds[i], desc.worlds[j]) for i in range(n) for j in bits(up[i])
    )
    return KripkeModel(
        worlds=tuple(desc.worlds),
        fallible=frozenset(desc.fallible),
        order=order,
        relation=frozenset(desc.rel_pairs),
        valuation={p: frozenset(ws) for p, ws in desc.valuation.items()},
    )


# ---------------------------------------------------------------------------
# frame reports

@dataclass(frozen=True)
class FrameReport:
    symmetric: bool
    forward_confluent: bool
    backward_confluent: bool
    fallible_r_back_closed: bool
    classes: frozenset[str]


def frame_report(m: KripkeModel) -> FrameReport:
    """Frame properties by exhaustive quantifier checking, plus class membership."""
    pm = m.packed
    sym = is_symmetric(pm.rel)
    fwd = is_forward_confluent(pm.up, pm.rel)
    bwd = is_backward_confluent(pm.up, pm.rel)
    back_closed = all(
        not (pm.fallible >> v) & 1 or (pm.fallible >> w) & 1
        for w in range(pm.n)
        for v in bits(pm.rel[w])
    )
    no_fallible = pm.fallible == 0
    classes = {"CK"}
    if sym and fwd and bwd:
        classes.add("CKB")
    if no_fallible and fwd and bwd:
        classes.add("IK")
    if sym and fwd and bwd and no_fallible:
        classes.add("IKB")
    return FrameReport(
        symmetric=sym,
        forward_confluent=fwd,
        backward_confluent=bwd,
        fallible_r_back_closed=back_closed,
        classes=frozenset(classes),
    )


# ---------------------------------------------------------------------------
# golden model

def figure2_description() -> ModelDescription:
    """Three worlds w, v, v2; R symmetric between w and v; v below v2.

    The order is the identity plus (v, v2): the all-pairs order would break
    valuation monotonicity for V(p) = {w}.
    """
    return ModelDescription(
        worlds=("w", "v", "v2"),
        fallible=(),
        order_pairs=(("v", "v2"),),
        rel_pairs=(("w", "v"), ("v", "w")),
        valuation={"p": ("w",)},
        close_order=True,
    )


def figure2_model() -> KripkeModel:
    return validate_model(figure2_description())


# ---------------------------------------------------------------------------
# file format

class ModelFormatError(ValueError):
    pass


def parse_model_description(text: str) -> ModelDescription:
    """Parse the line-oriented .km model format.

    Keys: worlds, fallible, preceq, preceq-closure, rel, val.  Lines
    starting with '#' are comments; unknown keys are errors.
    """
    worlds: tuple[str, ...] = ()
    fallible: tuple[str, ...] = ()
    order_pairs: list[tuple[str, str]] = []
    rel_pairs: list[tuple[str, str]] = []
    valuation: dict[str, tuple[str, ...]] = {}
    close_order = True
    saw_worlds = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ModelFormatError(f"line {lineno}: expected 'key: value', got {line!r}")
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "worlds":
            worlds = tuple(value.split())
            saw_worlds = True
        elif key == "fallible":
            fallible = tuple(value.split())
        elif key == "preceq":
            for item in value.split():
                if "<=" not in item:
                    raise ModelFormatError(f"line {lineno}: bad preceq pair {item!r}")
                a, _, b = item.partition("<=")
                order_pairs.append((a, b))
        elif key == "preceq-closure":
            if value not in ("on", "off"):
                raise ModelFormatError(f"line {lineno}: preceq-closure must be on or off")
            close_order = value == "on"
        elif key == "rel":
            for item in value.split():
                if "~" not in item:
                    raise ModelFormatError(f"line {lineno}: bad rel pair {item!r}")
                a, _, b = item.partition("~")
                rel_pairs.append((a, b))
        elif key == "val":
            if "=" not in value:
                raise ModelFormatError(f"line {lineno}: expected 'val: P = worlds...'")
            prop, _, ws = value.partition("=")
            prop = prop.strip()
            if not prop:
                raise ModelFormatError(f"line {lineno}: missing proposition name")
            if prop in valuation:
                raise ModelFormatError(f"line {lineno}: duplicate valuation for {prop!r}")
            valuation[prop] = tuple(ws.split())
        else:
            raise ModelFormatError(f"line {lineno}: unknown key {key!r}")
    if not saw_worlds:
        raise ModelFormatError("missing 'worlds:' line")
    return ModelDescription(
        worlds=worlds,
        fallible=fallible,
        order_pairs=tuple(order_pairs),
        rel_pairs=tuple(rel_pairs),
        valuation=valuation,
        close_order=close_order,
    )


def load_model(path, close_order: bool | None = None) -> KripkeModel:
    """Read, parse and validate a .km file; close_order overrides the file directive."""
    with open(path, "r", encoding="utf-8") as fh:
        desc = parse_model_description(fh.read())
    if close_order is not None:
        desc = replace(desc, close_order=close_order)
    return validate_model(desc)


def format_model(m: KripkeModel) -> str:
    """Serialize a model in the .km format; round-trips through parse + validate."""
    lines = [
        "worlds: " + " ".join(m.worlds),
        "fallible: " + " ".join(w for w in m.worlds if w in m.fallible),
        "preceq-closure: on",
        "preceq: " + " ".join(
            f"{a}<={b}" for a, b in sorted(m.order) if a != b
        ),
        "rel: " + " ".join(f"{a}~{b}" for a, b in sorted(m.relation)),
    ]
    for p in sorted(m.valuation):
        members = [w for w in m.worlds if w in m.valuation[p]]
        lines.append(f"val: {p} = " + " ".join(members))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DOT export

def _order_cover_edges(m: KripkeModel) -> list[tuple[str, str]]:
    """Dashed edges to draw for <=: transitive reduction, cycles kept as cycles."""
    pm = m.packed
    names = m.worlds
    n = pm.n
    # equivalence classes of mutual <=
    cls_of: dict[int, int] = {}
    classes: list[list[int]] = []
    for i in range(n):
        for j in range(i):
            if (pm.up[i] >> j) & 1 and (pm.up[j] >> i) & 1:
                cls_of[i] = cls_of[j]
                classes[cls_of[j]].append(i)
                break
        else:
            cls_of[i] = len(classes)
            classes.append([i])
    edges: list[tuple[str, str]] = []
    for members in classes:
        if len(members) > 1:
            ring = sorted(members)
            for a, b in zip(ring, ring[1:] + ring[:1]):
                edges.append((names[a], names[b]))
    # strict order on class representatives
    reps = [min(members) for members in classes]
    below = {
        (a, b)
        for a in range(len(reps))
        for b in range(len(reps))
        if a != b and (pm.up[reps[a]] >> reps[b]) & 1
    }
    for a, b in sorted(below):
        if not any((a, c) in below and (c, b) in below for c in range(len(reps))):
            edges.append((names[reps[a]], names[reps[b]]))
    return edges


def export_dot(m: KripkeModel) -> str:
    """DOT graph: fallible worlds double-circled, <= dashed (reduced), R solid."""
    lines = ["digraph model {"]
    for w in m.worlds:
        shape = "doublecircle" if w in m.fallible else "circle"
        lines.append(f'  "{w}" [shape={shape}];')
    for a, b in _order_cover_edges(m):
        lines.append(f'  "{a}" -> "{b}" [style=dashed];')
    for a, b in sorted(m.relation):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
