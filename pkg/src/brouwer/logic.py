"""Stage-modal propositional logic over finite stage trees.

Language: atoms (optionally flagged lawlike with a '!' suffix), _|_,
&, |, -> (right-associative), the stage modality [n] ("settled n stages
from now") and <*> ("settled at some future stage"). ~p abbreviates
p -> _|_. Operands of [n] and <*> must themselves be stage-free.

Surface sugar: |a is tested-now (~a | ~~a) and a| is tested-later
(<*>(~a | ~~a)); the pipe must be glued to the atom, and the postfix
form only reads as sugar when no operand can follow.

Grammar (precedence low to high):

    formula := or ('->' formula)?
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '~' unary | '[' INT ']' unary | '<*>' unary
             | '(' formula ')' | '_|_' | '|' NAME | NAME '|'?

Semantics: a stage tree is a finite rooted tree; every leaf carries an
implicit self-loop (the future beyond a leaf is stationary); valuations
are monotone (atoms persist downward). Forcing is intuitionistic:
implication quantifies over descendants-or-self, [n] holds when the
operand is forced at every node exactly n successor steps away, and <*>
is the union of [n] for n = 1 .. depth+1 (stationarity makes the bound
complete).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Union

from .errors import ResourceLimitError


# --- formulas ---


class FormulaNestingError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    name: str
    lawlike: bool = False


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    n: int
    operand: "Formula"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("stage index must be >= 1")
        if not is_stage_free(self.operand):
            raise FormulaNestingError(
                f"[{self.n}] operand contains a stage operator: {show(self.operand)}"
            )


@dataclass(frozen=True)
class SomeStage:
    operand: "Formula"

    def __post_init__(self) -> None:
        if not is_stage_free(self.operand):
            raise FormulaNestingError(
                f"<*> operand contains a stage operator: {show(self.operand)}"
            )


Formula = Union[Atom, Bottom, And, Or, Implies, Box, SomeStage]

BOT = Bottom()


def Not(f: Formula) -> Implies:
    return Implies(f, BOT)


def tested_now(f: Formula) -> Or:
    return Or(Not(f), Not(Not(f)))


def tested_later(f: Formula) -> SomeStage:
    return SomeStage(tested_now(f))


def is_stage_free(f: Formula) -> bool:
    if isinstance(f, (Box, SomeStage)):
        return False
    if isinstance(f, (And, Or, Implies)):
        return is_stage_free(f.left) and is_stage_free(f.right)
    return True


def atoms_of(f: Formula) -> frozenset[Atom]:
    if isinstance(f, Atom):
        return frozenset((f,))
    if isinstance(f, (And, Or, Implies)):
        return atoms_of(f.left) | atoms_of(f.right)
    if isinstance(f, (Box, SomeStage)):
        return atoms_of(f.operand)
    return frozenset()


def show(f: Formula) -> str:
    """Minimal-parenthesis printer; show . parse is the identity on its output."""

    def at(g: Formula, prec: int) -> str:
        if isinstance(g, Atom):
            return g.name + ("!" if g.lawlike else "")
        if isinstance(g, Bottom):
            return "_|_"
        if isinstance(g, Implies) and g.right == BOT:
            return "~" + at(g.left, 4)
        if isinstance(g, Box):
            return f"[{g.n}]" + at(g.operand, 4)
        if isinstance(g, SomeStage):
            return "<*>" + at(g.operand, 4)
        if isinstance(g, And):
            s, p = at(g.left, 3) + " & " + at(g.right, 4), 3
        elif isinstance(g, Or):
            s, p = at(g.left, 2) + " | " + at(g.right, 3), 2
        else:
            s, p = at(g.left, 2) + " -> " + at(g.right, 1), 1
        return f"({s})" if p < prec else s

    return at(f, 1)


# --- parser ---


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"{message} (at offset {pos})")


_NAME_START = "abcdefghijklmnopqrstuvwxyz"
_NAME_CHARS = _NAME_START + "0123456789_"


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    toks: list[tuple[str, object, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _NAME_START:
            j = i
            while j < n and text[j] in _NAME_CHARS:
                j += 1
            name = text[i:j]
            lawlike = j < n and text[j] == "!"
            toks.append(("name", (name, lawlike), i))
            i = j + (1 if lawlike else 0)
            continue
        if text.startswith("_|_", i):
            toks.append(("bottom", None, i))
            i += 3
            continue
        if text.startswith("->", i):
            toks.append(("->", None, i))
            i += 2
            continue
        if text.startswith("<*>", i):
            toks.append(("<*>", None, i))
            i += 3
            continue
        if c == "[":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1 or j >= n or text[j] != "]":
                raise FormulaSyntaxError("malformed stage index", i)
            toks.append(("box", int(text[i + 1 : j]), i))
            i = j + 1
            continue
        if c in "~&|()":
            toks.append((c, None, i))
            i += 1
            continue
        raise FormulaSyntaxError(f"unexpected character {c!r}", i)
    toks.append(("end", None, n))
    return toks


_UNARY_STARTERS = {"name", "bottom", "~", "box", "<*>", "(", "|"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self, ahead: int = 0):
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def eat(self, kind: Optional[str] = None):
        tok = self.toks[self.pos]
        if kind is not None and tok[0] != kind:
            raise FormulaSyntaxError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self.imp()
        tok = self.peek()
        if tok[0] != "end":
            raise FormulaSyntaxError(f"trailing input {tok[0]!r}", tok[2])
        return f

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "->":
            self.eat()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[0] == "|" and self.peek(1)[0] in _UNARY_STARTERS:
            self.eat()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "&":
            self.eat()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "~":
            self.eat()
            return Not(self.unary())
        if kind == "box":
            self.eat()
            try:
                return Box(value, self.unary())
            except ValueError as e:
                raise FormulaSyntaxError(str(e), pos) from None
        if kind == "<*>":
            self.eat()
            try:
                return SomeStage(self.unary())
            except ValueError as e:
                raise FormulaSyntaxError(str(e), pos) from None
        if kind == "(":
            self.eat()
            f = self.imp()
            self.eat(")")
            return self._postfix(f)
        if kind == "bottom":
            self.eat()
            return BOT
        if kind == "|":
            # prefix tested-now sugar: |a
            self.eat()
            tok = self.eat("name")
            name, lawlike = tok[1]
            return tested_now(Atom(name, lawlike))
        if kind == "name":
            self.eat()
            name, lawlike = value
            return self._postfix(Atom(name, lawlike))
        raise FormulaSyntaxError(f"expected a formula, found {kind!r}", pos)

    def _postfix(self, f: Formula) -> Formula:
        # postfix tested-later sugar: a| reads as sugar only when no
        # operand can follow the pipe (otherwise it is the Or connective)
        if (
            isinstance(f, Atom)
            and self.peek()[0] == "|"
            and self.peek(1)[0] not in _UNARY_STARTERS
        ):
            self.eat()
            return tested_later(f)
        return f


def parse(text: str) -> Formula:
    """Parse a formula; raises FormulaSyntaxError with an offset on bad input."""
    return _Parser(text).parse()


# --- stage trees ---


class ModelError(ValueError):
    pass


class StageTree:
    """Finite rooted tree with a monotone valuation.

    Node 0 is the root. Leaves have an implicit self-loop. The valuation
    must be monotone (atoms persist to descendants); the constructor
    rejects violations.
    """

    def __init__(
        self,
        parents: tuple[Optional[int], ...],
        valuation: tuple[frozenset[str], ...],
        ids: Optional[tuple[str, ...]] = None,
    ):
        n = len(parents)
        if n == 0:
            raise ModelError("a stage tree needs at least one node")
        if len(valuation) != n:
            raise ModelError("valuation size does not match node count")
        self.parents = parents
        self.valuation = valuation
        self.ids = ids or tuple(f"n{i}" for i in range(n))
        if len(self.ids) != n or len(set(self.ids)) != n:
            raise ModelError("node ids must be unique and cover every node")
        self.children: list[list[int]] = [[] for _ in range(n)]
        roots = []
        for i, p in enumerate(parents):
            if p is None:
                roots.append(i)
            else:
                if not 0 <= p < n:
                    raise ModelError(f"node {self.ids[i]} has an unknown parent")
                self.children[p].append(i)
        if roots != [0]:
            raise ModelError("exactly one root is required, at index 0")
        # reachability doubles as the cycle check
        seen = [False] * n
        stack = [0]
        while stack:
            w = stack.pop()
            if seen[w]:
                raise ModelError("parent links form a cycle")
            seen[w] = True
            stack.extend(self.children[w])
        if not all(seen):
            raise ModelError("disconnected nodes in the tree")
        bad = monotonicity_violations(self)
        if bad:
            node, atom = bad[0]
            raise ModelError(
                f"valuation not monotone: atom {atom!r} is lost at node {self.ids[node]}"
            )

    @property
    def size(self) -> int:
        return len(self.parents)

    def successors(self, w: int) -> list[int]:
        return self.children[w] or [w]

    @property
    def depth(self) -> int:
        best = 0
        stack = [(0, 0)]
        while stack:
            w, d = stack.pop()
            best = max(best, d)
            for c in self.children[w]:
                stack.append((c, d + 1))
        return best

    def descendants_or_self(self, w: int) -> list[int]:
        out = []
        stack = [w]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return sorted(out)

    def steps(self, w: int, n: int) -> frozenset[int]:
        """Nodes exactly n successor steps from w (leaves loop on themselves)."""
        frontier = {w}
        for _ in range(n):
            frontier = {u for v in frontier for u in self.successors(v)}
        return frozenset(frontier)

    def index_of(self, node_id: str) -> int:
        try:
            return self.ids.index(node_id)
        except ValueError:
            raise ModelError(f"unknown node id {node_id!r}") from None


def monotonicity_violations(m: StageTree) -> list[tuple[int, str]]:
    """(node, atom) pairs where an atom true at the parent is lost."""
    out = []
    for w in range(m.size):
        for c in m.children[w]:
            for atom in sorted(m.valuation[w]):
                if atom not in m.valuation[c]:
                    out.append((c, atom))
    return out


def load_model(text: str) -> StageTree:
    """Model JSON: {"nodes": [{"id", "parent"?, "atoms"}...]}, root first or not."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"model file is not valid JSON: {e}") from None
    nodes = doc.get("nodes")
    if not isinstance(nodes, list) or not nodes:
        raise ModelError("model JSON needs a non-empty 'nodes' list")
    ids = [str(nd["id"]) for nd in nodes]
    if len(set(ids)) != len(ids):
        raise ModelError("duplicate node ids")
    roots = [nd for nd in nodes if nd.get("parent") in (None, "")]
    if len(roots) != 1:
        raise ModelError("model JSON needs exactly one root node")
    # normalize so the root sits at index 0
    order = sorted(range(len(nodes)), key=lambda i: nodes[i].get("parent") is not None)
    nodes = [nodes[i] for i in order]
    ids = [str(nd["id"]) for nd in nodes]
    pos = {nid: i for i, nid in enumerate(ids)}
    parents: list[Optional[int]] = []
    vals: list[frozenset[str]] = []
    for nd in nodes:
        p = nd.get("parent")
        if p in (None, ""):
            parents.append(None)
        else:
            if str(p) not in pos:
                raise ModelError(f"node {nd['id']!r} references unknown parent {p!r}")
            parents.append(pos[str(p)])
        vals.append(frozenset(map(str, nd.get("atoms", []))))
    return StageTree(tuple(parents), tuple(vals), tuple(ids))


def dump_model(m: StageTree) -> dict:
    nodes = []
    for i in range(m.size):
        nd: dict = {"id": m.ids[i], "atoms": sorted(m.valuation[i])}
        if m.parents[i] is not None:
            nd["parent"] = m.ids[m.parents[i]]
        nodes.append(nd)
    return {"nodes": nodes}


# --- forcing (reference implementation) ---


def forces(m: StageTree, w: int, f: Formula) -> bool:
    if isinstance(f, Atom):
        return f.name in m.valuation[w]
    if isinstance(f, Bottom):
        return False
    if isinstance(f, And):
        return forces(m, w, f.left) and forces(m, w, f.right)
    if isinstance(f, Or):
        return forces(m, w, f.left) or forces(m, w, f.right)
    if isinstance(f, Implies):
        return all(
            not forces(m, v, f.left) or forces(m, v, f.right)
            for v in m.descendants_or_self(w)
        )
    if isinstance(f, Box):
        return all(forces(m, u, f.operand) for u in m.steps(w, f.n))
    if isinstance(f, SomeStage):
        return any(forces(m, w, Box(n, f.operand)) for n in range(1, m.depth + 2))
    raise TypeError(f"not a formula: {f!r}")


# --- bitmask engine (used by the sweeps) ---


class _Masks:
    def __init__(self, m: StageTree, max_box: int):
        self.m = m
        n = m.size
        self.full = (1 << n) - 1
        self.childmask = [0] * n
        for w in range(n):
            for c in m.children[w]:
                self.childmask[w] |= 1 << c
        self.descmask = [0] * n
        for w in range(n):
            for u in m.descendants_or_self(w):
                self.descmask[w] |= 1 << u
        depth = m.depth
        self.n_some = depth + 1
        k_max = max(max_box, self.n_some)
        succ = [self.childmask[w] or (1 << w) for w in range(n)]
        self.stepmask = [[1 << w for w in range(n)]]
        for _ in range(k_max):
            prev = self.stepmask[-1]
            cur = []
            for w in range(n):
                acc = 0
                bits = prev[w]
                while bits:
                    low = bits & -bits
                    acc |= succ[low.bit_length() - 1]
                    bits ^= low
                cur.append(acc)
            self.stepmask.append(cur)

    def atom_mask(self, name: str) -> int:
        acc = 0
        for w in range(self.m.size):
            if name in self.m.valuation[w]:
                acc |= 1 << w
        return acc

    def implies_mask(self, l: int, r: int) -> int:
        bad = l & ~r
        acc = 0
        for w in range(self.m.size):
            if not (bad & self.descmask[w]):
                acc |= 1 << w
        return acc

    def box_mask(self, n: int, operand: int) -> int:
        acc = 0
        for w in range(self.m.size):
            s = self.stepmask[n][w]
            if s & operand == s:
                acc |= 1 << w
        return acc

    def somestage_mask(self, operand: int) -> int:
        acc = 0
        for n in range(1, self.n_some + 1):
            acc |= self.box_mask(n, operand)
            if acc == self.full:
                break
        return acc

    def upclosed(self, mask: int) -> bool:
        bits = mask
        while bits:
            low = bits & -bits
            w = low.bit_length() - 1
            if self.childmask[w] & ~mask:
                return False
            bits ^= low
        return True

    def eval(self, f: Formula, memo: dict) -> int:
        key = id(f)
        if key in memo:
            return memo[key]
        if isinstance(f, Atom):
            v = self.atom_mask(f.name)
        elif isinstance(f, Bottom):
            v = 0
        elif isinstance(f, And):
            v = self.eval(f.left, memo) & self.eval(f.right, memo)
        elif isinstance(f, Or):
            v = self.eval(f.left, memo) | self.eval(f.right, memo)
        elif isinstance(f, Implies):
            v = self.implies_mask(self.eval(f.left, memo), self.eval(f.right, memo))
        elif isinstance(f, Box):
            v = self.box_mask(f.n, self.eval(f.operand, memo))
        else:
            v = self.somestage_mask(self.eval(f.operand, memo))
        memo[key] = v
        return v


# --- enumeration ---

ATOM_POOL = ("p", "q", "r", "s")


@dataclass(frozen=True)
class SweepBounds:
    max_nodes: int = 5
    max_atoms: int = 2
    max_box_index: int = 3
    max_operand_depth: int = 2

    def __post_init__(self) -> None:
        if min(self.max_nodes, self.max_atoms, self.max_box_index, self.max_operand_depth + 1) < 1:
            raise ValueError("all sweep bounds must be positive")
        if self.max_atoms > len(ATOM_POOL):
            raise ValueError(f"at most {len(ATOM_POOL)} atoms supported")


def _shape_code(children: list[list[int]], w: int):
    return tuple(sorted(_shape_code(children, c) for c in children[w]))


def enumerate_shapes(max_nodes: int) -> list[tuple[Optional[int], ...]]:
    """Canonical rooted tree shapes, node count ascending then code order."""
    out = []
    for n in range(1, max_nodes + 1):
        seen = {}
        def rec(parents: list[Optional[int]]):
            i = len(parents)
            if i == n:
                children: list[list[int]] = [[] for _ in range(n)]
                for j, p in enumerate(parents):
                    if p is not None:
                        children[p].append(j)
                code = _shape_code(children, 0)
                if code not in seen:
                    seen[code] = tuple(parents)
                return
            for p in range(i):
                rec(parents + [p])
        rec([None])
        out.extend(shape for _, shape in sorted(seen.items(), key=lambda kv: repr(kv[0])))
    return out


def _upclosed_sets(parents: tuple[Optional[int], ...]) -> list[int]:
    n = len(parents)
    children: list[list[int]] = [[] for _ in range(n)]
    for i, p in enumerate(parents):
        if p is not None:
            children[p].append(i)
    childmask = [0] * n
    for w in range(n):
        for c in children[w]:
            childmask[w] |= 1 << c
    sets = []
    for mask in range(1 << n):
        ok = True
        bits = mask
        while bits:
            low = bits & -bits
            if childmask[low.bit_length() - 1] & ~mask:
                ok = False
                break
            bits ^= low
        if ok:
            sets.append(mask)
    return sets


def enumerate_models(bounds: SweepBounds) -> Iterator[StageTree]:
    atoms = ATOM_POOL[: bounds.max_atoms]
    for shape in enumerate_shapes(bounds.max_nodes):
        n = len(shape)
        filt = _upclosed_sets(shape)
        def vals(i: int, acc: list[int]):
            if i == len(atoms):
                valuation = tuple(
                    frozenset(a for a, mask in zip(atoms, acc) if mask >> w & 1)
                    for w in range(n)
                )
                yield StageTree(shape, valuation)
                return
            for mask in filt:
                yield from vals(i + 1, acc + [mask])
        yield from vals(0, [])


def count_models(bounds: SweepBounds) -> int:
    total = 0
    for shape in enumerate_shapes(bounds.max_nodes):
        total += len(_upclosed_sets(shape)) ** bounds.max_atoms
    return total


def enumerate_box_free(bounds: SweepBounds) -> list[Formula]:
    """Stage-free formulas, by depth then construction order; atoms first."""
    base: list[Formula] = [Atom(a) for a in ATOM_POOL[: bounds.max_atoms]]
    base.append(BOT)
    levels: list[list[Formula]] = [base]
    for _ in range(bounds.max_operand_depth):
        prev = [f for level in levels for f in level]
        top = set(map(id, levels[-1]))
        fresh: list[Formula] = []
        for l in prev:
            for r in prev:
                # exactly this depth: at least one operand from the deepest level
                if id(l) not in top and id(r) not in top:
                    continue
                for ctor in (And, Or, Implies):
                    fresh.append(ctor(l, r))
        levels.append(fresh)
    return [f for level in levels for f in level]


# --- schemata and sweeps ---


@dataclass(frozen=True)
class Schema:
    name: str
    description: str
    # instances(bounds) yields (indices, builder) where builder(phi) -> Formula
    instances: Callable[[SweepBounds], list[tuple[dict, Callable[[Formula], Formula]]]]


def _ic1_instances(b: SweepBounds):
    out = []
    for n in range(1, b.max_box_index):
        for m in range(1, b.max_box_index - n + 1):
            out.append(
                (
                    {"n": n, "m": m},
                    lambda phi, n=n, m=m: Implies(Box(n, phi), Box(n + m, phi)),
                )
            )
    return out


SCHEMAS: dict[str, Schema] = {
    "ic1": Schema("ic1", "[n]phi -> [n+m]phi", _ic1_instances),
    "ic2": Schema(
        "ic2",
        "~phi -> ~<*>phi",
        lambda b: [({}, lambda phi: Implies(Not(phi), Not(SomeStage(phi))))],
    ),
    "ic3": Schema(
        "ic3", "phi -> <*>phi", lambda b: [({}, lambda phi: Implies(phi, SomeStage(phi)))]
    ),
    "md": Schema(
        "md",
        "~<*>phi -> ~phi",
        lambda b: [({}, lambda phi: Implies(Not(SomeStage(phi)), Not(phi)))],
    ),
    "cs4": Schema(
        "cs4",
        "[n]phi | ~[n]phi",
        lambda b: [
            ({"n": n}, lambda phi, n=n: Or(Box(n, phi), Not(Box(n, phi))))
            for n in range(1, b.max_box_index + 1)
        ],
    ),
    "cs5": Schema(
        "cs5", "<*>phi -> phi", lambda b: [({}, lambda phi: Implies(SomeStage(phi), phi))]
    ),
}

EXPECTED_VALID = ("ic1", "ic2", "ic3", "md")
EXPECTED_REFUTED = ("cs4", "cs5")

DEFAULT_SWEEP_CAP = 50_000_000


@dataclass(frozen=True)
class Countermodel:
    model: StageTree
    node: int
    phi: Formula
    indices: dict
    instance: Formula

    def as_dict(self) -> dict:
        return {
            "model": dump_model(self.model),
            "node": self.model.ids[self.node],
            "phi": show(self.phi),
            "indices": self.indices,
            "instance": show(self.instance),
        }


@dataclass(frozen=True)
class SweepResult:
    schema: str
    bounds: SweepBounds
    models_checked: int
    instances_checked: int
    countermodel: Optional[Countermodel]
    monotone_ok: bool = True

    @property
    def valid_up_to_bounds(self) -> bool:
        return self.countermodel is None


def _refuse_if_huge(bounds: SweepBounds, cap: int) -> tuple[int, int]:
    models = count_models(bounds)
    formulas = len(enumerate_box_free(bounds))
    if models * formulas > cap:
        raise ResourceLimitError(
            f"sweep would enumerate {models} models x {formulas} formulas "
            f"= {models * formulas} pairs, over the cap of {cap}",
            requested=models * formulas,
            limit=cap,
        )
    return models, formulas


def _sweep(
    schema_names: list[str], bounds: SweepBounds, cap: int
) -> tuple[dict[str, SweepResult], bool]:
    _refuse_if_huge(bounds, cap)
    formulas = enumerate_box_free(bounds)
    instances = {
        name: SCHEMAS[name].instances(bounds) for name in schema_names
    }
    found: dict[str, Optional[Countermodel]] = {name: None for name in schema_names}
    models_checked = 0
    instances_checked = {name: 0 for name in schema_names}
    monotone_ok = True

    for model in enumerate_models(bounds):
        models_checked += 1
        mm = _Masks(model, bounds.max_box_index)
        memo: dict = {}
        seen_masks: set[int] = set()
        for phi in formulas:
            mask = mm.eval(phi, memo)
            if monotone_ok and not mm.upclosed(mask):
                monotone_ok = False
            if mask in seen_masks:
                continue
            seen_masks.add(mask)
            for name in schema_names:
                if found[name] is not None:
                    continue
                for indices, build in instances[name]:
                    inst = build(phi)
                    inst_mask = mm.eval(inst, {})
                    instances_checked[name] += 1
                    if monotone_ok and not mm.upclosed(inst_mask):
                        monotone_ok = False
                    if inst_mask != mm.full:
                        missing = ~inst_mask & mm.full
                        node = (missing & -missing).bit_length() - 1
                        found[name] = Countermodel(model, node, phi, indices, inst)
                        break
        if all(found[name] is not None for name in schema_names):
            break

    results = {
        name: SweepResult(
            schema=name,
            bounds=bounds,
            models_checked=models_checked,
            instances_checked=instances_checked[name],
            countermodel=found[name],
            monotone_ok=monotone_ok,
        )
        for name in schema_names
    }
    return results, monotone_ok


def validity_sweep(
    schema: str, bounds: SweepBounds, cap: int = DEFAULT_SWEEP_CAP
) -> SweepResult:
    """Exhaustive check of one schema over all stage trees, monotone
    valuations, and stage-free instantiations within bounds. Returns the
    first countermodel in enumeration order (node count, then shape code,
    then valuation, then formula, then instance indices), or the validity
    certificate with the counts."""
    if schema not in SCHEMAS:
        raise ValueError(f"unknown schema {schema!r}; pick from {sorted(SCHEMAS)}")
    results, _ = _sweep([schema], bounds, cap)
    return results[schema]


@dataclass(frozen=True)
class SuiteReport:
    bounds: SweepBounds
    results: dict[str, SweepResult]
    monotone_ok: bool
    restricted_cs5_note: str = (
        "restricted cs5 (lawlike atoms only) is an assumable derivation rule; "
        "it has no validating frame condition and is never semantically certified"
    )

    def outcome(self, name: str) -> str:
        return "valid-up-to-bounds" if self.results[name].valid_up_to_bounds else "countermodel"


def principle_suite(
    bounds: SweepBounds = SweepBounds(), cap: int = DEFAULT_SWEEP_CAP
) -> SuiteReport:
    """One shared pass deciding all six schemata plus the monotonicity audit."""
    results, monotone_ok = _sweep(list(SCHEMAS), bounds, cap)
    return SuiteReport(bounds=bounds, results=results, monotone_ok=monotone_ok)
