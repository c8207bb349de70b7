"""Checker for sequent-style derivation scripts in the stage-modal language.

A script declares its assertion ids, lists premises and definitional
axioms, then gives consecutively numbered steps, each a formula plus the
rule that licenses it:

    # lines starting with '#' are comments
    assert alpha lawlike
    premise b_below
    defax <*>alpha <-> c_hits
    1: <*>alpha <-> c_hits ; DefAxiom
    2: <*>alpha -> c_hits ; AndElim(1)
    ...

Rules: Premise, DefAxiom, Assume, Discharge(m), MP(i,j), AndIntro(i,j),
AndElim(i), OrIntro(i), ContraPos(i), DNE(i), and the stage axioms
MD-inst, IC1-inst, IC2-inst, IC3-inst (with a reference: applied form;
without: the axiom instance itself) plus CS5R-inst, the restricted
stage-collapse. Assume opens a block; Discharge(m) cites a _|_ step in
that block, closes it, and yields the negated assumption. Steps inside
a closed block are no longer citable. The only way to leave a block is
Discharge, so every verified conclusion is block-free.

CS5R is the one rule with a side condition: every atom in its operand
must be declared lawlike. Collapsing "settled at some stage" to "settled
now" is only safe for assertions whose test is a terminating computation;
for anything else the checker rejects the step and names the untestable
atom. Every CS5R use, even a licensed one, is reported as a warning so
callers can see exactly where the conclusion leans on that assumption.

The `<->` connective is script-level sugar: A <-> B abbreviates the
conjunction (A -> B) & (B -> A) and is only recognized at the top level
of a formula. The '!' atom suffix is not accepted in scripts; lawlike
status comes from the assert declarations alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .logic import (
    And,
    Atom,
    BOT,
    Box,
    Countermodel,
    Formula,
    FormulaSyntaxError,
    Implies,
    Not,
    Or,
    SomeStage,
    SweepBounds,
    atoms_of,
    parse,
    show,
    validity_sweep,
)


class ScriptSyntaxError(ValueError):
    def __init__(self, message: str, line_no: int):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


@dataclass(frozen=True)
class Step:
    number: int
    formula: Formula
    rule: str
    refs: tuple[int, ...]
    line_no: int


@dataclass(frozen=True)
class Script:
    lawlike: frozenset[str]
    declared: frozenset[str]
    premises: tuple[Formula, ...]
    defaxioms: tuple[Formula, ...]
    steps: tuple[Step, ...]


@dataclass(frozen=True)
class Verified:
    conclusion: Formula
    premises: tuple[Formula, ...]
    defaxioms: tuple[Formula, ...]
    warnings: tuple[str, ...]
    step_count: int

    @property
    def ok(self) -> bool:
        return True

    def as_dict(self) -> dict:
        return {
            "status": "verified",
            "conclusion": show(self.conclusion),
            "premises": [show(f) for f in self.premises],
            "defaxioms": [show(f) for f in self.defaxioms],
            "warnings": list(self.warnings),
            "steps": self.step_count,
        }


@dataclass(frozen=True)
class Rejected:
    step: int
    reason: str

    @property
    def ok(self) -> bool:
        return False

    def as_dict(self) -> dict:
        return {"status": "rejected", "step": self.step, "reason": self.reason}


CheckResult = Union[Verified, Rejected]


# --- script parsing ---


def _split_biconditional(text: str) -> Optional[tuple[str, str]]:
    depth = 0
    for i in range(len(text) - 2):
        c = text[i]
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        elif text[i : i + 3] == "<->" and depth == 0:
            return text[:i], text[i + 3 :]
    return None


def _script_formula(text: str, lawlike: frozenset[str], line_no: int) -> Formula:
    if "!" in text:
        raise ScriptSyntaxError(
            "mark lawlike assertions with 'assert <id> lawlike', not '!'", line_no
        )
    halves = _split_biconditional(text)
    try:
        if halves is not None:
            left, right = halves
            if _split_biconditional(left) or _split_biconditional(right):
                raise ScriptSyntaxError("chained <-> needs parentheses", line_no)
            l, r = parse(left), parse(right)
            f: Formula = And(Implies(l, r), Implies(r, l))
        else:
            f = parse(text)
    except FormulaSyntaxError as e:
        raise ScriptSyntaxError(f"bad formula {text.strip()!r}: {e}", line_no) from None
    return _normalize(f, lawlike)


def _normalize(f: Formula, lawlike: frozenset[str]) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.name, f.name in lawlike)
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_normalize(f.left, lawlike), _normalize(f.right, lawlike))
    if isinstance(f, Box):
        return Box(f.n, _normalize(f.operand, lawlike))
    if isinstance(f, SomeStage):
        return SomeStage(_normalize(f.operand, lawlike))
    return f


_RULE_ALIASES = {
    "premise": "Premise",
    "defaxiom": "DefAxiom",
    "defax": "DefAxiom",
    "assume": "Assume",
    "discharge": "Discharge",
    "mp": "MP",
    "andintro": "AndIntro",
    "andelim": "AndElim",
    "orintro": "OrIntro",
    "contrapos": "ContraPos",
    "dne": "DNE",
    "mdinst": "MD-inst",
    "ic1inst": "IC1-inst",
    "ic2inst": "IC2-inst",
    "ic3inst": "IC3-inst",
    "cs5rinst": "CS5R-inst",
}


def _parse_rule(text: str, line_no: int) -> tuple[str, tuple[int, ...]]:
    text = text.strip()
    name, refs = text, ()
    if "(" in text:
        if not text.endswith(")"):
            raise ScriptSyntaxError(f"malformed rule {text!r}", line_no)
        name, inner = text[: text.index("(")], text[text.index("(") + 1 : -1]
        parts = [p.strip() for p in inner.split(",")] if inner.strip() else []
        try:
            refs = tuple(int(p) for p in parts)
        except ValueError:
            raise ScriptSyntaxError(
                f"rule references must be step numbers: {text!r}", line_no
            ) from None
    key = name.strip().lower().replace("-", "").replace("_", "")
    if key not in _RULE_ALIASES:
        raise ScriptSyntaxError(f"unknown rule {name.strip()!r}", line_no)
    return _RULE_ALIASES[key], refs


def parse_script(text: str) -> Script:
    lawlike: set[str] = set()
    declared: set[str] = set()
    premise_src: list[tuple[str, int]] = []
    defax_src: list[tuple[str, int]] = []
    steps: list[Step] = []
    lawlike_frozen: Optional[frozenset[str]] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head in ("assert", "premise", "defax"):
            if steps:
                raise ScriptSyntaxError(
                    f"{head!r} lines must precede the numbered steps", line_no
                )
            body = line[len(head) :].strip()
            if head == "assert":
                parts = body.split()
                if not parts or len(parts) > 2 or (len(parts) == 2 and parts[1] != "lawlike"):
                    raise ScriptSyntaxError(
                        "expected 'assert <id>' or 'assert <id> lawlike'", line_no
                    )
                name = parts[0]
                if name in declared:
                    raise ScriptSyntaxError(f"{name!r} declared twice", line_no)
                declared.add(name)
                if len(parts) == 2:
                    lawlike.add(name)
            elif head == "premise":
                premise_src.append((body, line_no))
            else:
                defax_src.append((body, line_no))
            continue
        # numbered step: "N: formula ; rule"
        if ":" not in line:
            raise ScriptSyntaxError(f"cannot parse line {line!r}", line_no)
        num_txt, rest = line.split(":", 1)
        try:
            number = int(num_txt.strip())
        except ValueError:
            raise ScriptSyntaxError(f"bad step number {num_txt.strip()!r}", line_no) from None
        if ";" not in rest:
            raise ScriptSyntaxError("step needs '; <rule>' after the formula", line_no)
        formula_txt, rule_txt = rest.rsplit(";", 1)
        if lawlike_frozen is None:
            lawlike_frozen = frozenset(lawlike)
        rule, refs = _parse_rule(rule_txt, line_no)
        steps.append(
            Step(number, _script_formula(formula_txt, lawlike_frozen, line_no), rule, refs, line_no)
        )

    if not steps:
        raise ScriptSyntaxError("script has no steps", len(text.splitlines()) or 1)
    lf = lawlike_frozen if lawlike_frozen is not None else frozenset(lawlike)
    premises = tuple(_script_formula(s, lf, ln) for s, ln in premise_src)
    defaxioms = tuple(_script_formula(s, lf, ln) for s, ln in defax_src)
    return Script(lf, frozenset(declared), premises, defaxioms, tuple(steps))


# --- the checker ---


def _destruct_not(f: Formula) -> Optional[Formula]:
    if isinstance(f, Implies) and f.right == BOT:
        return f.left
    return None


def check_script(source: Union[str, Script]) -> CheckResult:
    script = parse_script(source) if isinstance(source, str) else source
    visible: dict[int, Formula] = {}
    path_of: dict[int, tuple[int, ...]] = {}
    stack: list[tuple[int, Formula]] = []  # (assume step number, assumption)
    warnings: list[str] = []

    def cur_path() -> tuple[int, ...]:
        return tuple(n for n, _ in stack)

    expected = 1
    for st in script.steps:
        if st.number != expected:
            return Rejected(
                st.number,
                f"steps must be numbered consecutively: expected {expected}, got {st.number}",
            )
        expected += 1

    for st in script.steps:
        n, f = st.number, st.formula

        def fail(reason: str) -> Rejected:
            return Rejected(n, f"{st.rule}: {reason}")

        # reference discipline first
        refs: list[Formula] = []
        bad = None
        for r in st.refs:
            if r not in visible:
                bad = fail(
                    f"step {r} is not citable here"
                    + (" (inside a closed block)" if r in path_of else "")
                )
                break
            if path_of[r] != cur_path()[: len(path_of[r])]:
                bad = fail(f"step {r} belongs to a closed block")
                break
            refs.append(visible[r])
        if bad is not None:
            return bad

        def arity(k: int) -> Optional[Rejected]:
            if len(st.refs) != k:
                return fail(f"needs exactly {k} reference(s), got {len(st.refs)}")
            return None

        rule = st.rule
        err: Optional[Rejected] = None

        if rule == "Premise":
            err = arity(0)
            if not err and f not in script.premises:
                err = fail(f"{show(f)} is not among the premises")
        elif rule == "DefAxiom":
            err = arity(0)
            if not err and f not in script.defaxioms:
                err = fail(f"{show(f)} is not among the definitional axioms")
        elif rule == "Assume":
            err = arity(0)
            if not err:
                stack.append((n, f))
        elif rule == "Discharge":
            err = arity(1)
            if not err and not stack:
                err = fail("no open assumption to discharge")
            if not err:
                a_num, a_formula = stack[-1]
                r = st.refs[0]
                if visible[r] != BOT:
                    err = fail(f"step {r} must be _|_, found {show(visible[r])}")
                elif path_of[r] != cur_path():
                    err = fail(f"the _|_ at step {r} is not inside the current block")
                elif f != Not(a_formula):
                    err = fail(
                        f"discharging the assumption at step {a_num} must yield "
                        f"{show(Not(a_formula))}, found {show(f)}"
                    )
                else:
                    stack.pop()
                    cut = cur_path()
                    for m in list(visible):
                        if path_of[m][: len(cut)] == cut and len(path_of[m]) > len(cut):
                            del visible[m]
        elif rule == "MP":
            err = arity(2)
            if not err:
                ok = any(
                    isinstance(imp, Implies) and imp.left == arg and imp.right == f
                    for imp, arg in (refs, refs[::-1])
                )
                if not ok:
                    err = fail("neither reference is an implication applying to the other")
        elif rule == "AndIntro":
            err = arity(2)
            if not err and f not in (And(refs[0], refs[1]), And(refs[1], refs[0])):
                err = fail("formula is not the conjunction of the referenced steps")
        elif rule == "AndElim":
            err = arity(1)
            if not err and not (
                isinstance(refs[0], And) and f in (refs[0].left, refs[0].right)
            ):
                err = fail("formula is not a conjunct of the referenced step")
        elif rule == "OrIntro":
            err = arity(1)
            if not err and not (isinstance(f, Or) and refs[0] in (f.left, f.right)):
                err = fail("formula is not a disjunction containing the referenced step")
        elif rule == "ContraPos":
            err = arity(1)
            if not err and not (
                isinstance(refs[0], Implies)
                and f == Implies(Not(refs[0].right), Not(refs[0].left))
            ):
                err = fail("formula is not the contrapositive of the referenced step")
        elif rule == "DNE":
            err = arity(1)
            if not err:
                inner = _destruct_not(refs[0])
                inner2 = _destruct_not(inner) if inner is not None else None
                inner3 = _destruct_not(inner2) if inner2 is not None else None
                if inner3 is None or f != Not(inner3):
                    err = fail("reference must be a triple negation, formula its single one")
        elif rule == "MD-inst":
            if len(st.refs) == 1:
                src = _destruct_not(refs[0])
                if not (isinstance(src, SomeStage) and f == Not(src.operand)):
                    err = fail("from ~<*>phi the rule yields ~phi")
            else:
                err = arity(0)
                if not err:
                    ok = False
                    if isinstance(f, Implies):
                        l, r = _destruct_not(f.left), _destruct_not(f.right)
                        ok = (
                            isinstance(l, SomeStage)
                            and r is not None
                            and l.operand == r
                        )
                    if not ok:
                        err = fail("axiom form is ~<*>phi -> ~phi")
        elif rule == "IC1-inst":
            if len(st.refs) == 1:
                ok = (
                    isinstance(refs[0], Box)
                    and isinstance(f, Box)
                    and f.operand == refs[0].operand
                    and f.n > refs[0].n
                )
                if not ok:
                    err = fail("from [n]phi the rule yields [n+m]phi with m >= 1")
            else:
                err = arity(0)
                if not err:
                    ok = (
                        isinstance(f, Implies)
                        and isinstance(f.left, Box)
                        and isinstance(f.right, Box)
                        and f.left.operand == f.right.operand
                        and f.right.n > f.left.n
                    )
                    if not ok:
                        err = fail("axiom form is [n]phi -> [n+m]phi")
        elif rule == "IC2-inst":
            if len(st.refs) == 1:
                src = _destruct_not(refs[0])
                tgt = _destruct_not(f)
                if (
                    src is None
                    or not isinstance(tgt, SomeStage)
                    or tgt.operand != src
                ):
                    err = fail("from ~phi the rule yields ~<*>phi")
            else:
                err = arity(0)
                if not err:
                    ok = False
                    if isinstance(f, Implies):
                        l, r = _destruct_not(f.left), _destruct_not(f.right)
                        ok = (
                            l is not None
                            and isinstance(r, SomeStage)
                            and r.operand == l
                        )
                    if not ok:
                        err = fail("axiom form is ~phi -> ~<*>phi")
        elif rule == "IC3-inst":
            if len(st.refs) == 1:
                if not (isinstance(f, SomeStage) and f.operand == refs[0]):
                    err = fail("from phi the rule yields <*>phi")
            else:
                err = arity(0)
                if not err:
                    ok = (
                        isinstance(f, Implies)
                        and isinstance(f.right, SomeStage)
                        and f.right.operand == f.left
                    )
                    if not ok:
                        err = fail("axiom form is phi -> <*>phi")
        elif rule == "CS5R-inst":
            operand: Optional[Formula] = None
            if len(st.refs) == 1:
                if isinstance(refs[0], SomeStage) and refs[0].operand == f:
                    operand = f
                else:
                    err = fail("from <*>phi the restricted rule yields phi")
            else:
                err = arity(0)
                if not err:
                    if (
                        isinstance(f, Implies)
                        and isinstance(f.left, SomeStage)
                        and f.left.operand == f.right
                    ):
                        operand = f.right
                    else:
                        err = fail("axiom form is <*>phi -> phi")
            if operand is not None and err is None:
                atoms = sorted(atoms_of(operand), key=lambda a: a.name)
                loose = [a.name for a in atoms if not a.lawlike]
                if loose:
                    err = fail(
                        f"stage collapse needs every atom of {show(operand)} declared "
                        f"lawlike; {loose[0]!r} has no terminating test"
                    )
                else:
                    warnings.append(
                        f"step {n}: stage collapse on {show(operand)} (leans on the "
                        f"lawlike declaration of {', '.join(a.name for a in atoms)})"
                    )
        else:  # pragma: no cover
            err = fail("unhandled rule")

        if err is not None:
            return err
        visible[n] = f
        # an Assume step's path already includes its own block
        path_of[n] = cur_path()

    if stack:
        return Rejected(
            script.steps[-1].number,
            f"assumption at step {stack[-1][0]} was never discharged",
        )
    last = script.steps[-1]
    return Verified(
        conclusion=last.formula,
        premises=script.premises,
        defaxioms=script.defaxioms,
        warnings=tuple(warnings),
        step_count=len(script.steps),
    )


# --- bundled scripts ---

VIENNA_DENSE = """\
# A convergent sequence that sits at 1/2 exactly when a stated assertion
# is never decided. The premise that it visibly drops below 1/2 forces
# the assertion to be decided at some stage; the restricted stage
# collapse then decides it outright, and the limit moves off 1/2.
assert alpha lawlike
assert e_hits
assert e_is_half
assert e_below

premise e_below
defax <*>(alpha | ~alpha) <-> e_hits
defax e_below -> e_hits
defax e_is_half -> ~e_hits

1: <*>(alpha | ~alpha) <-> e_hits ; DefAxiom
2: e_hits -> <*>(alpha | ~alpha) ; AndElim(1)
3: e_below -> e_hits ; DefAxiom
4: e_below ; Premise
5: e_hits ; MP(4, 3)
6: <*>(alpha | ~alpha) ; MP(5, 2)
7: alpha | ~alpha ; CS5R-inst(6)
8: e_is_half -> ~e_hits ; DefAxiom
9: e_is_half ; Assume
10: ~e_hits ; MP(9, 8)
11: _|_ ; MP(5, 10)
12: ~e_is_half ; Discharge(11)
13: (alpha | ~alpha) & ~e_is_half ; AndIntro(7, 12)
"""

DRIFT_DIRECT = """\
# Rationality of a directly checked drift limit cannot be refuted:
# refuting it would refute that the driving assertion is ever decided,
# and ~(alpha | ~alpha) is already absurd. No stage collapse is needed,
# so the conclusion is only the tested-now disjunction, not a decision.
assert alpha
assert rat_d

defax rat_d <-> <*>(alpha | ~alpha)

1: rat_d <-> <*>(alpha | ~alpha) ; DefAxiom
2: <*>(alpha | ~alpha) -> rat_d ; AndElim(1)
3: ~rat_d -> ~<*>(alpha | ~alpha) ; ContraPos(2)
4: ~rat_d ; Assume
5: ~<*>(alpha | ~alpha) ; MP(4, 3)
6: ~(alpha | ~alpha) ; MD-inst(5)
7: alpha ; Assume
8: alpha | ~alpha ; OrIntro(7)
9: _|_ ; MP(8, 6)
10: ~alpha ; Discharge(9)
11: alpha | ~alpha ; OrIntro(10)
12: _|_ ; MP(11, 6)
13: ~~rat_d ; Discharge(12)
14: ~rat_d | ~~rat_d ; OrIntro(13)
"""

CONDITIONAL_KS = """\
# A conditionally checked drift whose limit is rational exactly when the
# assertion is eventually proved. Under the scenario premise that a
# proof will at some stage be in hand, irrationality of the limit is
# refutable -- with no use of any stage collapse, restricted or not.
assert alpha
assert rat_f

premise <*>~~alpha
defax rat_f <-> <*>alpha

1: rat_f <-> <*>alpha ; DefAxiom
2: <*>alpha -> rat_f ; AndElim(1)
3: ~rat_f -> ~<*>alpha ; ContraPos(2)
4: <*>~~alpha ; Premise
5: ~rat_f ; Assume
6: ~<*>alpha ; MP(5, 3)
7: ~alpha ; MD-inst(6)
8: ~~alpha ; Assume
9: _|_ ; MP(7, 8)
10: ~~~alpha ; Discharge(9)
11: ~~~alpha -> ~<*>~~alpha ; IC2-inst
12: ~<*>~~alpha ; MP(10, 11)
13: _|_ ; MP(4, 12)
14: ~~rat_f ; Discharge(13)
"""

CAMBRIDGE_REDUCED = """\
# A checking number that vanishes exactly when its assertion is never
# proved, paired with a companion that visibly leaves zero once a proof
# stage exists. From the companion's visible motion the assertion is
# decided now (restricted collapse, lawlike), and the checking number
# is apart from zero.
assert alpha lawlike
assert c_hits
assert c_is_zero
assert b_below

premise b_below
defax <*>alpha <-> c_hits
defax c_is_zero -> ~c_hits
defax b_below -> <*>alpha

1: <*>alpha <-> c_hits ; DefAxiom
2: <*>alpha -> c_hits ; AndElim(1)
3: ~c_hits -> ~<*>alpha ; ContraPos(2)
4: c_is_zero -> ~c_hits ; DefAxiom
5: b_below -> <*>alpha ; DefAxiom
6: b_below ; Premise
7: <*>alpha ; MP(6, 5)
8: alpha ; CS5R-inst(7)
9: c_is_zero ; Assume
10: ~c_hits ; MP(9, 4)
11: ~<*>alpha ; MP(10, 3)
12: ~alpha ; MD-inst(11)
13: _|_ ; MP(8, 12)
14: ~c_is_zero ; Discharge(13)
15: alpha & ~c_is_zero ; AndIntro(8, 14)
"""

BUNDLED_SCRIPTS: dict[str, str] = {
    "vienna-dense": VIENNA_DENSE,
    "drift-direct": DRIFT_DIRECT,
    "conditional-ks": CONDITIONAL_KS,
    "cambridge-reduced": CAMBRIDGE_REDUCED,
}


# --- what the classical argument would need ---


@dataclass(frozen=True)
class BlockedRule:
    rule: str
    schema: str
    role: str
    countermodel: Countermodel

    def as_dict(self) -> dict:
        return {
            "rule": self.rule,
            "schema": self.schema,
            "role": self.role,
            "countermodel": self.countermodel.as_dict(),
        }


@dataclass(frozen=True)
class PrerequisiteReport:
    claim: str
    available: tuple[str, ...]
    blocked: tuple[BlockedRule, ...]
    bounds: SweepBounds

    def as_dict(self) -> dict:
        return {
            "claim": self.claim,
            "available": list(self.available),
            "blocked": [b.as_dict() for b in self.blocked],
            "bounds": {
                "max_nodes": self.bounds.max_nodes,
                "max_atoms": self.bounds.max_atoms,
                "max_box_index": self.bounds.max_box_index,
                "max_operand_depth": self.bounds.max_operand_depth,
            },
        }


def ks_prerequisite_report(bounds: SweepBounds = SweepBounds()) -> PrerequisiteReport:
    """Why the classical "every real is rational or irrational" shortcut
    does not survive staging: the two rules it needs both have stage-tree
    countermodels, produced live by the sweep."""
    cs4 = validity_sweep("cs4", bounds)
    cs5 = validity_sweep("cs5", bounds)
    assert cs4.countermodel is not None and cs5.countermodel is not None
    return PrerequisiteReport(
        claim=(
            "the unrestricted two-branch argument: decide [n]-settledness of the "
            "assertion, then collapse eventual settledness to a present decision"
        ),
        available=(
            "ic1 (settled stays settled)",
            "ic2 (refuted now, refuted at every stage)",
            "ic3 (true now, true at some stage)",
            "md (never settled at any stage, hence not settled)",
        ),
        blocked=(
            BlockedRule(
                rule="case split on [n]phi | ~[n]phi",
                schema="cs4",
                role="branch on whether the test at stage n has decided the assertion",
                countermodel=cs4.countermodel,
            ),
            BlockedRule(
                rule="collapse <*>phi -> phi",
                schema="cs5",
                role="turn eventual settledness into a decision made now",
                countermodel=cs5.countermodel,
            ),
        ),
        bounds=bounds,
    )
