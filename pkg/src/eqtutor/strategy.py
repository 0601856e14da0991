"""Strategy combinators and their small-step interpreter.

A strategy is a tree of combinators over rule atoms. The interpreter
runs a stack machine whose visible output is a stream of steps: rule
applications plus enter/exit events for labeled regions. Sugar
(try/repeat/many) is interpreted by its defining rewrite, so the
definitional laws hold by construction rather than by accident.

Choice is committed nowhere: the derivation search backtracks over its
children. Left-biased choice (orelse) commits to the first child that
can contribute anything, where "anything" means a rule step or a
successful zero-step completion.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterator

from .terms import Expr, InvalidPathError, Path, all_paths, replace_at, subterm


class StrategyError(Exception):
    pass


class DepthExceeded(StrategyError):
    pass


# --- the combinator tree --------------------------------------------------


@dataclass(frozen=True)
class Strategy:
    removed: bool = field(default=False, kw_only=True)
    collapsed: bool = field(default=False, kw_only=True)
    hidden: bool = field(default=False, kw_only=True)


@dataclass(frozen=True)
class RuleAtom(Strategy):
    rule_name: str


@dataclass(frozen=True)
class Label(Strategy):
    name: str
    child: Strategy


@dataclass(frozen=True)
class Seq(Strategy):
    children: tuple[Strategy, ...]


@dataclass(frozen=True)
class Choice(Strategy):
    children: tuple[Strategy, ...]


@dataclass(frozen=True)
class OrElse(Strategy):
    children: tuple[Strategy, ...]


@dataclass(frozen=True)
class Fail(Strategy):
    pass


@dataclass(frozen=True)
class Succeed(Strategy):
    pass


@dataclass(frozen=True)
class Fix(Strategy):
    var: str
    child: Strategy


@dataclass(frozen=True)
class StratVar(Strategy):
    var: str


@dataclass(frozen=True)
class Somewhere(Strategy):
    child: Strategy


@dataclass(frozen=True)
class Many(Strategy):
    child: Strategy


@dataclass(frozen=True)
class Repeat(Strategy):
    child: Strategy


@dataclass(frozen=True)
class Try(Strategy):
    child: Strategy


@dataclass(frozen=True)
class Not(Strategy):
    child: Strategy


@dataclass(frozen=True)
class StrategyRef(Strategy):
    name: str


def seq(children: list[Strategy]) -> Strategy:
    return Seq(tuple(children)) if children else Succeed()


def alternatives(children: list[Strategy]) -> Strategy:
    return Choice(tuple(children)) if children else Fail()


def or_else(children: list[Strategy]) -> Strategy:
    return OrElse(tuple(children)) if children else Fail()


def child_strategies(s: Strategy) -> tuple[Strategy, ...]:
    if isinstance(s, (Label, Fix, Somewhere, Many, Repeat, Try, Not)):
        return (s.child,)
    if isinstance(s, (Seq, Choice, OrElse)):
        return s.children
    return ()


def with_children(s: Strategy, children: tuple[Strategy, ...]) -> Strategy:
    if isinstance(s, (Label, Fix, Somewhere, Many, Repeat, Try, Not)):
        return replace(s, child=children[0])
    if isinstance(s, (Seq, Choice, OrElse)):
        return replace(s, children=children)
    return s


# --- steps and derivations --------------------------------------------------

RULE = "rule"
ENTER = "enter"
EXIT = "exit"


@dataclass(frozen=True)
class Step:
    kind: str  # rule | enter | exit
    name: str
    path: Path
    before: Expr
    after: Expr
    visible: bool
    scratch: tuple[Expr, ...] = ()
    collapsed: bool = False  # label events carry the label's collapse flag


@dataclass(frozen=True)
class Derivation:
    initial: Expr
    steps: tuple[Step, ...]
    final: Expr

    def rule_steps(self) -> list[Step]:
        return [s for s in self.steps if s.kind == RULE]


# --- machine ---------------------------------------------------------------

# Environment: linked bindings var -> (fix node, defining environment).
Env = tuple | None  # (("var", (fix_node, env)), parent)


def _lookup(env: Env, var: str):
    while env is not None:
        (name, closure), env = env
        if name == var:
            return closure
    return None


@dataclass(frozen=True)
class _Run:
    node: Strategy
    path: Path
    hidden: bool
    env: Env


@dataclass(frozen=True)
class _ExitMark:
    name: str
    path: Path
    visible: bool
    collapsed: bool


_Item = _Run | _ExitMark


@dataclass(frozen=True)
class State:
    term: Expr
    stack: tuple[_Item, ...]
    # fix/ref unfoldings since the last rule step; bounds silent loops
    guard: frozenset


def initial_state(s: Strategy, term: Expr) -> State:
    return State(term, (_Run(s, (), False, None),), frozenset())


MANY_VAR = "*many*"


class Interpreter:
    """Resolves rule and strategy names during interpretation."""

    def __init__(
        self,
        rules: dict | None = None,
        strategies: dict[str, Strategy] | None = None,
    ) -> None:
        if rules is None:
            from .rules import ALL_RULES

            rules = dict(ALL_RULES)
        self.rules = rules
        self.strategies = dict(strategies or {})

    def rule(self, name: str):
        got = self.rules.get(name)
        if got is None:
            raise StrategyError(f"unknown rule: {name}")
        return got

    def strategy(self, name: str) -> Strategy:
        got = self.strategies.get(name)
        if got is None:
            raise StrategyError(f"unknown strategy: {name}")
        return got

    # ordered successor moves: ("rule", Step, State) | ("label", Step, State)
    # | ("silent", None, State) | ("done", None, term-as-final-state)
    def advance(self, state: State) -> list[tuple]:
        if not state.stack:
            return [("done", None, state)]
        item, rest = state.stack[0], state.stack[1:]

        if isinstance(item, _ExitMark):
            step = Step(
                EXIT, item.name, item.path, state.term, state.term,
                item.visible, collapsed=item.collapsed,
            )
            return [("label", step, State(state.term, rest, state.guard))]

        node, path, hidden, env = item.node, item.path, item.hidden, item.env
        if node.removed:
            return []

        if isinstance(node, RuleAtom):
            rule = self.rule(node.rule_name)
            try:
                focus = subterm(state.term, path)
            except InvalidPathError:
                return []
            out: list[tuple] = []
            visible = not hidden and not node.hidden
            for result in rule.apply(focus):
                after = replace_at(state.term, path, result.term)
                step = Step(
                    RULE, node.rule_name, path, state.term, after,
                    visible, scratch=result.scratch,
                )
                out.append(("rule", step, State(after, rest, frozenset())))
            return out

        if isinstance(node, Label):
            shown = not hidden and not node.hidden
            enter = Step(
                ENTER, node.name, path, state.term, state.term,
                shown, collapsed=node.collapsed,
            )
            stack = (
                _Run(node.child, path, hidden or node.hidden, env),
                _ExitMark(node.name, path, shown, node.collapsed),
            ) + rest
            return [("label", enter, State(state.term, stack, state.guard))]

        if isinstance(node, Seq):
            items = tuple(_Run(c, path, hidden or node.hidden, env) for c in node.children)
            return [("silent", None, State(state.term, items + rest, state.guard))]

        if isinstance(node, Choice):
            out = []
            for child in node.children:
                stack = (_Run(child, path, hidden or node.hidden, env),) + rest
                out.append(("silent", None, State(state.term, stack, state.guard)))
            return out

        if isinstance(node, OrElse):
            for child in node.children:
                probe = self.probe(
                    State(state.term, (_Run(child, path, hidden or node.hidden, env),),
                          state.guard)
                )
                if probe.has_step or probe.can_finish:
                    stack = (_Run(child, path, hidden or node.hidden, env),) + rest
                    return [("silent", None, State(state.term, stack, state.guard))]
            return []

        if isinstance(node, Fail):
            return []

        if isinstance(node, Succeed):
            return [("silent", None, State(state.term, rest, state.guard))]

        if isinstance(node, Try):
            sugar = OrElse((node.child, Succeed()), hidden=node.hidden)
            stack = (_Run(sugar, path, hidden, env),) + rest
            return [("silent", None, State(state.term, stack, state.guard))]

        if isinstance(node, Repeat):
            sugar = Seq((Many(node.child), Not(node.child)), hidden=node.hidden)
            stack = (_Run(sugar, path, hidden, env),) + rest
            return [("silent", None, State(state.term, stack, state.guard))]

        if isinstance(node, Many):
            body = Try(Seq((node.child, StratVar(MANY_VAR))))
            sugar = Fix(MANY_VAR, body, hidden=node.hidden)
            stack = (_Run(sugar, path, hidden, env),) + rest
            return [("silent", None, State(state.term, stack, state.guard))]

        if isinstance(node, Fix):
            key = (node, path, state.term)
            if key in state.guard:
                return []
            closure = (node, env)
            bound: Env = ((node.var, closure), env)
            stack = (_Run(node.child, path, hidden or node.hidden, bound),) + rest
            return [("silent", None, State(state.term, stack, state.guard | {key}))]

        if isinstance(node, StratVar):
            closure = _lookup(env, node.var)
            if closure is None:
                raise StrategyError(f"unbound strategy variable: {node.var}")
            fix_node, def_env = closure
            stack = (_Run(fix_node, path, hidden, def_env),) + rest
            return [("silent", None, State(state.term, stack, state.guard))]

        if isinstance(node, Somewhere):
            try:
                focus = subterm(state.term, path)
            except InvalidPathError:
                return []
            out = []
            for sub_path in all_paths(focus):
                stack = (
                    _Run(node.child, path + sub_path, hidden or node.hidden, env),
                ) + rest
                out.append(("silent", None, State(state.term, stack, state.guard)))
            return out

        if isinstance(node, Not):
            probe = self.probe(
                State(state.term, (_Run(node.child, path, True, env),), state.guard)
            )
            if probe.has_step:
                return []
            return [("silent", None, State(state.term, rest, state.guard))]

        if isinstance(node, StrategyRef):
            key = (("ref", node.name), path, state.term)
            if key in state.guard:
                return []
            resolved = self.strategy(node.name)
            stack = (_Run(resolved, path, hidden or node.hidden, None),) + rest
            return [("silent", None, State(state.term, stack, state.guard | {key}))]

        raise StrategyError(f"cannot interpret {type(node).__name__}")

    def probe(self, state: State) -> "_Probe":
        """Whether any rule step is reachable through silent moves, and
        whether the strategy can finish without one."""
        has_step = False
        can_finish = False
        seen: set[tuple] = set()
        work = [state]
        budget = 50_000
        while work:
            budget -= 1
            if budget < 0:
                raise StrategyError("strategy exploration exceeded its budget")
            current = work.pop()
            key = (current.term, current.stack)
            if key in seen:
                continue
            seen.add(key)
            for kind, _, nxt in self.advance(current):
                if kind == "rule":
                    has_step = True
                elif kind == "done":
                    can_finish = True
                else:
                    work.append(nxt)
            if has_step and can_finish:
                break
        return _Probe(has_step, can_finish)

    # --- the public queries ------------------------------------------------

    def firsts(self, s: Strategy, term: Expr) -> list[tuple[Step, State]]:
        """First rule steps, in search order, with their residual states."""
        out: list[tuple[Step, State]] = []
        work: list[tuple] = [("state", None, initial_state(s, term))]
        budget = 50_000
        while work:
            budget -= 1
            if budget < 0:
                raise StrategyError("strategy exploration exceeded its budget")
            kind, step, current = work.pop()
            if kind == "rule":
                out.append((step, current))
                continue
            for move in reversed(self.advance(current)):
                if move[0] == "rule":
                    work.append(move)
                elif move[0] != "done":
                    work.append(("state", None, move[2]))
        return out

    def has_step(self, s: Strategy, term: Expr) -> bool:
        return self.probe(initial_state(s, term)).has_step

    def may_succeed(self, s: Strategy, term: Expr) -> bool:
        return self.probe(initial_state(s, term)).can_finish

    def derivations(
        self,
        s: Strategy,
        term: Expr,
        limit: int | None = None,
        max_steps: int = 1000,
    ) -> Iterator[Derivation]:
        """Complete derivations, leftmost-first; terms revisited within a
        branch are pruned except for annotation-only steps."""
        stack: list[tuple[State, tuple[Step, ...], frozenset]] = [
            (initial_state(s, term), (), frozenset((term,)))
        ]
        produced = 0
        while stack:
            state, steps, visited = stack.pop()
            moves = self.advance(state)
            for kind, step, nxt in reversed(moves):
                if kind == "done":
                    yield Derivation(term, steps, nxt.term)
                    produced += 1
                    if limit is not None and produced >= limit:
                        return
                elif kind == "rule":
                    assert step is not None
                    if len(steps) >= max_steps:
                        raise DepthExceeded(
                            f"derivation exceeded {max_steps} steps"
                        )
                    if step.after == step.before:
                        stack.append((nxt, steps + (step,), visited))
                        continue
                    if step.after in visited:
                        continue
                    stack.append((nxt, steps + (step,), visited | {step.after}))
                elif kind == "label":
                    assert step is not None
                    stack.append((nxt, steps + (step,), visited))
                else:
                    stack.append((nxt, steps, visited))

    def first_derivation(self, s: Strategy, term: Expr) -> Derivation | None:
        return next(self.derivations(s, term, limit=1), None)


@dataclass(frozen=True)
class _Probe:
    has_step: bool
    can_finish: bool


# --- presentation -----------------------------------------------------------


@dataclass(frozen=True)
class PresentedStep:
    name: str
    before: Expr
    after: Expr
    scratch: tuple[Expr, ...] = ()
    collapsed_label: bool = False


def _matching_exit(steps: tuple[Step, ...], start: int) -> int:
    depth = 0
    for i in range(start, len(steps)):
        if steps[i].kind == ENTER and steps[i].name == steps[start].name:
            depth += 1
        elif steps[i].kind == EXIT and steps[i].name == steps[start].name:
            depth -= 1
            if depth == 0:
                return i
    raise StrategyError("unbalanced label events in derivation")


def _fold_forward(steps: tuple[Step, ...], i: int, after: Expr) -> Expr:
    """Absorb hidden rule steps up to the next visible boundary."""
    j = i + 1
    while j < len(steps):
        step = steps[j]
        if step.kind == RULE:
            if step.visible:
                break
            after = step.after
        elif step.kind == ENTER and step.visible and step.collapsed:
            break
        j += 1
    return after


def present(derivation: Derivation) -> list[PresentedStep]:
    """Visible steps as shown to a learner: hidden effects folded into the
    preceding visible step, collapsed labeled regions shown as one step."""
    steps = derivation.steps
    out: list[PresentedStep] = []
    i = 0
    while i < len(steps):
        step = steps[i]
        if step.kind == RULE and step.visible:
            after = _fold_forward(steps, i, step.after)
            out.append(PresentedStep(step.name, step.before, after, step.scratch))
            i += 1
            continue
        if step.kind == ENTER and step.visible and step.collapsed:
            end = _matching_exit(steps, i)
            inner = [s for s in steps[i + 1 : end] if s.kind == RULE]
            if inner:
                after = _fold_forward(steps, end, steps[end].after)
                out.append(
                    PresentedStep(step.name, step.before, after, collapsed_label=True)
                )
            i = end + 1
            continue
        i += 1
    return out


def term_lines(derivation: Derivation) -> list[Expr | tuple[str, Expr]]:
    """The lines of a worked solution: the initial term, then one line per
    presented step; annotation-only steps contribute their scratch lines."""
    lines: list[Expr | tuple[str, Expr]] = [derivation.initial]
    for step in present(derivation):
        if step.after == step.before and step.scratch:
            lines.extend(step.scratch)
        else:
            lines.append(step.after)
    return lines
