"""Fixed-parameter solver for two-sided covering when every woman ranks at
most two men; the parameter is the number of distinguished people a stable
matching leaves unmatched.

Relative to the stable matching, a solution decomposes into alternating
paths and cycles.  With women's lists capped at two, the walk out of an
uncovered woman is forced once its first edge is fixed, so the whole
feminine part of the decomposition can be guessed with finitely many bits
per uncovered woman: her first edge, whether her path leans on a cycle or
on another feminine path, whether it is the long (neutral) walk, and
whether it is the plain shortest usable prefix or the first strictly
cheaper extension.  The masculine part is completed by guessing which
groups of uncovered men exist to neutralise otherwise-blocking edges at
unmatched women's second choices, and covering the rest with the
one-sided path solver run with roles swapped.  Every produced candidate is
scored with the global blocking-pair count and the best one wins.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .bipartite import cover_distinguished
from .errors import WrongAlgorithmError
from .model import (
    AlgorithmTag,
    Matching,
    SmcInstance,
    SolveResult,
    blocking_pairs,
    infeasible_result,
    is_feasible,
    make_result,
)
from .pathcover import AugPath, flip_pairs, min_cost_path_family
from .stable import gale_shapley


# ---------------------------------------------------------------------------
# diff components


@dataclass(frozen=True)
class Component:
    """One alternating component of a candidate difference.

    ``women``/``men`` interleave like the walk that produced it:
    women[0], men[0], women[1], men[1], ...  ``kind`` is 'path-man-end'
    (ends at men[-1], previously unmatched), 'path-woman-end' (ends at
    women[-1], who loses her partner), 'man-path' (a masculine path:
    men[0] starts it, women[-1] was unmatched and gains a partner) or
    'cycle' (closed by the edge (men[0], women[-1]))."""

    women: tuple[int, ...]
    men: tuple[int, ...]
    kind: str

    def vertices(self) -> frozenset[tuple[str, int]]:
        return frozenset(("w", w) for w in self.women) | frozenset(
            ("m", m) for m in self.men
        )

    def flip(self, pm: list, pw: list) -> None:
        """Apply this component's exchange to partner arrays."""
        if self.kind == "cycle":
            # women[i] sits between men[i] and men[i+1]; the flip pairs her
            # with the latter, and the closing edge pairs men[0] with the
            # last woman
            for i in range(1, len(self.men)):
                pm[self.men[i]] = self.women[i - 1]
                pw[self.women[i - 1]] = self.men[i]
            pm[self.men[0]] = self.women[-1]
            pw[self.women[-1]] = self.men[0]
        elif self.kind == "man-path":
            for i, m in enumerate(self.men):
                pm[m] = self.women[i]
                pw[self.women[i]] = m
        else:
            for i, m in enumerate(self.men):
                pm[m] = self.women[i]
                pw[self.women[i]] = m
            if self.kind == "path-woman-end":
                pw[self.women[-1]] = None


def apply_components(
    inst: SmcInstance, m_s: Matching, comps: Iterable[Component]
) -> Matching:
    pm = list(m_s.partner_of_man)
    pw = list(m_s.partner_of_woman)
    for c in comps:
        c.flip(pm, pw)
    pairs = [(m, w) for m, w in enumerate(pm) if w is not None and pw[w] == m]
    return Matching.from_pairs(inst.n_men, inst.n_women, pairs)


# ---------------------------------------------------------------------------
# guesses


@dataclass(frozen=True)
class GuessRecord:
    """One fully specified branch of the search.

    ``first_edge`` fixes each uncovered distinguished woman's partner;
    ``on_cycle``/``neutral``/``relies_on``/``q_choice`` partition those women
    into the four ways their paths can be pinned down; ``elimination_sets``
    are the guessed disjoint groups of uncovered distinguished men whose
    paths exist to neutralise a blocking edge."""

    first_edge: tuple[tuple[int, int], ...]
    on_cycle: frozenset[int]
    neutral: frozenset[int]
    relies_on: tuple[tuple[int, int], ...]
    q_choice: tuple[tuple[int, int], ...]
    elimination_sets: tuple[frozenset[int], ...]


def _set_partitions(items: tuple[int, ...]):
    """All partitions of ``items`` into nonempty blocks."""
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield part + (frozenset([first]),)
        for i, block in enumerate(part):
            yield part[:i] + (block | {first},) + part[i + 1 :]


def _elimination_families(men0: tuple[int, ...]):
    """All unordered families of pairwise-disjoint nonempty subsets."""
    seen = set()
    for r in range(len(men0) + 1):
        for subset in itertools.combinations(men0, r):
            for part in _set_partitions(subset):
                fam = tuple(sorted(part, key=sorted))
                if fam not in seen:
                    seen.add(fam)
                    yield fam


def generate_guesses(inst: SmcInstance, women0: list[int], men0: list[int]):
    """Every GuessRecord for the given uncovered distinguished people."""
    first_options = []
    for w in women0:
        opts = [(w, m) for m in inst.women[w]]
        if not opts:
            return
        first_options.append(opts)
    mode_options = []
    for w in women0:
        modes: list[tuple[str, Optional[int]]] = [
            ("cycle", None),
            ("neutral", None),
            ("q", 1),
            ("q", 2),
        ]
        modes.extend(("rely", y) for y in women0 if y != w)
        mode_options.append(modes)
    fams = list(_elimination_families(tuple(men0)))
    for firsts in itertools.product(*first_options):
        if len({m for _, m in firsts}) != len(firsts):
            continue
        for modes in itertools.product(*mode_options):
            on_cycle = frozenset(
                w for w, (kind, _) in zip(women0, modes) if kind == "cycle"
            )
            neutral = frozenset(
                w for w, (kind, _) in zip(women0, modes) if kind == "neutral"
            )
            relies = tuple(
                (w, arg)
                for w, (kind, arg) in zip(women0, modes)
                if kind == "rely"
            )
            qs = tuple(
                (w, arg) for w, (kind, arg) in zip(women0, modes) if kind == "q"
            )
            for fam in fams:
                yield GuessRecord(
                    first_edge=firsts,
                    on_cycle=on_cycle,
                    neutral=neutral,
                    relies_on=relies,
                    q_choice=qs,
                    elimination_sets=fam,
                )


# ---------------------------------------------------------------------------
# forced chains (women rank at most two men)


@dataclass(frozen=True)
class Chain:
    """The unique maximal alternating walk out of an uncovered woman.

    ``end_kind``: 'man' (last man unmatched), 'woman' (last woman has no
    second choice), or 'closure' (the last woman's second choice is
    ``men[closure_index]``, which closes a cycle)."""

    women: tuple[int, ...]
    men: tuple[int, ...]
    end_kind: str
    closure_index: int = -1


def forced_chain(inst: SmcInstance, m_s: Matching, w0: int, m0: int) -> Chain:
    women = [w0]
    men: list[int] = []
    index_of_man: dict[int, int] = {}
    m = m0
    while True:
        if m in index_of_man:
            return Chain(tuple(women), tuple(men), "closure", index_of_man[m])
        index_of_man[m] = len(men)
        men.append(m)
        w = m_s.partner_of_man[m]
        if w is None:
            return Chain(tuple(women), tuple(men), "man")
        women.append(w)
        # with lists of length <= 2, w has at most one man besides her mate
        others = [x for x in inst.women[w] if x != m_s.partner_of_woman[w]]
        if not others:
            return Chain(tuple(women), tuple(men), "woman")
        m = others[0]


class Contradiction(Exception):
    """The guess is impossible; prune the branch."""


def _chain_path(chain: Chain, end_women_index: int) -> Component:
    """Prefix of a chain ending at women[end_women_index]."""
    return Component(
        women=chain.women[: end_women_index + 1],
        men=chain.men[:end_women_index],
        kind="path-woman-end",
    )


def _chain_full_path(chain: Chain) -> Component:
    return Component(women=chain.women, men=chain.men, kind="path-man-end")


def _valid_end_indices(inst: SmcInstance, chain: Chain) -> list[int]:
    """Woman positions where a prefix is a usable path."""
    out = []
    for i in range(1, len(chain.women)):
        if chain.women[i] not in inst.distinguished_women:
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# phase 1: cycles and the feminine side of the decomposition


def _branch_instance(inst: SmcInstance, firsts: tuple[tuple[int, int], ...]):
    """Drop the edges an uncovered woman likes less than her guessed mate.

    Such edges appear in no candidate of the branch and cannot block one
    that matches her as guessed, so removing them declutters every
    subsequent blocking count.
    """
    drop = set()
    for w, m in firsts:
        rank = {x: i for i, x in enumerate(inst.women[w])}
        for x in inst.women[w]:
            if rank[x] > rank[m]:
                drop.add((x, w))
    if not drop:
        return inst, frozenset()
    men = [tuple(w for w in prefs if (m, w) not in drop) for m, prefs in enumerate(inst.men)]
    women = [
        tuple(m for m in prefs if (m, w) not in drop)
        for w, prefs in enumerate(inst.women)
    ]
    pruned = SmcInstance(
        men=tuple(men),
        women=tuple(women),
        distinguished_women=inst.distinguished_women,
        distinguished_men=inst.distinguished_men,
    )
    return pruned, frozenset(drop)


def phase1_paths(
    inst_b: SmcInstance,
    m_s: Matching,
    guess: GuessRecord,
    women0: list[int],
    men0: list[int],
) -> list[Component]:
    """Pin down every cycle, feminine and neutral path of the guess.

    Raises Contradiction when the guess cannot be realised.
    """
    chains: dict[int, Chain] = {}
    first = dict(guess.first_edge)
    for w in women0:
        chains[w] = forced_chain(inst_b, m_s, w, first[w])
    obligatory: dict[int, list[int]] = {w: [] for w in women0}
    comps: dict[int, Component] = {}
    cycles: list[Component] = []

    relies = dict(guess.relies_on)
    for w, y in relies.items():
        cw, cy = chains[w], chains[y]
        men_on_y = set(cy.men)
        women_on_y = set(cy.women)
        cut = None
        for j, m in enumerate(cw.men):
            if m in men_on_y:
                cut = j
                break
            if j + 1 < len(cw.women) and cw.women[j + 1] in women_on_y:
                raise Contradiction  # chains may only merge at a man
        if cut is None or cut == 0:
            raise Contradiction
        if cw.women[cut] in inst_b.distinguished_women:
            raise Contradiction
        comps[w] = _chain_path(chains[w], cut)
        obligatory[y].append(cw.men[cut])

    cycles_by_vertices: dict[frozenset, Component] = {}
    for w in sorted(guess.on_cycle):
        c = chains[w]
        if c.end_kind != "closure":
            raise Contradiction
        j = c.closure_index
        if j == 0:
            raise Contradiction
        if c.women[j] in inst_b.distinguished_women:
            raise Contradiction
        comps[w] = _chain_path(c, j)
        cyc = Component(women=c.women[j + 1 :], men=c.men[j:], kind="cycle")
        # two chains may run into the same cycle; its flip is the same
        # exchange whichever man it was entered at
        cycles_by_vertices.setdefault(cyc.vertices(), cyc)
    cycles.extend(cycles_by_vertices[k] for k in sorted(cycles_by_vertices, key=sorted))

    for w in sorted(guess.neutral):
        c = chains[w]
        if c.end_kind != "man" or c.men[-1] not in inst_b.distinguished_men:
            raise Contradiction
        comps[w] = _chain_full_path(c)

    q_choice = dict(guess.q_choice)
    for w in sorted(q_choice):
        c = chains[w]
        need = obligatory[w]
        ends = _valid_end_indices(inst_b, c)
        min_end = 0
        for m in need:
            if m not in c.men:
                raise Contradiction
            min_end = max(min_end, c.men.index(m) + 1)
        options: list[Component] = [
            _chain_path(c, i) for i in ends if i >= min_end
        ]
        if c.end_kind == "man" and c.men[-1] not in inst_b.distinguished_men:
            options.append(_chain_full_path(c))
        if not options:
            raise Contradiction
        q1 = options[0]
        if q_choice[w] == 1:
            comps[w] = q1
        else:
            base = _component_blocking(inst_b, m_s, q1)
            pick = None
            for cand in options[1:]:
                if _component_blocking(inst_b, m_s, cand) < base:
                    pick = cand
                    break
            if pick is None:
                raise Contradiction
            comps[w] = pick

    # leaned-on chains must really contain their obligatory men
    for w, y in relies.items():
        target = comps[y]
        if not set(obligatory[y]) <= set(target.men):
            raise Contradiction

    family = [comps[w] for w in women0] + cycles
    _check_disjoint(family)
    return family


def _component_blocking(inst: SmcInstance, m_s: Matching, comp: Component) -> int:
    return len(blocking_pairs(inst, apply_components(inst, m_s, [comp])))


def _check_disjoint(comps: list[Component]) -> None:
    seen: set[tuple[str, int]] = set()
    for c in comps:
        vs = c.vertices()
        if seen & vs:
            raise Contradiction
        seen |= vs


# ---------------------------------------------------------------------------
# phase 2: volatile edges, elimination paths, masculine completion


def volatile_edges(inst: SmcInstance, m_s: Matching) -> tuple[tuple[int, int], ...]:
    """Edges joining an unmatched woman to her second choice."""
    out = []
    for w in range(inst.n_women):
        if m_s.partner_of_woman[w] is None and len(inst.women[w]) == 2:
            out.append((inst.women[w][1], w))
    return tuple(sorted(out))


def masculine_path_to(
    inst: SmcInstance,
    m_s: Matching,
    w_target: int,
    blocked_vertices: frozenset[tuple[str, int]],
) -> Optional[Component]:
    """The unique masculine path ending at ``w_target`` via her first choice.

    Walks backwards: each step is forced because women rank at most two
    men.  Fails (None) when the walk dies, loops, touches a blocked vertex,
    or starts at a man who is not an uncovered distinguished man.
    """
    if ("w", w_target) in blocked_vertices or not inst.women[w_target]:
        return None
    men_rev = []
    women_rev = [w_target]
    m = inst.women[w_target][0]
    seen = {("w", w_target)}
    while True:
        if ("m", m) in blocked_vertices or ("m", m) in seen:
            return None
        seen.add(("m", m))
        men_rev.append(m)
        w = m_s.partner_of_man[m]
        if w is None:
            if m not in inst.distinguished_men:
                return None
            break
        if ("w", w) in blocked_vertices or ("w", w) in seen:
            return None
        seen.add(("w", w))
        women_rev.append(w)
        others = [x for x in inst.women[w] if x != m]
        if not others:
            return None
        m = others[0]
    return Component(
        women=tuple(reversed(women_rev)),
        men=tuple(reversed(men_rev)),
        kind="man-path",
    )


def elimination_paths(
    inst: SmcInstance,
    m_s: Matching,
    f: tuple[int, int],
    blocked_vertices: frozenset[tuple[str, int]],
    volatile: tuple[tuple[int, int], ...],
) -> Optional[list[Component]]:
    """Minimal closure of masculine paths neutralising volatile edge ``f``.

    Starts with the path re-covering f's woman; any member path that itself
    exposes a blocking volatile edge pulls in that edge's path too.  None
    when some required path is missing or the closure self-intersects.
    """
    first = masculine_path_to(inst, m_s, f[1], blocked_vertices)
    if first is None:
        return None
    closure = [first]
    handled = {f[1]}
    used = set(first.vertices())
    queue = [first]
    while queue:
        q = queue.pop(0)
        flipped = apply_components(inst, m_s, [q])
        blocked = set(blocking_pairs(inst, flipped))
        for f2 in volatile:
            if f2[1] in handled or f2 not in blocked:
                continue
            nxt = masculine_path_to(inst, m_s, f2[1], blocked_vertices)
            if nxt is None:
                return None
            if used & nxt.vertices():
                return None
            handled.add(f2[1])
            used |= nxt.vertices()
            closure.append(nxt)
            queue.append(nxt)
    return closure


def phase2_assemble(
    inst: SmcInstance,
    inst_b: SmcInstance,
    m_s: Matching,
    family: list[Component],
    guess: GuessRecord,
    men0: list[int],
    deleted_edges: frozenset[tuple[int, int]],
) -> Matching:
    """Choose elimination paths per guessed group, cover the remaining
    uncovered distinguished men with the swapped path solver, and assemble
    the candidate matching.  Raises Contradiction when the guess fails.
    """
    f_vertices = frozenset().union(*[c.vertices() for c in family]) if family else frozenset()
    base = apply_components(inst_b, m_s, family)
    blocked_base = set(blocking_pairs(inst_b, base))
    volatile = volatile_edges(inst_b, m_s)

    elim_comps: list[Component] = []
    elim_vertices: set[tuple[str, int]] = set()
    chosen_edges: list[tuple[int, int]] = []
    for group in guess.elimination_sets:
        best: Optional[tuple[int, tuple[int, int], list[Component]]] = None
        for f in volatile:
            if f not in blocked_base:
                continue
            closure = elimination_paths(
                inst_b, m_s, f, f_vertices | frozenset(elim_vertices), volatile
            )
            if closure is None:
                continue
            starts = frozenset(c.men[0] for c in closure)
            if starts != group:
                continue
            count = len(
                blocking_pairs(
                    inst_b, apply_components(inst_b, m_s, family + elim_comps + closure)
                )
            )
            if best is None or (count, f) < (best[0], best[1]):
                best = (count, f, closure)
        if best is None:
            raise Contradiction
        chosen_edges.append(best[1])
        elim_comps.extend(best[2])
        for c in best[2]:
            elim_vertices |= c.vertices()

    covered_men = {m for c in family + elim_comps for m in c.men}
    rest = [m for m in men0 if m not in covered_men]
    forbidden = f_vertices | frozenset(elim_vertices)
    # the remaining men are covered independently by the role-swapped
    # one-sided solver, kept away from everything already placed
    swapped = inst_b.swap_genders()
    fv = frozenset(
        ("w" if side == "m" else "m", idx) for side, idx in forbidden
    )
    fe = frozenset((w, m) for m, w in chosen_edges) | frozenset(
        (w, m) for m, w in deleted_edges
    )
    m_s_sw = Matching(m_s.partner_of_woman, m_s.partner_of_man)
    paths = min_cost_path_family(swapped, m_s_sw, rest, fv, fe)
    if paths is None:
        raise Contradiction
    rest_comps = [
        Component(
            women=tuple(p.women),
            men=tuple(p.men),
            kind="path-man-end" if p.ends_at_man else "path-woman-end",
        )
        for p in paths
    ]
    # translate the swapped-space components back: swapped women are men
    rest_comps = [
        Component(women=c.men, men=c.women, kind="man-path-like:" + c.kind)
        for c in rest_comps
    ]
    fixed = []
    for c in rest_comps:
        if c.kind.endswith("path-man-end"):
            # swapped man-end = original woman gains a partner
            fixed.append(Component(women=c.women, men=c.men, kind="man-path"))
        else:
            # swapped woman-end = original man loses his partner
            fixed.append(
                Component(women=c.women, men=c.men, kind="man-path-drop")
            )
    all_comps = family + elim_comps + fixed
    return _apply_mixed(inst, m_s, all_comps)


def _apply_mixed(
    inst: SmcInstance, m_s: Matching, comps: list[Component]
) -> Matching:
    pm = list(m_s.partner_of_man)
    pw = list(m_s.partner_of_woman)
    for c in comps:
        if c.kind == "man-path":
            # men[i] pairs with women[i]; the last woman was unmatched
            for i, m in enumerate(c.men):
                pm[m] = c.women[i]
                pw[c.women[i]] = m
        elif c.kind == "man-path-drop":
            # ends by stealing the last man's partner: men has one extra
            for i, w in enumerate(c.women):
                pw[w] = c.men[i]
                pm[c.men[i]] = w
            pm[c.men[-1]] = None
        else:
            c.flip(pm, pw)
    pairs = [(m, w) for m, w in enumerate(pm) if w is not None and pw[w] == m]
    return Matching.from_pairs(inst.n_men, inst.n_women, pairs)


# ---------------------------------------------------------------------------
# the solver


@dataclass
class BranchStats:
    """Exploration counters, mainly for the parameter-boundedness checks."""

    guesses: int = 0
    contradictions: int = 0
    candidates: int = 0


def solve_women_deg2_fpt(
    inst: SmcInstance, stats: Optional[BranchStats] = None
) -> SolveResult:
    """Optimal two-sided covering for women's lists of length at most two.

    Explores every GuessRecord; each consistent branch contributes one
    candidate matching, scored by the global blocking-pair count (ties go to
    the candidate moving fewest edges, then lexicographic pairs).
    """
    if any(len(p) > 2 for p in inst.women):
        raise WrongAlgorithmError("every woman must rank at most two men")
    if cover_distinguished(inst) is None:
        return infeasible_result(inst, AlgorithmTag.FPT_BRANCHING)
    m_s = gale_shapley(inst)
    women0 = [
        w for w in sorted(inst.distinguished_women) if m_s.partner_of_woman[w] is None
    ]
    men0 = [
        m for m in sorted(inst.distinguished_men) if m_s.partner_of_man[m] is None
    ]
    best: Optional[tuple[int, int, tuple, Matching]] = None
    branch_cache: dict[tuple, tuple[SmcInstance, frozenset]] = {}
    for guess in generate_guesses(inst, women0, men0):
        if stats is not None:
            stats.guesses += 1
        key = guess.first_edge
        if key not in branch_cache:
            branch_cache[key] = _branch_instance(inst, key)
        inst_b, deleted = branch_cache[key]
        try:
            family = phase1_paths(inst_b, m_s, guess, women0, men0)
            candidate = phase2_assemble(
                inst, inst_b, m_s, family, guess, men0, deleted
            )
        except Contradiction:
            if stats is not None:
                stats.contradictions += 1
            continue
        if not is_feasible(inst, candidate):
            continue
        if stats is not None:
            stats.candidates += 1
        count = len(blocking_pairs(inst, candidate))
        diff = sum(
            1
            for m, w in enumerate(candidate.partner_of_man)
            if w != m_s.partner_of_man[m]
        )
        rank = (count, diff, candidate.pairs())
        if best is None or rank < (best[0], best[1], best[2]):
            best = (count, diff, candidate.pairs(), candidate)
    if best is None:
        # guard: feasibility was established, so some branch must land
        return infeasible_result(inst, AlgorithmTag.FPT_BRANCHING)
    return make_result(inst, best[3], AlgorithmTag.FPT_BRANCHING, optimal=True)


def solve_women_deg2_fpt_budget(
    inst: SmcInstance, stats: Optional[BranchStats] = None
) -> SolveResult:
    """Same solver, exposed under the blocking-pair-budget parameterisation.

    On success at most twice the optimal blocking-pair count of distinguished
    people can be unmatched by the stable matching (each flipped path blocks
    somewhere), which the caller may rely on; asserted here.
    """
    out = solve_women_deg2_fpt(inst, stats)
    if not out.infeasible:
        m_s = gale_shapley(inst)
        unmatched0 = sum(
            1
            for w in inst.distinguished_women
            if m_s.partner_of_woman[w] is None
        ) + sum(
            1 for m in inst.distinguished_men if m_s.partner_of_man[m] is None
        )
        assert unmatched0 <= 2 * out.n_blocking or unmatched0 == 0
    return out


# ---------------------------------------------------------------------------
# dependent-edge classification (used by tests and diagnostics)


@dataclass(frozen=True)
class DependentEdge:
    """A cross-component edge that lets one component's flip cancel a
    blocking pair of another's."""

    edge: tuple[int, int]
    kind: str  # 'A' or 'B'
    relying: int  # component index
    supporting: int


def _diff_components(
    inst: SmcInstance, m_s: Matching, other: Matching
) -> list[frozenset[tuple[str, int]]]:
    edges = set()
    for m, w in m_s.pairs():
        if other.partner_of_man[m] != w:
            edges.add((m, w))
    for m, w in other.pairs():
        if m_s.partner_of_man[m] != w:
            edges.add((m, w))
    adj: dict[tuple[str, int], set[tuple[str, int]]] = {}
    for m, w in edges:
        adj.setdefault(("m", m), set()).add(("w", w))
        adj.setdefault(("w", w), set()).add(("m", m))
    comps = []
    seen: set[tuple[str, int]] = set()
    for v in sorted(adj):
        if v in seen:
            continue
        stack, comp = [v], set()
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.add(u)
            for x in adj[u]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        comps.append(frozenset(comp))
    return comps


def classify_dependent(
    inst: SmcInstance, m_s: Matching, candidate: Matching
) -> list[DependentEdge]:
    """Classify every edge joining two components of the difference between
    the stable matching and a candidate."""
    comps = _diff_components(inst, m_s, candidate)
    where: dict[tuple[str, int], int] = {}
    for i, comp in enumerate(comps):
        for v in comp:
            where[v] = i

    def endpoint_degree(comp: frozenset, v: tuple[str, int]) -> bool:
        # v is an endpoint of its (path) component: exactly one diff edge
        count = 0
        side, idx = v
        for m, w in set(m_s.pairs()) ^ set(candidate.pairs()):
            if (side == "m" and m == idx) or (side == "w" and w == idx):
                count += 1
        return count == 1

    out = []
    for m, w in inst.edges:
        cm, cw = where.get(("m", m)), where.get(("w", w))
        if cm is None or cw is None or cm == cw:
            continue
        pm_s = m_s.partner_of_man[m]
        pm_o = candidate.partner_of_man[m]
        pw_s = m_s.partner_of_woman[w]
        pw_o = candidate.partner_of_woman[w]
        # type A: w ends her (path) component, is unmatched by the stable
        # matching, prefers her candidate partner to m; m prefers his stable
        # partner to w and w to his candidate partner
        if (
            endpoint_degree(comps[cw], ("w", w))
            and pw_s is None
            and pw_o is not None
            and inst.prefers_w(w, pw_o, m)
            and pm_s is not None
            and inst.prefers_m(m, pm_s, w)
            and (pm_o is None or inst.prefers_m(m, w, pm_o))
        ):
            out.append(DependentEdge((m, w), "A", relying=cm, supporting=cw))
        # type B: w ends her component, is unmatched by the candidate, and
        # m prefers his candidate partner to w and w to his stable partner
        if (
            endpoint_degree(comps[cw], ("w", w))
            and pw_o is None
            and pm_o is not None
            and inst.prefers_m(m, pm_o, w)
            and (pm_s is None or inst.prefers_m(m, w, pm_s))
        ):
            out.append(DependentEdge((m, w), "B", relying=cw, supporting=cm))
    return out
