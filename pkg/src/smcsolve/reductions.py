"""Hard-instance generators: encode clique, vertex-cover and exact-cover
questions as covering-constrained matching markets, plus a verifier tying
the source answer to the generated instance's optimum on small inputs.

Every generator names people with readable mangles: a woman ``w``'s partner
in the built-in stable matching is the man ``w^``, and her filler suitor,
when she needs one, is ``w~``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

from .bipartite import cover_distinguished
from .errors import SizeCapError, ValidationError
from .exact import enumerate_oracle, solve_guess_delete, DEFAULT_ORACLE_CAP
from .model import (
    Matching,
    NoSolutionWithin,
    SmcInstance,
    SolveResult,
    blocking_pairs,
    is_feasible,
)


def hat(name: str) -> str:
    return name + "^"


def filler(name: str) -> str:
    return name + "~"


@dataclass(frozen=True)
class ColoredGraph:
    """A graph with its vertex set split into ordered colour classes."""

    parts: tuple[tuple[str, ...], ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(tuple(p) for p in self.parts))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        seen: dict[str, int] = {}
        for i, part in enumerate(self.parts):
            if not part:
                raise ValidationError(f"part {i + 1} is empty")
            for v in part:
                if v in seen:
                    raise ValidationError(f"vertex {v} appears twice")
                seen[v] = i
        deg = {v: 0 for v in seen}
        known = set()
        for u, v in self.edges:
            if u not in seen or v not in seen:
                raise ValidationError(f"edge ({u},{v}) uses an unknown vertex")
            if seen[u] == seen[v]:
                raise ValidationError(f"edge ({u},{v}) stays inside one part")
            key = tuple(sorted((u, v)))
            if key in known:
                raise ValidationError(f"edge ({u},{v}) appears twice")
            known.add(key)
            deg[u] += 1
            deg[v] += 1
        for v, d in deg.items():
            if d == 0:
                raise ValidationError(f"vertex {v} is isolated")

    @property
    def vertex_order(self) -> tuple[str, ...]:
        return tuple(v for part in self.parts for v in part)


@dataclass(frozen=True)
class ReductionOutput:
    """A generated instance with its budget and decoding data.

    ``witness_map`` records name-to-index maps and whatever structural data
    the witness builders need; the master lists, when the construction
    defines them, ride along for downstream gadgets.
    """

    instance: SmcInstance
    budget: int
    women_names: tuple[str, ...]
    men_names: tuple[str, ...]
    witness_map: dict = field(default_factory=dict)

    def woman(self, name: str) -> int:
        return self.witness_map["woman_index"][name]

    def man(self, name: str) -> int:
        return self.witness_map["man_index"][name]

    def matching_from_names(self, pairs: Iterable[tuple[str, str]]) -> Matching:
        return Matching.from_pairs(
            self.instance.n_men,
            self.instance.n_women,
            [(self.man(m), self.woman(w)) for m, w in pairs],
        )


class _Builder:
    """Accumulates named people and name-valued preference lists."""

    def __init__(self):
        self.women: dict[str, list[str]] = {}
        self.men: dict[str, list[str]] = {}
        self.star_women: set[str] = set()
        self.star_men: set[str] = set()

    def add_woman(self, name: str, prefs: Sequence[str], star: bool = False):
        if name in self.women:
            raise ValidationError(f"woman {name} defined twice")
        self.women[name] = list(prefs)
        if star:
            self.star_women.add(name)

    def add_man(self, name: str, prefs: Sequence[str], star: bool = False):
        if name in self.men:
            raise ValidationError(f"man {name} defined twice")
        self.men[name] = list(prefs)
        if star:
            self.star_men.add(name)

    def build(self, budget: int, extra: Optional[dict] = None) -> ReductionOutput:
        women_names = tuple(self.women)
        men_names = tuple(self.men)
        wi = {w: i for i, w in enumerate(women_names)}
        mi = {m: i for i, m in enumerate(men_names)}
        for w, prefs in self.women.items():
            for m in prefs:
                if m not in mi:
                    raise ValidationError(f"woman {w} ranks unknown man {m}")
        for m, prefs in self.men.items():
            for w in prefs:
                if w not in wi:
                    raise ValidationError(f"man {m} ranks unknown woman {w}")
        inst = SmcInstance(
            men=tuple(tuple(wi[w] for w in self.men[m]) for m in men_names),
            women=tuple(tuple(mi[m] for m in self.women[w]) for w in women_names),
            distinguished_women=frozenset(wi[w] for w in self.star_women),
            distinguished_men=frozenset(mi[m] for m in self.star_men),
            budget=budget,
        )
        witness_map = {"woman_index": wi, "man_index": mi}
        if extra:
            witness_map.update(extra)
        return ReductionOutput(
            instance=inst,
            budget=budget,
            women_names=women_names,
            men_names=men_names,
            witness_map=witness_map,
        )


# ---------------------------------------------------------------------------
# colored clique


def reduce_multicolored_clique(g: ColoredGraph, k: Optional[int] = None) -> ReductionOutput:
    """Market whose optimum meets the budget exactly when the colored graph
    has a clique with one vertex per part.

    Per part a chain of node gadgets forces one vertex selection; per part
    pair a chain of edge gadgets forces one edge selection, consistent with
    the node selections only when the selected vertices are adjacent.
    """
    if k is not None and k != len(g.parts):
        raise ValidationError("part count and clique size disagree")
    k = len(g.parts)
    b = 2 * k + math.comb(k, 2)
    order = g.vertex_order
    pos = {v: i for i, v in enumerate(order)}
    part_of = {v: i for i, part in enumerate(g.parts) for v in part}
    neighbors: dict[str, list[str]] = {v: [] for v in order}
    for u, v in g.edges:
        neighbors[u].append(v)
        neighbors[v].append(u)
    for v in neighbors:
        neighbors[v].sort(key=lambda x: pos[x])
    deg = {v: len(neighbors[v]) for v in order}
    edges_between: dict[tuple[int, int], list[tuple[str, str]]] = {}
    for u, v in g.edges:
        u, v = sorted((u, v), key=lambda x: pos[x])
        i, j = sorted((part_of[u], part_of[v]))
        edges_between.setdefault((i, j), []).append((u, v))
    for key in edges_between:
        edges_between[key].sort(key=lambda e: (pos[e[0]], pos[e[1]]))

    def a_name(x: str) -> str:
        return f"a_{x}"

    def b_node(x: str, h: int) -> str:
        # canonical aliasing: the 0th link is the entry woman, the
        # (d+1)-st link is the first counter woman
        if h == 0:
            return a_name(x)
        if h == deg[x] + 1:
            return c_node(x, 1)
        return f"b_{x}^{h}"

    def c_node(x: str, h: int) -> str:
        if h == 0:
            return b_node(x, deg[x])
        return f"c_{x}^{h}"

    def a_edge(e: tuple[str, str]) -> str:
        return f"a_{{{e[0]},{e[1]}}}"

    def b_arrow(x: str, y: str) -> str:
        return f"b_{{{x}>{y}}}"

    bld = _Builder()
    men: dict[str, list[str]] = {}

    def set_man(name: str, prefs: list[str]):
        men[name] = prefs

    # node gadgets
    for i, part in enumerate(g.parts, start=1):
        first, last = part[0], part[-1]
        bld.add_woman(f"s_{i}", [hat(a_name(first))], star=True)
        bld.add_woman(f"t_{i}", [hat(f"t_{i}")], star=True)
        set_man(hat(f"t_{i}"), [f"t_{i}", a_name(last)])
        for h in range(1, b + 2):
            bld.add_woman(f"u_{i}^{h}", [hat(f"u_{i}^{h}")], star=True)
            set_man(hat(f"u_{i}^{h}"), [c_node(last, h), f"u_{i}^{h}"])
        for idx, x in enumerate(part):
            succ = part[idx + 1] if idx + 1 < len(part) else None
            pred = part[idx - 1] if idx > 0 else None
            top = hat(a_name(succ)) if succ else hat(f"t_{i}")
            bld.add_woman(a_name(x), [top, hat(a_name(x)), hat(b_node(x, 1))])
            set_man(
                hat(a_name(x)),
                [a_name(x), a_name(pred) if pred else f"s_{i}"],
            )
            for h in range(1, deg[x] + 1):
                bld.add_woman(
                    b_node(x, h),
                    [hat(b_node(x, h)), hat(b_node(x, h + 1)), filler(b_node(x, h))],
                )
                set_man(filler(b_node(x, h)), [b_node(x, h)])
                y = neighbors[x][h - 1]
                set_man(
                    hat(b_node(x, h)),
                    [b_node(x, h - 1), b_arrow(x, y), b_node(x, h)],
                )
            for h in range(1, b + 2):
                mid = (
                    hat(c_node(succ, h))
                    if succ
                    else hat(f"u_{i}^{h}")
                )
                tail = hat(c_node(x, h + 1)) if h <= b else filler(c_node(x, h))
                bld.add_woman(c_node(x, h), [hat(c_node(x, h)), mid, tail])
                set_man(
                    hat(c_node(x, h)),
                    [c_node(x, h - 1)]
                    + ([c_node(pred, h)] if pred else [])
                    + [c_node(x, h)],
                )
            set_man(filler(c_node(x, b + 1)), [c_node(x, b + 1)])

    # edge gadgets
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            pair_edges = edges_between.get((i - 1, j - 1), [])
            sname, tname = f"s_{{{i},{j}}}", f"t_{{{i},{j}}}"
            bld.add_woman(
                sname,
                [hat(a_edge(pair_edges[0]))] if pair_edges else [],
                star=True,
            )
            bld.add_woman(tname, [hat(tname)], star=True)
            set_man(
                hat(tname),
                [tname] + ([a_edge(pair_edges[-1])] if pair_edges else []),
            )
            for idx, e in enumerate(pair_edges):
                x, y = e
                succ = pair_edges[idx + 1] if idx + 1 < len(pair_edges) else None
                pred = pair_edges[idx - 1] if idx > 0 else None
                top = hat(a_edge(succ)) if succ else hat(tname)
                bld.add_woman(a_edge(e), [top, hat(a_edge(e)), hat(b_arrow(x, y))])
                set_man(
                    hat(a_edge(e)),
                    [a_edge(e), a_edge(pred) if pred else sname],
                )
                hx = neighbors[x].index(y) + 1
                hy = neighbors[y].index(x) + 1
                bld.add_woman(
                    b_arrow(x, y),
                    [hat(b_arrow(x, y)), hat(b_node(x, hx)), hat(b_arrow(y, x))],
                )
                bld.add_woman(
                    b_arrow(y, x),
                    [hat(b_arrow(y, x)), hat(b_node(y, hy)), filler(b_arrow(y, x))],
                )
                set_man(hat(b_arrow(x, y)), [a_edge(e), b_arrow(x, y)])
                set_man(hat(b_arrow(y, x)), [b_arrow(x, y), b_arrow(y, x)])
                set_man(filler(b_arrow(y, x)), [b_arrow(y, x)])

    for name, prefs in men.items():
        bld.add_man(name, prefs)

    women_master = _mcc_women_master(g, b, bld, a_name, b_node, c_node, a_edge, b_arrow)
    star_order = [w for w in women_master if w in bld.star_women]
    out = bld.build(
        b,
        extra={
            "kind": "multicolored-clique",
            "graph": g,
            "women_master": tuple(women_master),
            "star_order": tuple(star_order),
        },
    )
    return out


def _mcc_women_master(g, b, bld, a_name, b_node, c_node, a_edge, b_arrow):
    """The advertised total order over women all men's lists respect."""
    order = g.vertex_order
    pos = {v: i for i, v in enumerate(order)}
    k = len(g.parts)
    master: list[str] = []
    master += [f"t_{i}" for i in range(1, k + 1)]
    master += [
        f"t_{{{i},{j}}}" for i in range(1, k + 1) for j in range(i + 1, k + 1)
    ]
    master += [a_name(x) for x in reversed(order)]
    all_edges: list[tuple[str, str]] = []
    for u, v in g.edges:
        all_edges.append(tuple(sorted((u, v), key=lambda x: pos[x])))
    all_edges.sort(key=lambda e: (pos[e[0]], pos[e[1]]))
    master += [a_edge(e) for e in reversed(all_edges)]
    neighbors: dict[str, list[str]] = {v: [] for v in order}
    for u, v in g.edges:
        neighbors[u].append(v)
        neighbors[v].append(u)
    for v in neighbors:
        neighbors[v].sort(key=lambda x: pos[x])
    for x in order:
        for h in range(1, len(neighbors[x]) + 1):
            y = neighbors[x][h - 1]
            master.append(b_arrow(x, y))
            master.append(f"b_{x}^{h}")
    for h in range(1, b + 2):
        for x in order:
            master.append(f"c_{x}^{h}")
    master += [f"s_{i}" for i in range(1, k + 1)]
    master += [
        f"s_{{{i},{j}}}" for i in range(1, k + 1) for j in range(i + 1, k + 1)
    ]
    master += [f"u_{i}^{h}" for i in range(1, k + 1) for h in range(1, b + 2)]
    missing = set(bld.women) - set(master)
    if missing or len(master) != len(bld.women):
        raise AssertionError(f"master list out of sync: {sorted(missing)[:4]}")
    return master


def mcc_witness(out: ReductionOutput, clique: Sequence[str]) -> Matching:
    """The matching a one-vertex-per-part clique induces."""
    g: ColoredGraph = out.witness_map["graph"]
    order = g.vertex_order
    pos = {v: i for i, v in enumerate(order)}
    part_of = {v: i for i, part in enumerate(g.parts) for v in part}
    chosen = sorted(clique, key=lambda v: part_of[v])
    if [part_of[v] for v in chosen] != list(range(len(g.parts))):
        raise ValidationError("clique must pick one vertex per part")
    neighbors: dict[str, list[str]] = {v: [] for v in order}
    for u, v in g.edges:
        neighbors[u].append(v)
        neighbors[v].append(u)
    for v in neighbors:
        neighbors[v].sort(key=lambda x: pos[x])

    pairs: dict[str, str] = {}  # woman -> man

    def pair(w: str, m: str):
        pairs[w] = m

    for i, part in enumerate(g.parts, start=1):
        x = chosen[i - 1]
        pair(f"s_{i}", hat(f"a_{part[0]}"))
        idx = part.index(x)
        for a, bnext in zip(part[:idx], part[1 : idx + 1]):
            pair(f"a_{a}", hat(f"a_{bnext}"))
        d = len(neighbors[x])
        prev = f"a_{x}"
        for h in range(1, d + 1):
            pair(prev, hat(f"b_{x}^{h}"))
            prev = f"b_{x}^{h}"
        pair(prev, filler(prev))
    for i in range(1, len(g.parts) + 1):
        for j in range(i + 1, len(g.parts) + 1):
            x, y = sorted(
                (chosen[i - 1], chosen[j - 1]), key=lambda v: pos[v]
            )
            pair_edges = [
                e
                for e in (tuple(sorted(e, key=lambda v: pos[v])) for e in g.edges)
                if {part_of[e[0]], part_of[e[1]]} == {i - 1, j - 1}
            ]
            pair_edges.sort(key=lambda e: (pos[e[0]], pos[e[1]]))
            target = (x, y)
            if target not in pair_edges:
                raise ValidationError(f"clique edge {target} missing from the graph")
            pair(f"s_{{{i},{j}}}", hat(f"a_{{{pair_edges[0][0]},{pair_edges[0][1]}}}"))
            idx = pair_edges.index(target)
            for e, enext in zip(pair_edges[:idx], pair_edges[1 : idx + 1]):
                pair(f"a_{{{e[0]},{e[1]}}}", hat(f"a_{{{enext[0]},{enext[1]}}}"))
            pair(f"a_{{{x},{y}}}", hat(f"b_{{{x}>{y}}}"))
            pair(f"b_{{{x}>{y}}}", hat(f"b_{{{y}>{x}}}"))
            pair(f"b_{{{y}>{x}}}", filler(f"b_{{{y}>{x}}}"))
    for w in out.women_names:
        if w not in pairs and hat(w) in out.witness_map["man_index"]:
            pair(w, hat(w))
    return out.matching_from_names((m, w) for w, m in pairs.items())


# ---------------------------------------------------------------------------
# forcing gadgets: shrink the distinguished set to a single woman


def reduce_forcing_gadget(out: ReductionOutput) -> ReductionOutput:
    """Wrap every distinguished woman in a gadget that punishes leaving her
    unmatched twice over, so that a single new distinguished woman suffices.

    Requires every distinguished woman of the input to rank exactly one man.
    """
    inst = out.instance
    for w in sorted(inst.distinguished_women):
        if len(inst.women[w]) != 1:
            raise ValidationError(
                f"forcing gadgets need single-entry lists; {out.women_names[w]} has "
                f"{len(inst.women[w])}"
            )
    star_order = out.witness_map.get("star_order")
    if star_order is None:
        star_order = tuple(
            out.women_names[w] for w in sorted(inst.distinguished_women)
        )
    bld = _Builder()
    wnames, mnames = out.women_names, out.men_names
    mate = {
        wnames[w]: mnames[inst.women[w][0]] for w in inst.distinguished_women
    }
    y_block: list[str] = []
    for w in star_order:
        y_block += [f"a[{w}]", f"c[{w}]"]
    bld.add_woman("s", ["t"], star=True)
    bld.add_man("t", y_block + ["s"])
    for w in star_order:
        bld.add_woman(f"a[{w}]", [f"b'[{w}]", "t", f"a'[{w}]"])
        bld.add_woman(f"b[{w}]", [f"c'[{w}]", f"b'[{w}]"])
        bld.add_woman(f"c[{w}]", [f"d'[{w}]", "t", f"c'[{w}]"])
        bld.add_woman(f"d[{w}]", [f"a'[{w}]", f"d'[{w}]"])
        bld.add_man(f"a'[{w}]", [f"a[{w}]", f"d[{w}]"])
        bld.add_man(f"b'[{w}]", [f"b[{w}]", w, f"a[{w}]"])
        bld.add_man(f"c'[{w}]", [f"c[{w}]", f"b[{w}]"])
        bld.add_man(f"d'[{w}]", [f"d[{w}]", w, f"c[{w}]"])
    stars = set(star_order)
    for w in wnames:
        prefs = [mnames[m] for m in inst.women[wnames.index(w)]]
        if w in stars:
            prefs = [mate[w], f"b'[{w}]", f"d'[{w}]"]
        bld.add_woman(w, prefs)
    for i, m in enumerate(mnames):
        bld.add_man(m, [wnames[w] for w in inst.men[i]])
    return bld.build(
        out.budget,
        extra={
            "kind": "forcing",
            "base": out,
            "star_order": ("s",),
        },
    )


def forcing_witness(out: ReductionOutput, base_matching: Matching) -> Matching:
    """Extend a feasible matching of the base instance across the gadgets."""
    base: ReductionOutput = out.witness_map["base"]
    pairs = [
        (base.men_names[m], base.women_names[w])
        for m, w in base_matching.pairs()
    ]
    pairs.append(("t", "s"))
    for w in base.witness_map.get(
        "star_order",
        tuple(base.women_names[x] for x in sorted(base.instance.distinguished_women)),
    ):
        pairs += [
            (f"b'[{w}]", f"a[{w}]"),
            (f"c'[{w}]", f"b[{w}]"),
            (f"d'[{w}]", f"c[{w}]"),
            (f"a'[{w}]", f"d[{w}]"),
        ]
    return out.matching_from_names(pairs)


def reduce_two_women_masterlist(out: ReductionOutput) -> ReductionOutput:
    """Shrink the distinguished set to two new women while keeping both
    master lists intact; each old distinguished woman gains the two new men
    as fallback suitors."""
    inst = out.instance
    for w in sorted(inst.distinguished_women):
        if len(inst.women[w]) != 1:
            raise ValidationError("two-women form needs single-entry lists")
    star_order = out.witness_map.get("star_order")
    if star_order is None:
        star_order = tuple(
            out.women_names[w] for w in sorted(inst.distinguished_women)
        )
    wnames, mnames = out.women_names, out.men_names
    mate = {
        wnames[w]: mnames[inst.women[w][0]] for w in inst.distinguished_women
    }
    stars = set(star_order)
    bld = _Builder()
    for w in wnames:
        prefs = [mnames[m] for m in inst.women[wnames.index(w)]]
        if w in stars:
            prefs = [mate[w], "z1^", "z2^"]
        bld.add_woman(w, prefs)
    bld.add_woman("z_1", ["z1^"], star=True)
    bld.add_woman("z_2", ["z2^"], star=True)
    for i, m in enumerate(mnames):
        bld.add_man(m, [wnames[w] for w in inst.men[i]])
    bld.add_man("z1^", list(star_order) + ["z_1"])
    bld.add_man("z2^", list(star_order) + ["z_2"])
    women_master = out.witness_map.get("women_master")
    if women_master is not None:
        women_master = tuple(women_master) + ("z_1", "z_2")
    return bld.build(
        out.budget,
        extra={
            "kind": "two-women",
            "base": out,
            "star_order": ("z_1", "z_2"),
            "women_master": women_master,
        },
    )


def two_women_witness(out: ReductionOutput, base_matching: Matching) -> Matching:
    base: ReductionOutput = out.witness_map["base"]
    pairs = [
        (base.men_names[m], base.women_names[w])
        for m, w in base_matching.pairs()
    ]
    pairs += [("z1^", "z_1"), ("z2^", "z_2")]
    return out.matching_from_names(pairs)


# ---------------------------------------------------------------------------
# vertex cover


@dataclass(frozen=True)
class PlainGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise ValidationError(f"vertex {v} appears twice")
            seen.add(v)
        known = set()
        for u, v in self.edges:
            if u not in seen or v not in seen:
                raise ValidationError(f"edge ({u},{v}) uses an unknown vertex")
            if u == v:
                raise ValidationError(f"loop at {u}")
            key = tuple(sorted((u, v)))
            if key in known:
                raise ValidationError(f"edge ({u},{v}) appears twice")
            known.add(key)


def reduce_vertex_cover(g: PlainGraph, k: int) -> ReductionOutput:
    """Market whose optimum meets |V|+|E|+k exactly when the graph has a
    vertex cover of size k: node gadgets pay double when their vertex is
    picked, edge gadgets pay one unavoidable pair each (covering their
    distinguished woman always separates a mutually-top couple) and can
    otherwise stay quiet only next to a picked endpoint.

    The budget carries the |E| term because the smallest reachable count is
    |V| + |E| + (cover size); dropping it leaves no feasible matching within
    budget even for trivially coverable graphs (checked computationally on
    the two smallest graphs, where the optima are 4 = 2+1+1 and 6 = 3+2+1).
    """
    if k < 0:
        raise ValidationError("cover size must be nonnegative")
    pos = {v: i for i, v in enumerate(g.vertices)}
    neighbors: dict[str, list[str]] = {v: [] for v in g.vertices}
    for u, v in g.edges:
        neighbors[u].append(v)
        neighbors[v].append(u)
    for v in neighbors:
        neighbors[v].sort(key=lambda x: pos[x])
    deg = {v: len(neighbors[v]) for v in g.vertices}

    def arrow(x: str, y: str) -> str:
        return f"{x}>{y}"

    bld = _Builder()
    for x in g.vertices:
        d = deg[x]
        bld.add_woman(f"s_{x}", [f"b_{x}^0", f"d_{x}"], star=True)
        bld.add_man(f"b_{x}^0", [f"a_{x}^0", f"s_{x}"])
        for h in range(1, d + 1):
            y = neighbors[x][h - 1]
            bld.add_man(
                f"b_{x}^{h}",
                [f"a_{x}^{h}", f"a_{{{arrow(x, y)}}}", f"a_{x}^{h - 1}"],
            )
        for h in range(0, d):
            bld.add_woman(f"a_{x}^{h}", [f"b_{x}^{h + 1}", f"b_{x}^{h}"], star=True)
        bld.add_woman(f"a_{x}^{d}", [f"b_{x}^{d}"])
        bld.add_woman(f"c_{x}^1", [f"d_{x}"])
        bld.add_woman(f"c_{x}^2", [f"d_{x}"])
        bld.add_man(f"d_{x}", [f"c_{x}^1", f"c_{x}^2", f"s_{x}"])
    for u, v in g.edges:
        x, y = sorted((u, v), key=lambda z: pos[z])
        bld.add_woman(
            f"s_{{{x},{y}}}",
            [f"b_{{{arrow(x, y)}}}", f"b_{{{arrow(y, x)}}}"],
            star=True,
        )
        for a, b2 in ((x, y), (y, x)):
            h = neighbors[a].index(b2) + 1
            bld.add_woman(
                f"a_{{{arrow(a, b2)}}}", [f"b_{{{arrow(a, b2)}}}", f"b_{a}^{h}"]
            )
            bld.add_man(
                f"b_{{{arrow(a, b2)}}}",
                [f"a_{{{arrow(a, b2)}}}", f"s_{{{x},{y}}}"],
            )
    return bld.build(
        len(g.vertices) + len(g.edges) + k,
        extra={"kind": "vertex-cover", "graph": g, "k": k},
    )


def vc_witness(out: ReductionOutput, cover: Iterable[str]) -> Matching:
    g: PlainGraph = out.witness_map["graph"]
    cover = set(cover)
    pos = {v: i for i, v in enumerate(g.vertices)}
    neighbors: dict[str, list[str]] = {v: [] for v in g.vertices}
    for u, v in g.edges:
        neighbors[u].append(v)
        neighbors[v].append(u)
    for v in neighbors:
        neighbors[v].sort(key=lambda x: pos[x])
    pairs = []
    for x in g.vertices:
        d = len(neighbors[x])
        if x in cover:
            pairs.append((f"d_{x}", f"s_{x}"))
            for h in range(0, d + 1):
                pairs.append((f"b_{x}^{h}", f"a_{x}^{h}"))
        else:
            pairs.append((f"b_{x}^0", f"s_{x}"))
            pairs.append((f"d_{x}", f"c_{x}^1"))
            for h in range(0, d):
                pairs.append((f"b_{x}^{h + 1}", f"a_{x}^{h}"))
    for u, v in g.edges:
        x, y = sorted((u, v), key=lambda z: pos[z])
        picked = y if y in cover else x
        if picked not in cover:
            raise ValidationError(f"edge ({x},{y}) is uncovered")
        other = x if picked == y else y
        pairs.append((f"b_{{{picked}>{other}}}", f"s_{{{x},{y}}}"))
        pairs.append((f"b_{{{other}>{picked}}}", f"a_{{{other}>{picked}}}"))
    return out.matching_from_names(pairs)


# ---------------------------------------------------------------------------
# exact cover by 3-sets


def reduce_x3c(
    universe: Sequence[str], sets: Sequence[Sequence[str]]
) -> ReductionOutput:
    """Market whose optimum meets 2m + 2n/3 + 1 exactly when n/3 of the
    3-sets partition the universe."""
    universe = tuple(universe)
    n, m = len(universe), len(sets)
    if n % 3 != 0:
        raise ValidationError("universe size must be divisible by 3")
    if m == 0:
        raise ValidationError("at least one set is required")
    occurrences: dict[str, list[int]] = {e: [] for e in universe}
    triples: list[tuple[str, str, str]] = []
    for j, s in enumerate(sets, start=1):
        s = tuple(s)
        if len(s) != 3 or len(set(s)) != 3:
            raise ValidationError(f"set {j} must have three distinct elements")
        for e in s:
            if e not in occurrences:
                raise ValidationError(f"set {j} uses unknown element {e}")
            occurrences[e].append(j)
            if len(occurrences[e]) > 3:
                raise ValidationError(f"element {e} occurs more than three times")
        triples.append(s)

    bld = _Builder()
    budget = 2 * m + 2 * n // 3 + 1
    bld.add_woman("x_0", [hat("x_1")], star=True)
    for j in range(1, m):
        bld.add_woman(f"x_{j}", [hat(f"x_{j + 1}"), hat(f"x_{j}")])
    bld.add_woman(f"x_{m}", [hat(f"x_{m}"), "y"])
    bld.add_man("y", [f"x_{m}"], star=True)
    for j, s in enumerate(triples, start=1):
        bld.add_woman(f"s_{j}", [hat(f"p_{j}^3"), hat(f"x_{j}")])
        bld.add_woman(f"p_{j}^1", [hat(f"p_{j}^1"), f"t_{j}"])
        for h in (2, 3):
            bld.add_woman(f"p_{j}^{h}", [hat(f"p_{j}^{h - 1}"), hat(f"p_{j}^{h}")])
        bld.add_woman(f"q_{j}", [hat(f"q_{j}"), f"t_{j}"])
        bld.add_man(hat(f"x_{j}"), [f"x_{j}", f"s_{j}", f"x_{j - 1}"], star=True)
        bld.add_man(f"t_{j}", [f"p_{j}^1", f"q_{j}"], star=True)
        for h in (1, 2):
            e = s[h - 1]
            bld.add_man(
                hat(f"p_{j}^{h}"),
                [f"p_{j}^{h}", f"a_{{{e},{j}}}", f"p_{j}^{h + 1}"],
            )
        bld.add_man(
            hat(f"p_{j}^3"), [f"p_{j}^3", f"a_{{{s[2]},{j}}}", f"s_{j}"]
        )
        bld.add_man(hat(f"q_{j}"), [f"q_{j}"])
        for h, e in enumerate(s, start=1):
            bld.add_woman(f"a_{{{e},{j}}}", [hat(f"b_{{{e},{j}}}"), hat(f"p_{j}^{h}")])
            bld.add_woman(f"b_{{{e},{j}}}", [hat(f"b_{{{e},{j}}}"), f"c_{e}"])
            bld.add_man(
                hat(f"b_{{{e},{j}}}"), [f"b_{{{e},{j}}}", f"a_{{{e},{j}}}"]
            )
    for e in universe:
        if not occurrences[e]:
            raise ValidationError(f"element {e} occurs in no set")
        bld.add_man(f"c_{e}", [f"b_{{{e},{j}}}" for j in occurrences[e]], star=True)
    return bld.build(
        budget,
        extra={
            "kind": "exact-cover",
            "universe": universe,
            "sets": tuple(triples),
        },
    )


def x3c_witness(out: ReductionOutput, chosen: Iterable[int]) -> Matching:
    """Matching induced by an exact cover (1-based set indices)."""
    universe: tuple[str, ...] = out.witness_map["universe"]
    triples: tuple[tuple[str, str, str], ...] = out.witness_map["sets"]
    chosen = sorted(chosen)
    sigma: dict[str, int] = {}
    for j in chosen:
        for e in triples[j - 1]:
            if e in sigma:
                raise ValidationError(f"element {e} covered twice")
            sigma[e] = j
    if set(sigma) != set(universe):
        raise ValidationError("not an exact cover")
    m = len(triples)
    pairs = [(hat(f"x_{j}"), f"x_{j - 1}") for j in range(1, m + 1)]
    pairs.append(("y", f"x_{m}"))
    for e in universe:
        pairs.append((f"c_{e}", f"b_{{{e},{sigma[e]}}}"))
        pairs.append((hat(f"b_{{{e},{sigma[e]}}}"), f"a_{{{e},{sigma[e]}}}"))
    for j in range(1, m + 1):
        if j in chosen:
            pairs.append((f"t_{j}", f"p_{j}^1"))
            pairs.append((hat(f"p_{j}^1"), f"p_{j}^2"))
            pairs.append((hat(f"p_{j}^2"), f"p_{j}^3"))
            pairs.append((hat(f"p_{j}^3"), f"s_{j}"))
            pairs.append((hat(f"q_{j}"), f"q_{j}"))
        else:
            pairs.append((f"t_{j}", f"q_{j}"))
            pairs.append((hat(f"p_{j}^1"), f"p_{j}^1"))
            pairs.append((hat(f"p_{j}^2"), f"p_{j}^2"))
            pairs.append((hat(f"p_{j}^3"), f"p_{j}^3"))
            for e in triples[j - 1]:
                if sigma[e] != j:
                    pairs.append((hat(f"b_{{{e},{j}}}"), f"b_{{{e},{j}}}"))
    # unmatched leftovers: a-women of unchosen sets stay single
    return out.matching_from_names(pairs)


# ---------------------------------------------------------------------------
# verification


def verify_reduction(
    out: ReductionOutput,
    source_answer: bool,
    witness: Optional[Matching] = None,
    work_cap: int = 2_000_000,
) -> bool:
    """True when (instance optimum <= budget) agrees with the source answer.

    Tiered: a cover check settles infeasible instances; a supplied witness
    settles yes-instances; otherwise an exact solve runs when the estimated
    work fits under ``work_cap``, else SizeCapError.
    """
    inst, b = out.instance, out.budget
    if cover_distinguished(inst) is None:
        return (False) == source_answer
    if witness is not None:
        if not is_feasible(inst, witness):
            raise ValidationError("witness does not cover the distinguished set")
        if len(blocking_pairs(inst, witness)) <= b:
            return True == source_answer
    if inst.n_men + inst.n_women <= DEFAULT_ORACLE_CAP:
        opt = enumerate_oracle(inst)
        reachable = (not opt.infeasible) and opt.n_blocking <= b
        return reachable == source_answer
    n_edges = len(inst.edges)
    work = sum(math.comb(n_edges, s) for s in range(0, b + 1))
    if work > work_cap:
        raise SizeCapError(
            f"estimated {work} stable-matching runs exceed the cap {work_cap}"
        )
    got = solve_guess_delete(inst, b)
    reachable = not isinstance(got, NoSolutionWithin)
    return reachable == source_answer


# ---------------------------------------------------------------------------
# source-problem text formats


def _tokens(line: str) -> list[str]:
    for ch in "{}^~":
        if ch in line:
            raise ValidationError(f"names may not contain {ch!r}")
    return line.split()


def parse_colored_graph(text: str) -> ColoredGraph:
    """Lines ``part <i>: v ...`` and ``edge u v``; comments start with #."""
    parts: dict[int, list[str]] = {}
    edges = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("part"):
            head, _, rest = line.partition(":")
            idx = int(head.split()[1])
            parts.setdefault(idx, []).extend(_tokens(rest))
        elif line.startswith("edge"):
            toks = _tokens(line)[1:]
            if len(toks) != 2:
                raise ValidationError(f"bad edge line: {raw!r}")
            edges.append((toks[0], toks[1]))
        else:
            raise ValidationError(f"unrecognised line: {raw!r}")
    ordered = [tuple(parts[i]) for i in sorted(parts)]
    if sorted(parts) != list(range(1, len(parts) + 1)):
        raise ValidationError("parts must be numbered 1..k")
    return ColoredGraph(tuple(ordered), tuple(edges))


def parse_graph(text: str) -> PlainGraph:
    """Lines ``vertex v`` and ``edge u v``; vertices may also be implied."""
    vertices: list[str] = []
    seen = set()
    edges = []

    def add_vertex(v: str):
        if v not in seen:
            seen.add(v)
            vertices.append(v)

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = _tokens(line)
        if toks[0] == "vertex":
            for v in toks[1:]:
                add_vertex(v)
        elif toks[0] == "edge" and len(toks) == 3:
            add_vertex(toks[1])
            add_vertex(toks[2])
            edges.append((toks[1], toks[2]))
        else:
            raise ValidationError(f"unrecognised line: {raw!r}")
    return PlainGraph(tuple(vertices), tuple(edges))


def parse_x3c(text: str) -> tuple[tuple[str, ...], tuple[tuple[str, ...], ...]]:
    """``universe n`` (elements u1..un) and ``set: a b c`` lines."""
    universe: Optional[tuple[str, ...]] = None
    sets = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("universe"):
            toks = _tokens(line)[1:]
            if len(toks) == 1 and toks[0].isdigit():
                universe = tuple(f"u{i}" for i in range(1, int(toks[0]) + 1))
            else:
                universe = tuple(toks)
        elif line.startswith("set"):
            _, _, rest = line.partition(":")
            sets.append(tuple(_tokens(rest)))
        else:
            raise ValidationError(f"unrecognised line: {raw!r}")
    if universe is None:
        raise ValidationError("missing universe line")
    return universe, tuple(sets)
