"""Core data model: instances, matchings, blocking pairs, parameter profile.

Everything here is immutable after validation and safe to share between
concurrent solver calls; all functions are pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import ValidationError


class Side(enum.Enum):
    MAN = "man"
    WOMAN = "woman"

    def other(self) -> "Side":
        return Side.WOMAN if self is Side.MAN else Side.MAN


@dataclass(frozen=True, order=True)
class PersonId:
    """A person identified by side and dense index within an instance."""

    side: Side
    index: int


def _check_lists(lists: Sequence[Sequence[int]], limit: int, who: str) -> None:
    for i, prefs in enumerate(lists):
        seen = set()
        for p in prefs:
            if not 0 <= p < limit:
                raise ValidationError(
                    f"{who} {i} ranks unknown person {p}", owner=i, target=p
                )
            if p in seen:
                raise ValidationError(
                    f"{who} {i} ranks person {p} twice", owner=i, target=p
                )
            seen.add(p)


@dataclass(frozen=True)
class SmcInstance:
    """A two-sided market with strict preference lists and covering constraints.

    ``men[i]`` is man i's preference list (woman indices, best first);
    ``women[j]`` likewise.  ``distinguished_women`` / ``distinguished_men``
    are the people every feasible matching must cover.  ``budget`` is the
    optional cap on blocking pairs carried by decision-variant inputs;
    ``None`` means "minimize".
    """

    men: tuple[tuple[int, ...], ...]
    women: tuple[tuple[int, ...], ...]
    distinguished_women: frozenset[int] = frozenset()
    distinguished_men: frozenset[int] = frozenset()
    budget: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "men", tuple(tuple(p) for p in self.men))
        object.__setattr__(self, "women", tuple(tuple(p) for p in self.women))
        object.__setattr__(
            self, "distinguished_women", frozenset(self.distinguished_women)
        )
        object.__setattr__(
            self, "distinguished_men", frozenset(self.distinguished_men)
        )
        self._validate()

    def _validate(self) -> None:
        _check_lists(self.men, len(self.women), "man")
        _check_lists(self.women, len(self.men), "woman")
        for m, prefs in enumerate(self.men):
            for w in prefs:
                if m not in self.women[w]:
                    raise ValidationError(
                        f"man {m} ranks woman {w} but not vice versa", man=m, woman=w
                    )
        for w, prefs in enumerate(self.women):
            for m in prefs:
                if w not in self.men[m]:
                    raise ValidationError(
                        f"woman {w} ranks man {m} but not vice versa", man=m, woman=w
                    )
        for w in self.distinguished_women:
            if not 0 <= w < len(self.women):
                raise ValidationError(f"distinguished woman {w} does not exist")
        for m in self.distinguished_men:
            if not 0 <= m < len(self.men):
                raise ValidationError(f"distinguished man {m} does not exist")
        if self.budget is not None and self.budget < 0:
            raise ValidationError("budget must be nonnegative")

    @property
    def n_men(self) -> int:
        return len(self.men)

    @property
    def n_women(self) -> int:
        return len(self.women)

    @cached_property
    def rank_m(self) -> tuple[dict[int, int], ...]:
        """rank_m[m][w] = position of w in man m's list (0 = best)."""
        return tuple({w: r for r, w in enumerate(prefs)} for prefs in self.men)

    @cached_property
    def rank_w(self) -> tuple[dict[int, int], ...]:
        return tuple({m: r for r, m in enumerate(prefs)} for prefs in self.women)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """All mutually acceptable pairs, sorted by (man, woman)."""
        return tuple(
            (m, w) for m in range(self.n_men) for w in sorted(self.men[m])
        )

    def is_edge(self, m: int, w: int) -> bool:
        return w in self.rank_m[m]

    def prefers_m(self, m: int, w1: int, w2: Optional[int]) -> bool:
        """Does man m strictly prefer w1 to w2 (w2 None = unmatched)?"""
        if w2 is None:
            return True
        return self.rank_m[m][w1] < self.rank_m[m][w2]

    def prefers_w(self, w: int, m1: int, m2: Optional[int]) -> bool:
        if m2 is None:
            return True
        return self.rank_w[w][m1] < self.rank_w[w][m2]

    def swap_genders(self) -> "SmcInstance":
        """The same market with the roles of men and women exchanged."""
        return SmcInstance(
            men=self.women,
            women=self.men,
            distinguished_women=self.distinguished_men,
            distinguished_men=self.distinguished_women,
            budget=self.budget,
        )


@dataclass(frozen=True)
class HrlqInstance:
    """Residents and hospitals with lower/upper quotas.

    ``hospitals[h]`` is a triple ``(prefs, lower, upper)``.
    """

    residents: tuple[tuple[int, ...], ...]
    hospitals: tuple[tuple[tuple[int, ...], int, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "residents", tuple(tuple(p) for p in self.residents)
        )
        object.__setattr__(
            self,
            "hospitals",
            tuple((tuple(p), int(lo), int(up)) for p, lo, up in self.hospitals),
        )
        self._validate()

    def _validate(self) -> None:
        _check_lists(self.residents, len(self.hospitals), "resident")
        _check_lists([p for p, _, _ in self.hospitals], len(self.residents), "hospital")
        for h, (prefs, lo, up) in enumerate(self.hospitals):
            if lo < 0:
                raise ValidationError(f"hospital {h} has negative lower quota")
            if up < 1:
                raise ValidationError(f"hospital {h} has non-positive upper quota")
            if lo > up:
                raise ValidationError(
                    f"hospital {h} has lower quota {lo} above upper quota {up}"
                )
            for r in prefs:
                if h not in self.residents[r]:
                    raise ValidationError(
                        f"hospital {h} ranks resident {r} but not vice versa",
                        resident=r,
                        hospital=h,
                    )
        for r, prefs in enumerate(self.residents):
            for h in prefs:
                if r not in self.hospitals[h][0]:
                    raise ValidationError(
                        f"resident {r} ranks hospital {h} but not vice versa",
                        resident=r,
                        hospital=h,
                    )

    @property
    def n_residents(self) -> int:
        return len(self.residents)

    @property
    def n_hospitals(self) -> int:
        return len(self.hospitals)

    @cached_property
    def rank_r(self) -> tuple[dict[int, int], ...]:
        return tuple({h: r for r, h in enumerate(prefs)} for prefs in self.residents)

    @cached_property
    def rank_h(self) -> tuple[dict[int, int], ...]:
        return tuple(
            {r: i for i, r in enumerate(prefs)} for prefs, _, _ in self.hospitals
        )

    @property
    def lower_total(self) -> int:
        return sum(lo for _, lo, _ in self.hospitals)

    @property
    def max_resident_list(self) -> int:
        return max((len(p) for p in self.residents), default=0)


@dataclass(frozen=True)
class Matching:
    """A symmetric partner map between men and women."""

    partner_of_man: tuple[Optional[int], ...]
    partner_of_woman: tuple[Optional[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "partner_of_man", tuple(self.partner_of_man))
        object.__setattr__(self, "partner_of_woman", tuple(self.partner_of_woman))
        for m, w in enumerate(self.partner_of_man):
            if w is not None and self.partner_of_woman[w] != m:
                raise ValidationError(
                    f"matching is asymmetric at man {m} / woman {w}", man=m, woman=w
                )
        for w, m in enumerate(self.partner_of_woman):
            if m is not None and self.partner_of_man[m] != w:
                raise ValidationError(
                    f"matching is asymmetric at woman {w} / man {m}", man=m, woman=w
                )

    @classmethod
    def from_pairs(
        cls, n_men: int, n_women: int, pairs: Iterable[tuple[int, int]]
    ) -> "Matching":
        pm: list[Optional[int]] = [None] * n_men
        pw: list[Optional[int]] = [None] * n_women
        for m, w in pairs:
            if pm[m] is not None or pw[w] is not None:
                raise ValidationError(
                    f"pair ({m},{w}) clashes with an earlier pair", man=m, woman=w
                )
            pm[m] = w
            pw[w] = m
        return cls(tuple(pm), tuple(pw))

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (m, w) for m, w in enumerate(self.partner_of_man) if w is not None
        )

    def size(self) -> int:
        return sum(1 for w in self.partner_of_man if w is not None)

    def check_acceptable(self, inst: SmcInstance) -> None:
        """Raise unless every matched pair is mutually acceptable."""
        if len(self.partner_of_man) != inst.n_men or len(
            self.partner_of_woman
        ) != inst.n_women:
            raise ValidationError("matching size does not fit the instance")
        for m, w in self.pairs():
            if not inst.is_edge(m, w):
                raise ValidationError(
                    f"matched pair ({m},{w}) is not mutually acceptable",
                    man=m,
                    woman=w,
                )


@dataclass(frozen=True)
class Assignment:
    """Residents-to-hospitals map for quota instances."""

    hospital_of_resident: tuple[Optional[int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "hospital_of_resident", tuple(self.hospital_of_resident)
        )

    def assigned(self, h: int) -> tuple[int, ...]:
        return tuple(
            r for r, hh in enumerate(self.hospital_of_resident) if hh == h
        )

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (r, h) for r, h in enumerate(self.hospital_of_resident) if h is not None
        )

    def check_valid(self, inst: HrlqInstance) -> None:
        """Acceptability plus upper quotas; lower quotas are feasibility."""
        if len(self.hospital_of_resident) != inst.n_residents:
            raise ValidationError("assignment size does not fit the instance")
        load = [0] * inst.n_hospitals
        for r, h in self.pairs():
            if h not in inst.rank_r[r]:
                raise ValidationError(
                    f"assignment pair ({r},{h}) is not mutually acceptable",
                    resident=r,
                    hospital=h,
                )
            load[h] += 1
        for h, (_, _, up) in enumerate(inst.hospitals):
            if load[h] > up:
                raise ValidationError(
                    f"hospital {h} exceeds its upper quota", hospital=h
                )

    def is_feasible(self, inst: HrlqInstance) -> bool:
        load = [0] * inst.n_hospitals
        for _, h in self.pairs():
            load[h] += 1
        return all(
            lo <= load[h] for h, (_, lo, _) in enumerate(inst.hospitals)
        )


@dataclass(frozen=True)
class ParamProfile:
    """Structural parameters a dispatcher branches on."""

    delta_m: int
    delta_w: int
    delta_star: int
    n_star_women: int
    n_star_men: int
    has_master_list_men: bool
    has_master_list_women: bool


class AlgorithmTag(str, enum.Enum):
    ORACLE = "oracle"
    GALE_SHAPLEY = "gale-shapley"
    GUESS_DELETE = "guess-delete"
    PATHS_AND_CYCLES = "paths-and-cycles"
    MEN_DEG2 = "men-deg2"
    WOMEN_DEG2 = "women-deg2"
    FPT_BRANCHING = "fpt-branching"
    SMC_APPROX = "smc-approx"
    HRLQ_APPROX = "hrlq-approx"


@dataclass(frozen=True)
class SolveResult:
    """A solver's answer: matching, its blocking pairs, and provenance flags."""

    matching: Matching
    blocking: tuple[tuple[int, int], ...]
    algorithm: AlgorithmTag
    optimal: bool
    infeasible: bool = False

    @property
    def n_blocking(self) -> int:
        return len(self.blocking)


@dataclass(frozen=True)
class NoSolutionWithin:
    """Decision-variant outcome: no feasible matching within the budget."""

    budget: int


@dataclass(frozen=True)
class HrlqResult:
    """Like SolveResult, for quota instances."""

    assignment: Assignment
    blocking: tuple[tuple[int, int], ...]
    algorithm: AlgorithmTag
    optimal: bool
    infeasible: bool = False

    @property
    def n_blocking(self) -> int:
        return len(self.blocking)


def blocking_pairs(inst: SmcInstance, matching: Matching) -> tuple[tuple[int, int], ...]:
    """All mutually acceptable pairs that block ``matching``, in (man, woman) order.

    A pair blocks when the man is unmatched or prefers the woman to his
    partner, and symmetrically for the woman.
    """
    matching.check_acceptable(inst)
    out = []
    pm = matching.partner_of_man
    pw = matching.partner_of_woman
    for m in range(inst.n_men):
        cur = pm[m]
        for w in inst.men[m]:
            if cur is not None and not inst.prefers_m(m, w, cur):
                continue
            if w == cur:
                continue
            if inst.prefers_w(w, m, pw[w]):
                out.append((m, w))
    return tuple(sorted(out))


def count_blocking_pairs(inst: SmcInstance, matching: Matching) -> int:
    return len(blocking_pairs(inst, matching))


def is_feasible(inst: SmcInstance, matching: Matching) -> bool:
    """True iff every distinguished person is matched."""
    pm = matching.partner_of_man
    pw = matching.partner_of_woman
    return all(pw[w] is not None for w in inst.distinguished_women) and all(
        pm[m] is not None for m in inst.distinguished_men
    )


def blocking_pairs_hrlq(
    inst: HrlqInstance, assignment: Assignment
) -> tuple[tuple[int, int], ...]:
    """Blocking (resident, hospital) pairs of an assignment, sorted."""
    assignment.check_valid(inst)
    load: list[list[int]] = [[] for _ in range(inst.n_hospitals)]
    for r, h in assignment.pairs():
        load[h].append(r)
    # A hospital blocks with r when under-subscribed or preferring r to its
    # worst assigned resident.
    worst_rank = [
        max((inst.rank_h[h][r] for r in load[h]), default=-1)
        for h in range(inst.n_hospitals)
    ]
    out = []
    for r in range(inst.n_residents):
        cur = assignment.hospital_of_resident[r]
        for h in inst.residents[r]:
            if h == cur:
                continue
            if cur is not None and inst.rank_r[r][h] > inst.rank_r[r][cur]:
                continue
            under = len(load[h]) < inst.hospitals[h][2]
            if under or inst.rank_h[h][r] < worst_rank[h]:
                out.append((r, h))
    return tuple(sorted(out))


@dataclass(frozen=True)
class CloneMap:
    """Book-keeping for hospital cloning.

    ``woman_of_clone[j] = (hospital, copy)``; copies are numbered from 0 and
    the first ``lower`` copies of each hospital are the distinguished ones.
    """

    woman_of_clone: tuple[tuple[int, int], ...]
    clones_of_hospital: tuple[tuple[int, ...], ...]

    def assignment_from_matching(
        self, inst: HrlqInstance, matching: Matching
    ) -> Assignment:
        hosp: list[Optional[int]] = [None] * inst.n_residents
        for m, w in matching.pairs():
            hosp[m] = self.woman_of_clone[w][0]
        return Assignment(tuple(hosp))

    def matching_from_assignment(
        self, inst: HrlqInstance, assignment: Assignment
    ) -> Matching:
        """Canonical packing: a hospital's residents, in its preference
        order, occupy its lowest-numbered clones."""
        pairs = []
        for h in range(inst.n_hospitals):
            rs = sorted(assignment.assigned(h), key=lambda r: inst.rank_h[h][r])
            for copy, r in enumerate(rs):
                pairs.append((r, self.clones_of_hospital[h][copy]))
        n_clones = len(self.woman_of_clone)
        return Matching.from_pairs(inst.n_residents, n_clones, pairs)


def clone_hospitals(inst: HrlqInstance) -> tuple[SmcInstance, CloneMap]:
    """Expand each hospital into unit-capacity women, one per upper-quota slot.

    A hospital's clones appear consecutively, in copy order, at the
    hospital's position in every resident's list; each clone inherits the
    hospital's list.  The lowest-numbered ``lower`` clones are distinguished,
    so a matching covering them assigns at least the lower quota.
    """
    clones_of_hospital: list[tuple[int, ...]] = []
    woman_of_clone: list[tuple[int, int]] = []
    women_lists: list[tuple[int, ...]] = []
    distinguished: set[int] = set()
    for h, (prefs, lo, up) in enumerate(inst.hospitals):
        ids = []
        for copy in range(up):
            j = len(woman_of_clone)
            ids.append(j)
            woman_of_clone.append((h, copy))
            women_lists.append(tuple(prefs))
            if copy < lo:
                distinguished.add(j)
        clones_of_hospital.append(tuple(ids))
    men_lists = []
    for prefs in inst.residents:
        row: list[int] = []
        for h in prefs:
            row.extend(clones_of_hospital[h])
        men_lists.append(tuple(row))
    smc = SmcInstance(
        men=tuple(men_lists),
        women=tuple(women_lists),
        distinguished_women=frozenset(distinguished),
    )
    return smc, CloneMap(tuple(woman_of_clone), tuple(clones_of_hospital))


def _admits_total_order(lists: Iterable[Sequence[int]], n: int) -> bool:
    """Can the n items be totally ordered consistently with every list?

    Collects the precedence constraints of consecutive list entries and
    topologically sorts them.
    """
    succ: list[set[int]] = [set() for _ in range(n)]
    indeg = [0] * n
    for prefs in lists:
        for a, b in zip(prefs, prefs[1:]):
            if b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
    ready = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for u in sorted(succ[v]):
            indeg[u] -= 1
            if indeg[u] == 0:
                ready.append(u)
    return seen == n


def master_list(lists: Iterable[Sequence[int]], n: int) -> Optional[list[int]]:
    """A total order consistent with every list, or None; smallest-index
    first among the ready items, for determinism."""
    succ: list[set[int]] = [set() for _ in range(n)]
    indeg = [0] * n
    for prefs in lists:
        for a, b in zip(prefs, prefs[1:]):
            if b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
    import heapq

    ready = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        v = heapq.heappop(ready)
        out.append(v)
        for u in sorted(succ[v]):
            indeg[u] -= 1
            if indeg[u] == 0:
                heapq.heappush(ready, u)
    return out if len(out) == n else None


def param_profile(inst: SmcInstance) -> ParamProfile:
    """Maximum list lengths, distinguished counts and master-list flags."""
    delta_m = max((len(p) for p in inst.men), default=0)
    delta_w = max((len(p) for p in inst.women), default=0)
    star_lengths = [len(inst.women[w]) for w in inst.distinguished_women]
    star_lengths += [len(inst.men[m]) for m in inst.distinguished_men]
    return ParamProfile(
        delta_m=delta_m,
        delta_w=delta_w,
        delta_star=max(star_lengths, default=0),
        n_star_women=len(inst.distinguished_women),
        n_star_men=len(inst.distinguished_men),
        has_master_list_men=_admits_total_order(inst.women, inst.n_men),
        has_master_list_women=_admits_total_order(inst.men, inst.n_women),
    )


def make_result(
    inst: SmcInstance,
    matching: Matching,
    algorithm: AlgorithmTag,
    optimal: bool,
) -> SolveResult:
    return SolveResult(
        matching=matching,
        blocking=blocking_pairs(inst, matching),
        algorithm=algorithm,
        optimal=optimal,
    )


def infeasible_result(inst: SmcInstance, algorithm: AlgorithmTag) -> SolveResult:
    empty = Matching.from_pairs(inst.n_men, inst.n_women, [])
    return SolveResult(
        matching=empty,
        blocking=(),
        algorithm=algorithm,
        optimal=True,
        infeasible=True,
    )


def make_hrlq_result(
    inst: HrlqInstance,
    assignment: Assignment,
    algorithm: AlgorithmTag,
    optimal: bool,
) -> HrlqResult:
    return HrlqResult(
        assignment=assignment,
        blocking=blocking_pairs_hrlq(inst, assignment),
        algorithm=algorithm,
        optimal=optimal,
    )


def infeasible_hrlq_result(inst: HrlqInstance, algorithm: AlgorithmTag) -> HrlqResult:
    return HrlqResult(
        assignment=Assignment(tuple([None] * inst.n_residents)),
        blocking=(),
        algorithm=algorithm,
        optimal=True,
        infeasible=True,
    )
