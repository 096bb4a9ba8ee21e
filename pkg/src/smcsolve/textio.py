"""Canonical text format for instances and matchings.

Line-oriented UTF-8; ``#`` starts a comment.  People are named in files and
densely indexed in memory; a parsed document keeps the name maps so output
can speak the input's language.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ParseError, ValidationError
from .model import Assignment, HrlqInstance, Matching, SmcInstance


@dataclass(frozen=True)
class ParsedDocument:
    """An instance plus its name maps; ``kind`` is 'smc' or 'hrlq'."""

    kind: str
    smc: Optional[SmcInstance]
    hrlq: Optional[HrlqInstance]
    budget: Optional[int]
    men_names: tuple[str, ...]
    women_names: tuple[str, ...]

    @property
    def instance(self):
        return self.smc if self.kind == "smc" else self.hrlq

    def man_index(self, name: str) -> int:
        try:
            return self.men_names.index(name)
        except ValueError:
            raise ParseError(f"unknown name {name!r}") from None

    def woman_index(self, name: str) -> int:
        try:
            return self.women_names.index(name)
        except ValueError:
            raise ParseError(f"unknown name {name!r}") from None


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_quota_token(tok: str, lineno: int) -> tuple[str, int, int]:
    if "[" not in tok or not tok.endswith("]"):
        raise ParseError(f"hospital {tok!r} needs quotas like name[lo,up]", lineno)
    name, _, rest = tok.partition("[")
    try:
        lo, up = rest[:-1].split(",")
        return name, int(lo), int(up)
    except ValueError:
        raise ParseError(f"bad quota annotation in {tok!r}", lineno) from None


def parse(text: str) -> ParsedDocument:
    """Parse the canonical format; raises ParseError with a line number."""
    kind: Optional[str] = None
    men: list[str] = []
    women: list[str] = []
    quotas: dict[str, tuple[int, int]] = {}
    prefs: dict[str, list[str]] = {}
    star_women: list[str] = []
    star_men: list[str] = []
    budget: Optional[int] = None
    men_label, women_label = "men", "women"

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip()
        rest = rest.strip()
        if key == "kind":
            if rest not in ("smc", "hrlq"):
                raise ParseError(f"unknown kind {rest!r}", lineno)
            kind = rest
            if kind == "hrlq":
                men_label, women_label = "residents", "hospitals"
        elif key == men_label:
            men.extend(rest.split())
        elif key == women_label:
            if kind == "hrlq":
                for tok in rest.split():
                    name, lo, up = _parse_quota_token(tok, lineno)
                    women.append(name)
                    quotas[name] = (lo, up)
            else:
                women.extend(rest.split())
        elif key.startswith("pref "):
            who = key[len("pref ") :].strip()
            if who in prefs:
                raise ParseError(f"duplicate pref line for {who!r}", lineno)
            prefs[who] = rest.split()
        elif key == "star-women":
            star_women.extend(rest.split())
        elif key == "star-men":
            star_men.extend(rest.split())
        elif key == "budget":
            try:
                budget = int(rest)
            except ValueError:
                raise ParseError(f"budget must be an integer, got {rest!r}", lineno)
        else:
            raise ParseError(f"unrecognised line {raw!r}", lineno)

    if kind is None:
        raise ParseError("missing 'kind:' line")
    if len(set(men)) != len(men) or len(set(women)) != len(women):
        raise ParseError("duplicate person names")
    m_index = {m: i for i, m in enumerate(men)}
    w_index = {w: i for i, w in enumerate(women)}

    def resolve(who: str, names: dict[str, int], side: str) -> list[int]:
        out = []
        for tok in prefs.get(who, []):
            if tok not in names:
                raise ParseError(f"{who!r} ranks unknown {side} {tok!r}")
            out.append(names[tok])
        return out

    for who in prefs:
        if who not in m_index and who not in w_index:
            raise ParseError(f"pref line for unknown person {who!r}")
    for s in star_women:
        if s not in w_index:
            raise ParseError(f"unknown star woman {s!r}")
    for s in star_men:
        if s not in m_index:
            raise ParseError(f"unknown star man {s!r}")

    try:
        if kind == "smc":
            inst = SmcInstance(
                men=tuple(tuple(resolve(m, w_index, "woman")) for m in men),
                women=tuple(tuple(resolve(w, m_index, "man")) for w in women),
                distinguished_women=frozenset(w_index[s] for s in star_women),
                distinguished_men=frozenset(m_index[s] for s in star_men),
                budget=budget,
            )
            return ParsedDocument(
                "smc", inst, None, budget, tuple(men), tuple(women)
            )
        if star_women or star_men:
            raise ParseError("quota instances take no star lines")
        hrlq = HrlqInstance(
            residents=tuple(tuple(resolve(r, w_index, "hospital")) for r in men),
            hospitals=tuple(
                (tuple(resolve(h, m_index, "resident")), *quotas[h]) for h in women
            ),
        )
        return ParsedDocument("hrlq", None, hrlq, budget, tuple(men), tuple(women))
    except ValidationError as exc:
        detail = exc.detail
        if {"man", "woman"} <= set(detail):
            raise ParseError(
                "acceptability is not mutual for pair "
                f"({men[detail['man']]}, {women[detail['woman']]})"
            ) from exc
        if {"resident", "hospital"} <= set(detail):
            raise ParseError(
                "acceptability is not mutual for pair "
                f"({men[detail['resident']]}, {women[detail['hospital']]})"
            ) from exc
        raise ParseError(str(exc)) from exc


def serialize(doc: ParsedDocument) -> str:
    """Canonical text; parse(serialize(doc)) round-trips exactly."""
    lines = [f"kind: {doc.kind}"]
    if doc.kind == "smc":
        inst = doc.smc
        lines.append("men: " + " ".join(doc.men_names))
        lines.append("women: " + " ".join(doc.women_names))
        for i, name in enumerate(doc.men_names):
            lines.append(
                f"pref {name}: " + " ".join(doc.women_names[w] for w in inst.men[i])
            )
        for i, name in enumerate(doc.women_names):
            lines.append(
                f"pref {name}: " + " ".join(doc.men_names[m] for m in inst.women[i])
            )
        lines.append(
            "star-women: "
            + " ".join(
                doc.women_names[w] for w in sorted(inst.distinguished_women)
            )
        )
        lines.append(
            "star-men: "
            + " ".join(doc.men_names[m] for m in sorted(inst.distinguished_men))
        )
    else:
        inst = doc.hrlq
        lines.append("residents: " + " ".join(doc.men_names))
        lines.append(
            "hospitals: "
            + " ".join(
                f"{name}[{lo},{up}]"
                for name, (_, lo, up) in zip(doc.women_names, inst.hospitals)
            )
        )
        for i, name in enumerate(doc.men_names):
            lines.append(
                f"pref {name}: "
                + " ".join(doc.women_names[h] for h in inst.residents[i])
            )
        for i, name in enumerate(doc.women_names):
            lines.append(
                f"pref {name}: "
                + " ".join(doc.men_names[r] for r in inst.hospitals[i][0])
            )
    if doc.budget is not None:
        lines.append(f"budget: {doc.budget}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def document_for(
    inst: SmcInstance,
    men_names: Optional[Sequence[str]] = None,
    women_names: Optional[Sequence[str]] = None,
) -> ParsedDocument:
    """Wrap a bare instance with default or supplied names."""
    men = tuple(men_names) if men_names else tuple(
        f"m{i + 1}" for i in range(inst.n_men)
    )
    women = tuple(women_names) if women_names else tuple(
        f"w{i + 1}" for i in range(inst.n_women)
    )
    return ParsedDocument("smc", inst, None, inst.budget, men, women)


def format_matching(
    doc: ParsedDocument,
    matching: Matching,
    blocking: Sequence[tuple[int, int]],
    optimal: Optional[bool],
    feasible: bool,
) -> str:
    """Matching block: pairs, blocking count, pair list, verdict lines."""
    lines = [
        f"{doc.men_names[m]} {doc.women_names[w]}" for m, w in matching.pairs()
    ]
    lines.append(f"blocking: {len(blocking)}")
    lines += [f"{doc.men_names[m]} {doc.women_names[w]}" for m, w in blocking]
    lines.append(
        "optimal: " + ("yes" if optimal else "no" if optimal is not None else "unknown")
    )
    lines.append("feasible: " + ("yes" if feasible else "no"))
    return "\n".join(lines) + "\n"


def format_assignment(
    doc: ParsedDocument,
    assignment: Assignment,
    blocking: Sequence[tuple[int, int]],
    optimal: Optional[bool],
    feasible: bool,
) -> str:
    lines = [
        f"{doc.men_names[r]} {doc.women_names[h]}" for r, h in assignment.pairs()
    ]
    lines.append(f"blocking: {len(blocking)}")
    lines += [f"{doc.men_names[r]} {doc.women_names[h]}" for r, h in blocking]
    lines.append(
        "optimal: " + ("yes" if optimal else "no" if optimal is not None else "unknown")
    )
    lines.append("feasible: " + ("yes" if feasible else "no"))
    return "\n".join(lines) + "\n"


def parse_matching(doc: ParsedDocument, text: str) -> Matching:
    """Read the pair lines of a matching block (stops at 'blocking:')."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("blocking:"):
            break
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(f"expected 'man woman', got {raw!r}", lineno)
        pairs.append((doc.man_index(toks[0]), doc.woman_index(toks[1])))
    inst = doc.smc
    return Matching.from_pairs(inst.n_men, inst.n_women, pairs)
