"""
KL-supports, the inductive partial function ``f_W`` and separated elements.

``f_W`` is computed from the W-graph alone: for ``w`` with ``sw > w``,
``supp(h_s h_w) = {sw} u {x < w : mu(x, w) != 0, sx < x}``.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import groupby
from typing import Iterable, Mapping

from . import __version__
from .coxeter import LEFT, RIGHT, GroupTable, bruhat_leq, lower_interval
from .hecke import HeckeElt, KLTable, expand_in_kl
from .wgraph import WGraph

__all__ = [
    "KLSupport", "FWTable", "SigmaReport", "PropagationResult",
    "CHAR_EQ", "CHAR_NEQ", "UNKNOWN",
    "supp_kl", "restrict_set", "compute_fw", "sigma", "propagate",
    "implication_clauses", "UNDEFINED_POLICIES",
]

CHAR_EQ, CHAR_NEQ, UNKNOWN = "CharEq", "CharNeq", "Unknown"


@dataclass(frozen=True)
class KLSupport:
    elements: frozenset[int]
    degree0: bool


def supp_kl(t: KLTable, h: HeckeElt) -> KLSupport:
    """KL-support of ``h`` and whether all its KL coordinates lie in N."""
    coeffs = expand_in_kl(t, h)
    deg0 = all(p.is_constant() and p[0] > 0 for p in coeffs.values())
    return KLSupport(frozenset(coeffs), deg0)


def restrict_set(g: GroupTable, Z: Iterable[int], s: int, side: str = LEFT) -> frozenset[int]:
    """``{x in Z : sx > x}`` (left) or ``{x in Z : xs > x}`` (right)."""
    return frozenset(x for x in Z if not g.has_descent(x, s, side))


class _Supports:
    """KL-supports of ``h_s h_w`` / ``h_w h_s`` read off a W-graph."""

    def __init__(self, g: GroupTable, wg: WGraph):
        if wg.spec != g.spec or wg.order != g.order:
            raise ValueError("W-graph does not belong to this group")
        if list(wg.dl) != [int(b) for b in g.dl] or list(wg.dr) != [int(b) for b in g.dr]:
            raise ValueError("W-graph descent labels disagree with the group")
        self.g = g
        self.dl = wg.dl
        self.dr = wg.dr
        self.down = wg.down_edges()

    def __call__(self, w: int, s: int, side: str) -> frozenset[int]:
        bits = self.dl if side == LEFT else self.dr
        if bits[w] >> s & 1:
            return frozenset([w])
        out = {self.g.mult(s, w, side)}
        out.update(x for x, _ in self.down[w] if bits[x] >> s & 1)
        return frozenset(out)


@dataclass
class FWTable:
    """``values[x]`` is ``f_W(x)`` or None where undefined.

    ``via[x]`` lists the qualifying ``(side, s)`` pairs used at ``x``.
    """

    group: GroupTable
    values: list[frozenset[int] | None]
    via: list[tuple[tuple[str, int], ...]]

    def __getitem__(self, x: int) -> frozenset[int] | None:
        return self.values[x]

    def defined(self, x: int) -> bool:
        return self.values[x] is not None

    def separated(self, x: int) -> bool:
        return self.values[x] == frozenset([x])

    @property
    def undefined(self) -> list[int]:
        return [x for x, v in enumerate(self.values) if v is None]

    @property
    def non_separated(self) -> list[int]:
        return [x for x, v in enumerate(self.values) if v is not None and v != {x}]

    @property
    def sigma(self) -> list[int]:
        return [x for x in range(len(self.values)) if self.separated(x)]


UNDEFINED_POLICIES = ("singleton", "skip")


def compute_fw(g: GroupTable, wg: WGraph, workers: int = 1,
               undefined: str = "singleton") -> FWTable:
    """Run the inductive definition of ``f_W`` in length order.

    ``x`` is defined when some ``s in dL(x)`` has ``f_W(sx)`` with every member
    ``z`` satisfying ``sz > z`` (or the mirror condition on the right);
    ``f_W(x)`` is then the intersection, over all such ``s``/``t``, of the
    union of ``supp(h_s h_z)`` / ``supp(h_z h_t)``.

    ``undefined`` controls what an undefined ``y`` feeds into longer elements:
    ``"singleton"`` continues with ``{y}`` (as if its character were ``h_y``),
    ``"skip"`` lets ``y`` contribute no qualifying side at all.  Only the
    first reproduces the published B4/D5/F4 counts.

    Elements of one length are independent, so a stratum may be split across
    ``workers`` threads; the result does not depend on the split.
    """
    if undefined not in UNDEFINED_POLICIES:
        raise ValueError(f"undefined policy must be one of {UNDEFINED_POLICIES}")
    supp = _Supports(g, wg)
    values: list[frozenset[int] | None] = [None] * g.order
    carry: list[frozenset[int] | None] = [None] * g.order
    carry[0] = frozenset([0])
    via: list[tuple[tuple[str, int], ...]] = [()] * g.order
    values[0] = frozenset([0])

    def at(x: int):
        acc = None
        used = []
        for side, bits in ((LEFT, supp.dl), (RIGHT, supp.dr)):
            for s in range(g.rank):
                if not bits[x] >> s & 1:
                    continue
                y = g.mult(s, x, side)
                fy = carry[y]
                if fy is None or any(bits[z] >> s & 1 for z in fy):
                    continue
                union = frozenset().union(*(supp(z, s, side) for z in fy))
                acc = union if acc is None else acc & union
                used.append((side, s))
        return acc, tuple(used)

    order = range(1, g.order)
    strata = [list(grp) for _, grp in groupby(order, key=lambda x: int(g.length[x]))]
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for stratum in strata:
            results = pool.map(at, stratum) if pool else map(at, stratum)
            for x, (val, used) in zip(stratum, results):
                values[x] = val
                via[x] = used
                if val is not None or undefined == "skip":
                    carry[x] = val
                else:
                    carry[x] = frozenset([x])
    finally:
        if pool:
            pool.shutdown()
    return FWTable(group=g, values=values, via=via)


@dataclass
class SigmaReport:
    spec: str
    order: int
    undefined: list[str]
    non_separated: list[str]
    sigma_size: int
    letters: dict[str, int]
    fw: dict[str, list[str]] | None = None
    separated: list[str] | None = None
    notes: list[str] = field(default_factory=list)
    version: str = __version__

    FORMAT = "SIGMA1"

    def to_json(self) -> str:
        doc = {
            "format": self.FORMAT,
            "tool": f"klsep {self.version}",
            "spec": self.spec,
            "letters": self.letters,
            "order": self.order,
            "undefined": self.undefined,
            "nonSeparated": self.non_separated,
            "sigmaSize": self.sigma_size,
        }
        if self.separated is not None:
            doc["sigma"] = self.separated
        if self.fw is not None:
            doc["fw"] = self.fw
        if self.notes:
            doc["notes"] = self.notes
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SigmaReport":
        doc = json.loads(text)
        if doc.get("format") != cls.FORMAT:
            raise ValueError(f"not a {cls.FORMAT} document")
        return cls(spec=doc["spec"], order=doc["order"], undefined=doc["undefined"],
                   non_separated=doc["nonSeparated"], sigma_size=doc["sigmaSize"],
                   letters=doc["letters"], fw=doc.get("fw"), separated=doc.get("sigma"),
                   notes=doc.get("notes", []),
                   version=doc["tool"].split()[-1])

    def to_text(self) -> str:
        alias = ", ".join(f"{k}=s{v + 1}" for k, v in self.letters.items())
        lines = [
            f"# klsep {self.version}  spec {self.spec}  letters {alias}",
            f"order            {self.order}",
            f"sigma size       {self.sigma_size}",
            f"non-separated    {len(self.non_separated)}",
            f"undefined        {len(self.undefined)}",
        ]
        lines.extend(f"# {n}" for n in self.notes)
        if self.separated is not None:
            lines.append("")
            lines.append("separated (sigma):")
            lines.append("  {" + ", ".join(self.separated) + "}")
        if self.undefined:
            lines.append("")
            lines.append("f_W undefined on:")
            lines.extend(f"  {w}" for w in self.undefined)
        if self.non_separated:
            lines.append("")
            lines.append("not separated:")
            if self.fw is not None:
                lines.extend(f"  {w}  f_W = {{{', '.join(self.fw[w])}}}" for w in self.non_separated)
            else:
                lines.extend(f"  {w}" for w in self.non_separated)
        return "\n".join(lines) + "\n"


def sigma(f: FWTable, full: bool = False, list_sigma: bool = False) -> SigmaReport:
    """Summarise ``f_W``: counts plus element lists in (length, lex) order."""
    g = f.group
    word = g.word_str
    fw = None
    if full:
        fw = {word(x): [word(y) for y in sorted(v)]
              for x, v in enumerate(f.values) if v is not None}
    return SigmaReport(
        spec=g.spec.label,
        order=g.order,
        undefined=[word(x) for x in f.undefined],
        non_separated=[word(x) for x in f.non_separated],
        sigma_size=len(f.sigma),
        letters={c: i for i, c in enumerate(g.spec.letters)},
        fw=fw,
        separated=[word(x) for x in f.sigma] if list_sigma else None,
    )


# propagation ---------------------------------------------------------------

@dataclass(frozen=True)
class Clause:
    """If every premise has ``ch E(p) = h_p`` then so does ``conclusion``."""

    premises: frozenset[int]
    conclusion: int
    side: str
    s: int


def _maximal(g: GroupTable, elems: set[int]) -> list[int]:
    return sorted(x for x in elems
                  if not any(y != x and bruhat_leq(g, x, y) for y in elems))


def implication_clauses(g: GroupTable, wg: WGraph, f: FWTable) -> list[Clause]:
    """Implications obtained by splitting ``E(y) * h_s`` into parity summands.

    For ``sy > y`` and ``ch E(y) = h_y``, the object with character ``h_s h_y``
    is KL-supported in degree 0.  A maximal element ``x`` of what is left
    after removing already-identified summands is itself a summand, and its
    character lies in ``remaining n f_W(x)`` (``[e, x]`` where ``f_W`` is
    undefined).  When that set is ``{x}`` the character is ``h_x``.
    """
    supp = _Supports(g, wg)
    clauses = set()
    for y in range(g.order):
        for side, bits in ((LEFT, supp.dl), (RIGHT, supp.dr)):
            for s in range(g.rank):
                if bits[y] >> s & 1:
                    continue
                remaining = set(supp(y, s, side))
                premises = {y}
                while remaining:
                    top = _maximal(g, remaining)
                    blocked = False
                    for x in top:
                        bound = f.values[x] if f.values[x] is not None else lower_interval(g, x)
                        if remaining & bound == {x}:
                            clauses.add(Clause(frozenset(premises), x, side, s))
                        else:
                            blocked = True
                    if blocked:
                        break
                    premises.update(top)
                    remaining.difference_update(top)
    return sorted(clauses, key=lambda c: (c.conclusion, sorted(c.premises), c.side, c.s))


@dataclass
class PropagationResult:
    status: dict[int, str]
    reasons: dict[int, str]
    conflicts: list[int] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.conflicts

    def with_status(self, st: str) -> list[int]:
        return sorted(x for x, v in self.status.items() if v == st)


def propagate(g: GroupTable, wg: WGraph, f: FWTable,
              assumptions: Mapping[int, str] | None = None) -> PropagationResult:
    """Close ``CharEq``/``CharNeq`` marks under the implication clauses.

    Separated elements start as ``CharEq``.  Forward: all premises ``CharEq``
    forces the conclusion ``CharEq``.  Backward (contrapositive of a single
    clause): conclusion ``CharNeq`` with all premises but one ``CharEq`` forces
    the remaining premise ``CharNeq``.  Elements derived both ways are listed
    in ``conflicts``.
    """
    assumptions = dict(assumptions or {})
    for x, st in assumptions.items():
        if st not in (CHAR_EQ, CHAR_NEQ):
            raise ValueError(f"assumption must be {CHAR_EQ} or {CHAR_NEQ}, got {st!r}")
    status = {x: UNKNOWN for x in range(g.order)}
    reasons: dict[int, str] = {}
    conflicts: list[int] = []

    def mark(x: int, st: str, why: str) -> bool:
        cur = status[x]
        if cur == st:
            return False
        if cur != UNKNOWN:
            if x not in conflicts:
                conflicts.append(x)
            return False
        status[x] = st
        reasons[x] = why
        return True

    for x in f.sigma:
        mark(x, CHAR_EQ, "separated")
    for x, st in sorted(assumptions.items()):
        mark(x, st, "assumption")

    clauses = implication_clauses(g, wg, f)
    word = g.word_str
    changed = True
    while changed:
        changed = False
        for c in clauses:
            how = f"{c.side} h_{g.spec.letters[c.s]} from " + ",".join(word(p) for p in sorted(c.premises))
            if all(status[p] == CHAR_EQ for p in c.premises):
                changed |= mark(c.conclusion, CHAR_EQ, f"forward {how}")
            if status[c.conclusion] == CHAR_NEQ:
                open_ = [p for p in c.premises if status[p] != CHAR_EQ]
                if len(open_) == 1:
                    changed |= mark(open_[0], CHAR_NEQ,
                                    f"backward via {word(c.conclusion)} ({how})")
    return PropagationResult(status=status, reasons=reasons, conflicts=sorted(conflicts))
