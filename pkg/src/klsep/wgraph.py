"""
W-graphs: descent-labelled vertices and mu-labelled edges.

Text format ``WG1``::

    WG1 <family> <rank> [m]
    V <index> <word> <dL-bits> <dR-bits>
    E <x> <y> <mu>

Words use the group's letters (``e`` for the identity).  Descent bits are
written generator 0 first, e.g. ``100`` for ``{s}`` in rank 3.  Edges satisfy
``x < y`` and are listed by ``(l(y), y, x)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coxeter import CoxeterSpec, GroupTable, UnsupportedSpec
from .hecke import CompactKLTable, KLTable

__all__ = [
    "WGraph", "WGraphParseError", "MalformedHeader", "UnknownVersion",
    "DanglingVertex", "NonPositiveMu", "build_wgraph", "serialize", "parse",
]

VERSION = "WG1"


class WGraphParseError(ValueError):
    pass


class MalformedHeader(WGraphParseError):
    pass


class UnknownVersion(WGraphParseError):
    pass


class DanglingVertex(WGraphParseError):
    pass


class NonPositiveMu(WGraphParseError):
    pass


@dataclass(frozen=True)
class WGraph:
    spec: CoxeterSpec
    words: tuple[str, ...]
    dl: tuple[int, ...]
    dr: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]

    @property
    def order(self) -> int:
        return len(self.words)

    def down_edges(self) -> list[list[tuple[int, int]]]:
        """``out[y]`` lists ``(x, mu)`` for the edges ``x < y``."""
        out: list[list[tuple[int, int]]] = [[] for _ in self.words]
        for x, y, m in self.edges:
            out[y].append((x, m))
        return out


def build_wgraph(g: GroupTable, t: KLTable | CompactKLTable) -> WGraph:
    edges = []
    for y in range(g.order):
        for x, m in t.mu_edges(y):
            edges.append((int(g.length[y]), y, x, m))
    edges.sort()
    return WGraph(
        spec=g.spec,
        words=tuple(g.word_str(w) for w in range(g.order)),
        dl=tuple(int(b) for b in g.dl),
        dr=tuple(int(b) for b in g.dr),
        edges=tuple((x, y, m) for _, y, x, m in edges),
    )


def _bits(mask: int, rank: int) -> str:
    return "".join("1" if mask >> s & 1 else "0" for s in range(rank))


def serialize(wg: WGraph) -> str:
    spec = wg.spec
    rank = spec.rank
    head = f"{VERSION} {spec.family} {rank}" + (f" {spec.m}" if spec.family == "I" else "")
    lines = [head]
    for i, word in enumerate(wg.words):
        lines.append(f"V {i} {word} {_bits(wg.dl[i], rank)} {_bits(wg.dr[i], rank)}")
    for x, y, m in wg.edges:
        lines.append(f"E {x} {y} {m}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> WGraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedHeader("empty input")
    head = lines[0].split()
    if not head or not head[0].startswith("WG"):
        raise MalformedHeader(f"missing WG header: {lines[0]!r}")
    if head[0] != VERSION:
        raise UnknownVersion(f"unsupported version {head[0]!r}")
    try:
        fam, rank = head[1], int(head[2])
        m = int(head[3]) if fam == "I" else None
        if len(head) != (4 if fam == "I" else 3):
            raise ValueError("wrong field count")
        spec = CoxeterSpec(fam, rank, m)
    except (IndexError, ValueError, UnsupportedSpec) as exc:
        raise MalformedHeader(f"bad header {lines[0]!r}: {exc}") from None

    words, dl, dr, edges = [], [], [], []
    for ln in lines[1:]:
        parts = ln.split()
        try:
            if parts[0] == "V" and len(parts) == 5:
                if int(parts[1]) != len(words):
                    raise MalformedHeader(f"vertex out of order: {ln!r}")
                if len(parts[3]) != rank or len(parts[4]) != rank:
                    raise MalformedHeader(f"descent bits of wrong width: {ln!r}")
                words.append(parts[2])
                dl.append(int(parts[3][::-1], 2))
                dr.append(int(parts[4][::-1], 2))
            elif parts[0] == "E" and len(parts) == 4:
                edges.append((int(parts[1]), int(parts[2]), int(parts[3])))
            else:
                raise MalformedHeader(f"unrecognised line {ln!r}")
        except ValueError as exc:
            if isinstance(exc, WGraphParseError):
                raise
            raise MalformedHeader(f"bad line {ln!r}: {exc}") from None
    if not words:
        raise MalformedHeader("graph has no vertices (a group always contains e)")
    for x, y, m in edges:
        if not (0 <= x < len(words) and 0 <= y < len(words)):
            raise DanglingVertex(f"edge ({x}, {y}) references a missing vertex")
        if m <= 0:
            raise NonPositiveMu(f"edge ({x}, {y}) has mu = {m}")
    return WGraph(spec, tuple(words), tuple(dl), tuple(dr), tuple(edges))
