"""
Hecke algebra in the standard basis and the Kazhdan-Lusztig basis.

Normalisation: ``H_s H_w = H_{sw}`` if ``sw > w`` and
``(v - v^-1) H_w + H_{sw}`` otherwise.  The KL element is
``h_w = sum_x h_{x,w} H_x`` with ``h_{x,w} = v^{l(x)-l(w)} P_{x,w}(v^2)``;
the table stores the integer coefficients of ``P_{x,w}`` densely.
"""

from __future__ import annotations

import gzip
import io
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .coxeter import LEFT, RIGHT, CoxeterSpec, GroupTable, build_group
from .laurent import ONE, V, ZERO, LaurentPoly

__all__ = [
    "HeckeElt", "KLTable", "CompactKLTable", "kl_basis_compact", "kl_table", "KLInvariantError", "KLMemoryError", "table_bytes", "KLTFormatError",
    "standard", "mult_by_Hs", "hecke_mul", "bar_involution",
    "kl_basis", "mu", "expand_in_kl", "kl_product", "kl_product_support",
    "save_klt", "load_klt",
]

V_MINUS_VINV = V - V ** -1


class KLInvariantError(RuntimeError):
    """A computed KL polynomial violated positivity or degree bounds."""


class KLTFormatError(ValueError):
    """Malformed KLT1 dump."""


class HeckeElt(dict):
    """Sparse ``{element index: LaurentPoly}`` in the standard basis."""

    def add_term(self, w: int, p: LaurentPoly):
        q = self.get(w, ZERO) + p
        if q:
            self[w] = q
        else:
            self.pop(w, None)

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        out = HeckeElt(self)
        for w, p in other.items():
            out.add_term(w, p)
        return out

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        out = HeckeElt(self)
        for w, p in other.items():
            out.add_term(w, -p)
        return out

    def scale(self, p: LaurentPoly | int) -> "HeckeElt":
        out = HeckeElt()
        for w, q in self.items():
            out.add_term(w, q * p)
        return out

    def bar_coeffs(self) -> "HeckeElt":
        return HeckeElt({w: p.bar() for w, p in self.items()})

    def format(self, g: GroupTable) -> str:
        if not self:
            return "0"
        parts = []
        for w in sorted(self, reverse=True):
            p = self[w]
            name = f"H_{g.word_str(w)}"
            if p == ONE:
                parts.append(name)
            elif len(p) == 1:
                parts.append(f"{p} {name}")
            else:
                parts.append(f"({p}) {name}")
        return " + ".join(parts)


def standard(w: int, coeff: LaurentPoly | int = ONE) -> HeckeElt:
    out = HeckeElt()
    out.add_term(w, coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.const(coeff))
    return out


def mult_by_Hs(g: GroupTable, h: HeckeElt, s: int, side: str = LEFT) -> HeckeElt:
    """``H_s h`` (side ``left``) or ``h H_s`` (side ``right``)."""
    out = HeckeElt()
    table = g.left if side == LEFT else g.right
    for w, p in h.items():
        sw = int(table[s, w])
        out.add_term(sw, p)
        if g.length[sw] < g.length[w]:
            out.add_term(w, p * V_MINUS_VINV)
    return out


def hecke_mul(g: GroupTable, a: HeckeElt, b: HeckeElt) -> HeckeElt:
    """Product of two arbitrary elements."""
    out = HeckeElt()
    for y, q in b.items():
        term = a
        for s in g.words[y]:
            term = mult_by_Hs(g, term, s, RIGHT)
        out = out + term.scale(q)
    return out


def _inverse_standard(g: GroupTable, w: int) -> HeckeElt:
    # H_{w^-1}^-1 = H_{s1}^-1 ... H_{sk}^-1 for w = s1 ... sk
    cache = g._cache.setdefault("Hinv", {0: standard(0)})
    todo = []
    cur = w
    while cur not in cache:
        todo.append(cur)
        cur = int(g.right[g.words[cur][-1], cur])
    for u in reversed(todo):
        s = g.words[u][-1]
        prev = cache[int(g.right[s, u])]
        cache[u] = mult_by_Hs(g, prev, s, RIGHT) - prev.scale(V_MINUS_VINV)
    return cache[w]


def bar_involution(g: GroupTable, h: HeckeElt) -> HeckeElt:
    """``H_w -> H_{w^-1}^-1`` and ``v -> v^-1``."""
    out = HeckeElt()
    for w, p in h.items():
        out = out + _inverse_standard(g, w).scale(p.bar())
    return out


class _KLRows:
    """Accessors shared by the dense and the compact table; subclasses provide ``row``."""

    group: GroupTable
    mu_down: list[tuple[np.ndarray, np.ndarray]]

    def row(self, w: int) -> np.ndarray:
        raise NotImplementedError

    @property
    def order(self) -> int:
        return self.group.order

    def poly(self, x: int, w: int) -> LaurentPoly:
        """``h_{x,w}`` as a Laurent polynomial."""
        d = int(self.group.length[w] - self.group.length[x])
        return LaurentPoly({2 * k - d: int(a) for k, a in enumerate(self.row(w)[x]) if a})

    def kl_element(self, w: int) -> HeckeElt:
        """``h_w`` in the standard basis."""
        if w not in self._elts:
            row = self.row(w)
            d = self.group.length[w] - self.group.length
            out = HeckeElt()
            for x in np.nonzero(row.any(axis=1))[0]:
                out[int(x)] = LaurentPoly({2 * k - int(d[x]): int(a) for k, a in enumerate(row[x]) if a})
            self._elts[w] = out
        return self._elts[w]

    def support(self, w: int) -> np.ndarray:
        """Indices ``x`` with ``h_{x,w} != 0``, i.e. the interval ``[e, w]``."""
        return np.nonzero(self.row(w).any(axis=1))[0]

    def mu(self, x: int, w: int) -> int:
        if w not in self._mu:
            xs, ms = self.mu_down[w]
            self._mu[w] = dict(zip(xs.tolist(), ms.tolist()))
        return self._mu[w].get(x, 0)

    def mu_edges(self, w: int) -> list[tuple[int, int]]:
        xs, ms = self.mu_down[w]
        return list(zip(xs.tolist(), ms.tolist()))

    def n_edges(self) -> int:
        return sum(len(xs) for xs, _ in self.mu_down)


@dataclass
class KLTable(_KLRows):
    """All ``h_w`` of a group plus the ``mu`` edges.

    ``P[w, x, k]`` is the coefficient of ``q^k`` in ``P_{x,w}``.
    ``mu_down[w]`` holds ``(x, mu(x, w))`` for the ``x < w`` with nonzero mu.
    """

    group: GroupTable
    P: np.ndarray
    mu_down: list[tuple[np.ndarray, np.ndarray]]
    _elts: dict = field(default_factory=dict, repr=False)
    _mu: dict = field(default_factory=dict, repr=False)

    @property
    def width(self) -> int:
        return self.P.shape[2]

    def row(self, w: int) -> np.ndarray:
        return self.P[w]


@dataclass
class CompactKLTable(_KLRows):
    """KL table storing each distinct polynomial once.

    ``pool[i]`` is a coefficient vector (``pool[0]`` is zero).  Only one of
    ``w`` and ``w^-1`` keeps a row of pool ids; the other is read through
    ``P_{x,w} = P_{x^-1,w^-1}``.
    """

    group: GroupTable
    pool: np.ndarray
    ids: np.ndarray
    slot: np.ndarray
    mu_down: list[tuple[np.ndarray, np.ndarray]]
    _elts: dict = field(default_factory=dict, repr=False)
    _mu: dict = field(default_factory=dict, repr=False)

    @property
    def width(self) -> int:
        return self.pool.shape[1]

    def row_ids(self, w: int) -> np.ndarray:
        inv = self.group.inverse
        rep = min(w, int(inv[w]))
        r = self.ids[self.slot[rep]]
        return r if rep == w else r[inv]

    def row(self, w: int) -> np.ndarray:
        return self.pool[self.row_ids(w)]


def _shift_q(a: np.ndarray, k: int) -> np.ndarray:
    if k == 0:
        return a
    out = np.zeros_like(a)
    out[:, k:] = a[:, :-k]
    return out


class KLMemoryError(MemoryError):
    pass


def _available_bytes() -> int | None:
    try:
        with open("/proc/meminfo") as fh:
            for ln in fh:
                if ln.startswith("MemAvailable:"):
                    return int(ln.split()[1]) * 1024
    except OSError:
        pass
    return None


def table_bytes(g: GroupTable, dtype=np.int32) -> int:
    """Size of the dense coefficient array ``kl_basis`` allocates."""
    width = int(g.length.max()) // 2 + 2
    return g.order * g.order * width * np.dtype(dtype).itemsize


def kl_basis(g: GroupTable, prefer: str = "min", dtype=None) -> KLTable:
    """Compute every ``h_w`` in length order.

    For ``s`` a left descent of ``w`` (smallest by default, largest with
    ``prefer="max"``) and ``y = sw``::

        h_w = h_s h_y - sum_{z < y, sz < z} mu(z, y) h_z

    which on ``P`` reads ``P_{x,w} = q^{1-c} P_{sx,y} + q^c P_{x,y} - ...``
    with ``c = 1`` when ``sx < x``.

    ``dtype=None`` picks int32, or int16 when int32 would not fit in memory;
    coefficient overflow is detected either way.  Raises ``KLMemoryError``
    before allocating when the dense table cannot fit.
    """
    avail = _available_bytes()
    if dtype is None:
        dtype = np.int32
        if avail is not None and table_bytes(g, np.int32) > 0.6 * avail:
            dtype = np.int16
    need = table_bytes(g, dtype)
    if avail is not None and need > 0.8 * avail:
        raise KLMemoryError(
            f"{g.spec.label}: dense KL table needs {need / 2**30:.1f} GiB, "
            f"{avail / 2**30:.1f} GiB available")
    n_el = g.order
    lengths = g.length.astype(np.int64)
    width = int(lengths.max()) // 2 + 2
    P = np.zeros((n_el, n_el, width), dtype=dtype)
    limit = np.iinfo(dtype).max
    P[0, 0, 0] = 1
    empty = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    mu_down: list[tuple[np.ndarray, np.ndarray]] = [empty] * n_el

    for w in range(1, n_el):
        bits = int(g.dl[w])
        desc = [s for s in range(g.rank) if bits >> s & 1]
        s = desc[0] if prefer == "min" else desc[-1]
        y = int(g.left[s, w])
        sx = g.left[s]
        down = (lengths[sx] < lengths)[:, None]
        row_y = P[y].astype(np.int64)
        a = row_y[sx]
        new = np.where(down, a + _shift_q(row_y, 1), _shift_q(a, 1) + row_y)
        lw = lengths[w]
        for z, m in zip(*mu_down[y]):
            if g.dl[z] >> s & 1:
                k = int(lw - lengths[z]) // 2
                new[:, k:] -= m * P[z, :, :width - k]
        if new[:, -1].any() or (new < 0).any():
            raise KLInvariantError(f"KL polynomial bound or positivity violated at {g.word_str(w)}")
        if new.max() > limit:
            raise OverflowError(f"KL coefficient exceeds {np.dtype(dtype).name}")
        P[w] = new
        d = lw - lengths
        xs = np.nonzero((d > 0) & (d % 2 == 1))[0]
        vals = new[xs, (d[xs] - 1) // 2]
        nz = vals != 0
        mu_down[w] = (xs[nz], vals[nz])
    return KLTable(group=g, P=P, mu_down=mu_down)


class _Pool:
    """Interns coefficient vectors; id 0 is the zero polynomial."""

    def __init__(self, width: int):
        self.width = width
        self.data = np.zeros((1024, width), dtype=np.int32)
        self.size = 1
        self.index: dict[bytes, int] = {bytes(self.data[0].tobytes()): 0}
        rng = np.random.default_rng(0x5EED)
        self.mix = rng.integers(1, 2 ** 62, size=width, dtype=np.int64) | 1

    def intern_rows(self, rows: np.ndarray) -> np.ndarray:
        """Pool ids for each row of ``rows`` (shape ``(n, width)``)."""
        keys = rows @ self.mix  # wrapping 64-bit hash, used only to group rows
        uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
        ids = np.empty(len(uniq), dtype=np.int64)
        for i, j in enumerate(first):
            vec = rows[j].astype(np.int32)
            key = vec.tobytes()
            got = self.index.get(key)
            if got is None:
                got = self._append(vec)
                self.index[key] = got
            ids[i] = got
        out = ids[inverse.ravel()]
        if not np.array_equal(self.data[out], rows):
            raise KLInvariantError("hash collision while interning KL polynomials")
        return out

    def _append(self, vec: np.ndarray) -> int:
        if self.size == len(self.data):
            self.data = np.concatenate([self.data, np.zeros_like(self.data)])
        self.data[self.size] = vec
        self.size += 1
        return self.size - 1

    def array(self) -> np.ndarray:
        return self.data[:self.size].copy()


def kl_basis_compact(g: GroupTable, prefer: str = "min") -> CompactKLTable:
    """Same recursion as ``kl_basis`` with rows stored as ids into a polynomial pool.

    Memory is about two bytes per pair ``(x, w)`` with ``w <= w^-1`` in index
    order, so ``A7`` needs roughly 1.7 GB instead of tens.
    """
    n_el = g.order
    inv = g.inverse.astype(np.int64)
    lengths = g.length.astype(np.int64)
    width = int(lengths.max()) // 2 + 2
    reps = np.nonzero(np.arange(n_el) <= inv)[0]
    slot = np.full(n_el, -1, dtype=np.int64)
    slot[reps] = np.arange(len(reps))
    id_dtype = np.uint16
    need = len(reps) * n_el * np.dtype(id_dtype).itemsize
    avail = _available_bytes()
    if avail is not None and need > 0.8 * avail:
        raise KLMemoryError(f"{g.spec.label}: compact KL table needs {need / 2**30:.1f} GiB, "
                            f"{avail / 2**30:.1f} GiB available")
    ids = np.zeros((len(reps), n_el), dtype=id_dtype)
    pool = _Pool(width)
    first = np.zeros((n_el, width), dtype=np.int64)
    first[0, 0] = 1
    ids[0] = pool.intern_rows(first)
    empty = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    mu_down: list[tuple[np.ndarray, np.ndarray]] = [empty] * n_el

    def row(w: int) -> np.ndarray:
        rep = min(w, int(inv[w]))
        r = ids[slot[rep]]
        return pool.data[r if rep == w else r[inv]].astype(np.int64)

    for w in range(1, n_el):
        if slot[w] < 0:
            xs, ms = mu_down[int(inv[w])]
            order = np.argsort(inv[xs], kind="stable")
            mu_down[w] = (inv[xs][order], ms[order])
            continue
        bits = int(g.dl[w])
        desc = [s for s in range(g.rank) if bits >> s & 1]
        s = desc[0] if prefer == "min" else desc[-1]
        y = int(g.left[s, w])
        sx = g.left[s]
        down = (lengths[sx] < lengths)[:, None]
        row_y = row(y)
        a = row_y[sx]
        new = np.where(down, a + _shift_q(row_y, 1), _shift_q(a, 1) + row_y)
        lw = lengths[w]
        for z, m in zip(*mu_down[y]):
            if g.dl[z] >> s & 1:
                k = int(lw - lengths[z]) // 2
                new[:, k:] -= m * row(int(z))[:, :width - k]
        if new[:, -1].any() or (new < 0).any():
            raise KLInvariantError(f"KL polynomial bound or positivity violated at {g.word_str(w)}")
        if new.max() > np.iinfo(np.int32).max:
            raise OverflowError("KL coefficient exceeds int32")
        got = pool.intern_rows(new)
        if pool.size > np.iinfo(ids.dtype).max:
            ids = _widen(ids)
        ids[slot[w]] = got
        d = lw - lengths
        xs = np.nonzero((d > 0) & (d % 2 == 1))[0]
        vals = new[xs, (d[xs] - 1) // 2]
        nz = vals != 0
        mu_down[w] = (xs[nz], vals[nz])
    return CompactKLTable(group=g, pool=pool.array(), ids=ids, slot=slot, mu_down=mu_down)


def _widen(ids: np.ndarray) -> np.ndarray:
    avail = _available_bytes()
    if avail is not None and ids.nbytes * 2 > 0.8 * avail:
        raise KLMemoryError("more than 65535 distinct KL polynomials and no room for wider ids")
    return ids.astype(np.uint32)


def kl_table(g: GroupTable, prefer: str = "min") -> KLTable | CompactKLTable:
    """Dense table when it fits in memory, otherwise the compact one."""
    try:
        return kl_basis(g, prefer=prefer)
    except KLMemoryError:
        return kl_basis_compact(g, prefer=prefer)


def mu(t: KLTable, x: int, w: int) -> int:
    """Coefficient of ``v^-1`` in ``h_{x,w}``."""
    return t.mu(x, w)


def expand_in_kl(t: KLTable, h: HeckeElt) -> dict[int, LaurentPoly]:
    """Coordinates of ``h`` in the KL basis (unitriangular back-substitution)."""
    rest = HeckeElt(h)
    out: dict[int, LaurentPoly] = {}
    while rest:
        x = max(rest)
        a = rest[x]
        out[x] = a
        rest = rest - t.kl_element(x).scale(a)
    return out


def kl_product(t: KLTable, w: int, s: int, side: str = RIGHT) -> dict[int, LaurentPoly]:
    """``h_w h_s`` (right) or ``h_s h_w`` (left) in the KL basis, from mu alone."""
    g = t.group
    if g.has_descent(w, s, side):
        return {w: V + V ** -1}
    out = {g.mult(s, w, side): ONE}
    for x, m in t.mu_edges(w):
        if g.has_descent(x, s, side):
            out[x] = LaurentPoly.const(m)
    return out


def kl_product_support(t: KLTable, w: int, s: int, side: str = RIGHT) -> frozenset[int]:
    """KL-support of ``h_w h_s`` (right) or ``h_s h_w`` (left); reads mu edges only."""
    g = t.group
    if g.has_descent(w, s, side):
        return frozenset([w])
    out = {g.mult(s, w, side)}
    out.update(x for x, _ in t.mu_edges(w) if g.has_descent(x, s, side))
    return frozenset(out)


# KLT1 dump -----------------------------------------------------------------
#
#   KLT1 <family> <rank> [m]
#   order <N> width <K>
#   P <w> <x> <c0> <c1> ... <c_{K-1}>     one line per pair x <= w
#
# Coefficients are those of P_{x,w}(q); mu edges are recomputed on load.

def _spec_header(spec: CoxeterSpec) -> str:
    extra = f" {spec.m}" if spec.family == "I" else ""
    return f"{spec.family} {spec.rank}{extra}"


def _open(path, mode):
    path = str(path)
    if path.endswith(".gz"):
        return gzip.open(path, mode + "t", encoding="ascii")
    return open(path, mode, encoding="ascii")


def save_klt(t: KLTable | CompactKLTable, path) -> None:
    g = t.group
    with _open(path, "w") as fh:
        fh.write(f"KLT1 {_spec_header(g.spec)}\n")
        fh.write(f"order {g.order} width {t.width}\n")
        for w in range(g.order):
            row = t.row(w)
            for x in np.nonzero(row.any(axis=1))[0]:
                fh.write(f"P {w} {x} " + " ".join(map(str, row[x].tolist())) + "\n")


def load_klt(path, group: GroupTable | None = None, dtype=np.int32) -> KLTable:
    with _open(path, "r") as fh:
        return _read_klt(fh, group, dtype)


def _read_klt(fh: io.TextIOBase, group, dtype) -> KLTable:
    head = fh.readline().split()
    if not head or head[0] != "KLT1":
        raise KLTFormatError(f"not a KLT1 file: {' '.join(head)!r}")
    try:
        fam, rank = head[1], int(head[2])
        spec = CoxeterSpec(fam, rank, int(head[3]) if fam == "I" else None)
        _, n_el, _, width = fh.readline().split()
        n_el, width = int(n_el), int(width)
    except (IndexError, ValueError) as exc:
        raise KLTFormatError(f"bad KLT1 header: {exc}") from None
    g = group if group is not None else build_group(spec)
    if g.spec != spec or g.order != n_el:
        raise KLTFormatError("KLT1 header does not match the group")
    P = np.zeros((n_el, n_el, width), dtype=dtype)
    for line in fh:
        parts = line.split()
        if not parts:
            continue
        if parts[0] != "P" or len(parts) != 3 + width:
            raise KLTFormatError(f"bad KLT1 line: {line.strip()!r}")
        w, x = int(parts[1]), int(parts[2])
        P[w, x] = [int(c) for c in parts[3:]]
    lengths = g.length.astype(np.int64)
    mu_down = []
    for w in range(n_el):
        d = lengths[w] - lengths
        xs = np.nonzero((d > 0) & (d % 2 == 1))[0]
        vals = P[w, xs, (d[xs] - 1) // 2].astype(np.int64)
        nz = vals != 0
        mu_down.append((xs[nz], vals[nz]))
    return KLTable(group=g, P=P, mu_down=mu_down)


def iter_pairs(t: KLTable) -> Iterable[tuple[int, int]]:
    for w in range(t.order):
        for x in t.support(w):
            yield int(x), w
