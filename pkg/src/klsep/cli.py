"""Command-line entry point: ``klsep <subcommand> ...``.

Exit codes: 0 success, 2 bad arguments or input, 3 unsupported group,
4 an internal invariant failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .bott_samelson import (HEXAGON_WORD, bb_cell_dim, fiber_fixed_points, format_root,
                            hexagon_labels, mask_str, normal_line_weight)
from .coxeter import CoxeterSpec, GroupTable, UnsupportedSpec, build_group, one_line, parse_one_line
from .hecke import (CompactKLTable, KLInvariantError, KLMemoryError, KLTable, kl_table, load_klt,
                    save_klt)
from .separation import (CHAR_EQ, CHAR_NEQ, UNDEFINED_POLICIES, compute_fw, propagate,
                         sigma as sigma_report)
from .torsion import d4_torsion_report
from .wgraph import WGraph, WGraphParseError, build_wgraph, parse as parse_wgraph, serialize

log = logging.getLogger("klsep")

EXIT_OK, EXIT_CONFIG, EXIT_UNSUPPORTED, EXIT_INVARIANT = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    spec: CoxeterSpec | None
    fmt: str
    output: Path | None
    cache: Path | None
    threads: int
    args: argparse.Namespace


# spec and element parsing --------------------------------------------------

def spec_from_args(ns: argparse.Namespace) -> CoxeterSpec | None:
    if getattr(ns, "spec", None):
        return CoxeterSpec.parse(ns.spec)
    fam = getattr(ns, "family", None)
    if fam is None:
        return None
    fam = fam.upper()
    if fam in ("I", "I2"):
        if ns.m is None:
            raise ConfigError("dihedral family needs --m")
        return CoxeterSpec("I", 2, ns.m)
    if ns.rank is None:
        if fam == "F":
            return CoxeterSpec("F", 4)
        if fam == "G":
            return CoxeterSpec("G", 2)
        raise ConfigError(f"family {fam} needs --rank")
    return CoxeterSpec(fam, ns.rank)


def header(g: GroupTable, extra: str = "") -> str:
    alias = ", ".join(f"{c}=s{i + 1}" for i, c in enumerate(g.spec.letters))
    return f"# klsep {__version__}  spec {g.spec.label}  letters {alias}{extra}"


def parse_letters(g: GroupTable, text: str) -> tuple[int, ...]:
    """A word, possibly non-reduced: ``3,2,1`` (1-based numbers or letters) or ``suv``."""
    letters = g.spec.letters
    tokens = [t for t in text.replace(" ", "").split(",") if t] if "," in text else list(text)
    out = []
    for tok in tokens:
        if tok in letters:
            out.append(letters.index(tok))
        elif tok.isdigit() and 1 <= int(tok) <= g.rank:
            out.append(int(tok) - 1)
        else:
            raise ConfigError(f"{tok!r} is not a generator of {g.spec.label}")
    return tuple(out)


def parse_element(g: GroupTable, text: str, notation: str | None = None) -> int:
    """Letter word, or one-line notation in type A; ``notation`` settles ambiguity."""
    as_word = as_perm = None
    try:
        as_word = g.parse_word(text)
    except ValueError:
        pass
    if g.spec.family == "A":
        try:
            as_perm = parse_one_line(g, text)
        except ValueError:
            pass
    if notation == "word":
        if as_word is None:
            raise ConfigError(f"{text!r} is not a word in {g.spec.label}")
        return as_word
    if notation == "oneline":
        if as_perm is None:
            raise ConfigError(f"{text!r} is not a one-line permutation for {g.spec.label}")
        return as_perm
    if as_word is not None and as_perm is not None and as_word != as_perm:
        raise ConfigError(f"{text!r} parses as a word and as one-line notation; pass --notation")
    found = as_word if as_word is not None else as_perm
    if found is None:
        raise ConfigError(f"cannot parse element {text!r} for {g.spec.label}")
    return found


# KL tables with optional cache ---------------------------------------------

def _cache_path(cache: Path, g: GroupTable) -> Path:
    return cache / f"{g.spec.label}.klt.gz"


def get_kl(g: GroupTable, cache: Path | None) -> tuple[KLTable | CompactKLTable, str | None]:
    """KL table for ``g``; second item describes cache provenance, if any."""
    if cache is None:
        return kl_table(g), None
    path = _cache_path(cache, g)
    if path.exists():
        log.info("loading KL table from %s", path)
        return load_klt(path, g), f"KL table loaded from cache {path}"
    t = kl_table(g)
    cache.mkdir(parents=True, exist_ok=True)
    save_klt(t, path)
    return t, f"KL table computed and written to cache {path}"


# subcommands ---------------------------------------------------------------

def cmd_group(cfg: RunConfig) -> str:
    g = build_group(cfg.spec)
    by_len: dict[int, int] = {}
    for ln in g.length.tolist():
        by_len[ln] = by_len.get(ln, 0) + 1
    rows = []
    if cfg.args.list:
        for w in range(g.order):
            row = {"index": w, "word": g.word_str(w), "length": int(g.length[w]),
                   "dL": "".join(g.spec.letters[s] for s in sorted(g.descents(w))),
                   "dR": "".join(g.spec.letters[s] for s in sorted(g.descents(w, "right")))}
            if g.spec.family == "A":
                row["oneline"] = "".join(map(str, one_line(g, w)))
            rows.append(row)
    if cfg.fmt == "json":
        return json.dumps({"tool": f"klsep {__version__}", "spec": g.spec.label,
                           "letters": {c: i for i, c in enumerate(g.spec.letters)},
                           "order": g.order, "longest": g.word_str(g.longest),
                           "lengths": by_len, "elements": rows or None}, indent=1) + "\n"
    if cfg.fmt == "csv":
        return _csv(rows, header(g)) if rows else header(g) + "\n"
    lines = [header(g), f"order      {g.order}", f"max length {int(g.length.max())}",
             f"longest    {g.word_str(g.longest)}",
             "by length  " + " ".join(str(by_len[k]) for k in sorted(by_len))]
    for r in rows:
        lines.append("  ".join(str(r[k]) for k in r))
    return "\n".join(lines) + "\n"


def cmd_klbasis(cfg: RunConfig) -> str:
    g = build_group(cfg.spec)
    t, prov = get_kl(g, cfg.cache)
    a = cfg.args
    lines = [header(g)] + ([f"# {prov}"] if prov else [])
    for text in a.element or []:
        w = parse_element(g, text, a.notation)
        lines.append(f"h_{g.word_str(w)} = {t.kl_element(w).format(g)}")
    for x_text, w_text in a.pair or []:
        x, w = parse_element(g, x_text, a.notation), parse_element(g, w_text, a.notation)
        lines.append(f"h_{{{g.word_str(x)},{g.word_str(w)}}} = {t.poly(x, w).format()}"
                     f"    mu = {t.mu(x, w)}")
    if a.mu:
        lines.append(f"mu edges {t.n_edges()}")
        for w in range(g.order):
            for x, m in t.mu_edges(w):
                lines.append(f"{g.word_str(x)} {g.word_str(w)} {m}")
    if len(lines) == 1 + bool(prov):
        lines.append("nothing requested: pass --element, --pair or --mu")
    return "\n".join(lines) + "\n"


def _wgraph_for(cfg: RunConfig) -> tuple[GroupTable, WGraph, list[str]]:
    a = cfg.args
    if getattr(a, "from_wgraph", None):
        try:
            wg = parse_wgraph(Path(a.from_wgraph).read_text())
        except OSError as exc:
            raise ConfigError(str(exc)) from None
        if cfg.spec is not None and cfg.spec != wg.spec:
            raise ConfigError(f"W-graph is for {wg.spec.label}, not {cfg.spec.label}")
        return build_group(wg.spec), wg, []
    if cfg.spec is None:
        raise ConfigError("give a group (--family/--rank/--m or --spec) or --from-wgraph")
    g = build_group(cfg.spec)
    t, prov = get_kl(g, cfg.cache)
    return g, build_wgraph(g, t), [prov] if prov else []


def cmd_wgraph(cfg: RunConfig) -> str:
    a = cfg.args
    if a.ingest:
        try:
            wg = parse_wgraph(Path(a.ingest).read_text())
        except OSError as exc:
            raise ConfigError(str(exc)) from None
        g = build_group(wg.spec)
        if list(wg.dl) != g.dl.tolist() or list(wg.dr) != g.dr.tolist():
            raise ConfigError("descent labels do not match the group")
        return (header(g) + f"\nvertices {wg.order}\nedges    {len(wg.edges)}\n"
                f"max mu   {max((m for *_, m in wg.edges), default=0)}\n")
    g, wg, _ = _wgraph_for(cfg)
    return serialize(wg)


def cmd_sigma(cfg: RunConfig) -> str:
    a = cfg.args
    g, wg, notes = _wgraph_for(cfg)
    f = compute_fw(g, wg, workers=cfg.threads, undefined=a.undefined_policy)
    rep = sigma_report(f, full=a.full, list_sigma=a.list_sigma)
    rep.notes = notes
    if a.undefined_policy != "singleton":
        rep.notes.append(f"undefined policy {a.undefined_policy}")
    if cfg.fmt == "json":
        return rep.to_json()
    return rep.to_text()


def read_assumptions(g: GroupTable, path: str, notation: str | None) -> dict[int, str]:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(str(exc)) from None
    for n, ln in enumerate(text.splitlines(), start=1):
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        parts = ln.split()
        if len(parts) != 2 or parts[0] not in ("eq", "neq"):
            raise ConfigError(f"{path}:{n}: expected 'eq <word>' or 'neq <word>'")
        out[parse_element(g, parts[1], notation)] = CHAR_EQ if parts[0] == "eq" else CHAR_NEQ
    return out


def cmd_propagate(cfg: RunConfig) -> str:
    a = cfg.args
    g, wg, notes = _wgraph_for(cfg)
    f = compute_fw(g, wg, workers=cfg.threads, undefined=a.undefined_policy)
    assume = read_assumptions(g, a.assumptions, a.notation) if a.assumptions else {}
    res = propagate(g, wg, f, assume)
    shown = range(g.order) if a.all else sorted(set(f.non_separated) | set(f.undefined) | set(assume))
    rows = [{"element": g.word_str(x), "status": res.status[x],
             "reason": res.reasons.get(x, "")} for x in shown]
    if cfg.fmt == "json":
        return json.dumps({"tool": f"klsep {__version__}", "spec": g.spec.label,
                           "letters": {c: i for i, c in enumerate(g.spec.letters)},
                           "notes": notes, "results": rows,
                           "conflicts": [g.word_str(x) for x in res.conflicts]}, indent=1) + "\n"
    if cfg.fmt == "csv":
        return _csv(rows, header(g))
    width = max([len(r["element"]) for r in rows] + [7])
    lines = [header(g)] + [f"# {n}" for n in notes]
    lines += [f"{r['element']:<{width}}  {r['status']:<8} {r['reason']}".rstrip() for r in rows]
    lines.append(f"conflicts: {', '.join(g.word_str(x) for x in res.conflicts) or 'none'}")
    return "\n".join(lines) + "\n"


def cmd_fiber(cfg: RunConfig) -> str:
    a = cfg.args
    g = build_group(cfg.spec)
    word = parse_letters(g, a.word)
    y = parse_element(g, a.target, a.notation) if a.target else g.element(word)
    masks = fiber_fixed_points(g, word, y)
    labels = hexagon_labels() if g.spec.label == "A7" and word == HEXAGON_WORD else {}
    positions = [int(p) for p in a.positions.split(",")] if a.positions else []
    if a.weights and not positions:
        positions = list(range(1, len(word) + 1))
    for p in positions:
        if not 1 <= p <= len(word):
            raise ConfigError(f"position {p} outside 1..{len(word)}")
    rows = []
    for m in masks:
        row = {"mask": mask_str(m)}
        if labels:
            row["label"] = labels.get(m, "")
        if a.dims:
            total, fib = bb_cell_dim(g, word, m)
            row["total"], row["fiber"] = total, fib
        if a.weights:
            for p in positions:
                row[f"w{p}"] = format_root(normal_line_weight(g, word, m, p))
        rows.append(row)
    target = g.word_str(y) + (f" ({''.join(map(str, one_line(g, y)))})" if g.spec.family == "A" else "")
    head = header(g, f"  word {','.join(str(s + 1) for s in word)}  target {target}")
    if cfg.fmt == "csv":
        return _csv(rows, head)
    if cfg.fmt == "json":
        return json.dumps({"tool": f"klsep {__version__}", "spec": g.spec.label,
                           "word": [s + 1 for s in word], "target": g.word_str(y),
                           "fixedPoints": rows}, indent=1) + "\n"
    lines = [head, f"fixed points {len(masks)}"]
    if rows:
        keys = list(rows[0])
        widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in keys}
        lines.append("  ".join(k.ljust(widths[k]) for k in keys).rstrip())
        for r in rows:
            lines.append("  ".join(str(r[k]).ljust(widths[k]) for k in keys).rstrip())
    return "\n".join(lines) + "\n"


def cmd_torsion(cfg: RunConfig) -> str:
    g = build_group(CoxeterSpec("D", 4))
    rep = d4_torsion_report(g)
    names = "".join(g.spec.letters)
    lines = [header(g), "word suvtsuv, target suv", "",
             "restrictions at fixed points (e1 e2 e3 -> weight):"]
    for key in sorted(rep.restrictions):
        lines.append(f"  {''.join(map(str, key))}  {format_root(rep.restrictions[key], 'a_')}")
    lines.append("factor weights: " + ", ".join(format_root(w, "a_") for w in rep.weights))
    lines.append(f"(simple roots a_1..a_4 are {', '.join(names)})")
    lines += ["", f"euler class  {rep.euler_class}", "multiplication H^2 -> H^4:",
              rep.matrix.format(), "", f"determinant  {rep.det}",
              f"smith invariants  {tuple(rep.smith.invariants)}", f"verdict  {rep.verdict}"]
    return "\n".join(lines) + "\n"


def _csv(rows: list[dict], head: str) -> str:
    buf = io.StringIO()
    buf.write(head + "\n")
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


COMMANDS = {
    "group": cmd_group, "klbasis": cmd_klbasis, "wgraph": cmd_wgraph, "sigma": cmd_sigma,
    "propagate": cmd_propagate, "fiber": cmd_fiber, "torsion": cmd_torsion,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="klsep", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"klsep {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def group_args(sp, required=True):
        sp.add_argument("--spec", help="e.g. B3, D4, I2(5)")
        sp.add_argument("--family", help="A, B, D, F, G or I2")
        sp.add_argument("--rank", type=int)
        sp.add_argument("--m", type=int, help="dihedral order parameter")
        sp.add_argument("--format", dest="fmt", choices=("text", "csv", "json"), default="text")
        sp.add_argument("-o", "--output", type=Path)
        sp.add_argument("--notation", choices=("word", "oneline"))
        sp.set_defaults(spec_required=required)

    def kl_args(sp):
        sp.add_argument("--cache", type=Path, help="directory for KLT1 dumps")
        sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("group", help="enumerate a group and print statistics")
    group_args(sp)
    sp.add_argument("--list", action="store_true", help="list every element")

    sp = sub.add_parser("klbasis", help="KL basis elements, polynomials and mu")
    group_args(sp)
    kl_args(sp)
    sp.add_argument("--element", action="append", help="print h_w (repeatable)")
    sp.add_argument("--pair", nargs=2, action="append", metavar=("X", "W"), help="print h_{x,w}")
    sp.add_argument("--mu", action="store_true", help="list all mu edges")

    sp = sub.add_parser("wgraph", help="emit a WG1 W-graph, or check one with --ingest")
    group_args(sp, required=False)
    kl_args(sp)
    sp.add_argument("--ingest", metavar="FILE")

    for name, helptext in (("sigma", "f_W, separated elements and a SIGMA1 report"),
                           ("propagate", "derive CharEq/CharNeq marks from assumptions")):
        sp = sub.add_parser(name, help=helptext)
        group_args(sp, required=False)
        kl_args(sp)
        sp.add_argument("--from-wgraph", metavar="FILE")
        sp.add_argument("--undefined-policy", choices=UNDEFINED_POLICIES, default="singleton")
        if name == "sigma":
            sp.add_argument("--json", action="store_true", help="same as --format json")
            sp.add_argument("--full", action="store_true", help="include every f_W value")
            sp.add_argument("--list-sigma", action="store_true", help="list separated elements")
        else:
            sp.add_argument("--assumptions", metavar="FILE", help="lines 'eq <w>' / 'neq <w>'")
            sp.add_argument("--all", action="store_true", help="report every element")

    sp = sub.add_parser("fiber", help="fixed points, cell dimensions and weights of a fiber")
    group_args(sp)
    sp.add_argument("--word", required=True, help="e.g. 3,2,1,5 or suvt")
    sp.add_argument("--target", help="element y (defaults to the product of the word)")
    sp.add_argument("--dims", action="store_true")
    sp.add_argument("--weights", action="store_true")
    sp.add_argument("--positions", help="comma-separated 1-based positions for --weights")

    sp = sub.add_parser("torsion", help="torsion certificate for a worked example")
    sp.add_argument("--example", choices=("d4",), required=True)
    sp.add_argument("-o", "--output", type=Path)
    sp.set_defaults(fmt="text", spec_required=False)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if getattr(ns, "json", False):
        ns.fmt = "json"
    try:
        spec = spec_from_args(ns)
        if spec is None and ns.spec_required:
            raise ConfigError("give a group with --spec or --family/--rank/--m")
        if getattr(ns, "threads", 1) < 1:
            raise ConfigError("--threads must be positive")
        cfg = RunConfig(ns.command, spec, ns.fmt, ns.output, getattr(ns, "cache", None),
                        getattr(ns, "threads", 1), ns)
        out = COMMANDS[ns.command](cfg)
    except UnsupportedSpec as exc:
        print(f"klsep: unsupported group: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (KLInvariantError, AssertionError) as exc:
        print(f"klsep: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except KLMemoryError as exc:
        print(f"klsep: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ConfigError, WGraphParseError, ValueError) as exc:
        print(f"klsep: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.output:
        cfg.output.write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
