"""Command-line front end: ``dyckpair <command> ...``.

Exit codes: 0 ok, 2 invariant violation, 3 cap exceeded, 4 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import derivation, experiments, parikh, pebble
from . import io as dio
from .errors import DyckPairError, InvalidRepairing, ParseError
from .recursive_zn import Geometry, Planner, narrow_check, recursive_repairing, streaming_width
from .repairing import exact_width, validate, width_of
from .strategies import bisect, frame_strategy, greedy
from .words import frame, phi, psi, random_dyck, x_word, y_ell_params, y_word, z_word


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(ParseError.exit_code)


def _pairs_arg(path, n=None):
    size, pairs = dio.read_repairing(path)
    if size is not None and n is not None and size != n:
        raise InvalidRepairing(f"pair file is for length {size}, word has length {n}")
    return pairs


# ---------------------------------------------------------------- commands


def cmd_gen(a):
    if a.family == "random":
        (pairs,) = a.params
        w = random_dyck(pairs, np.random.default_rng(a.seed))
    elif a.family == "Z":
        w = z_word(*a.params)
    elif a.family == "X":
        w = x_word(*a.params)
    elif a.family == "Y":
        w = y_word(*a.params)
    else:
        m, ell = y_ell_params(*a.params, base=a.base)
        print(f"# Y(l) = Y({m},{ell}) with log base {a.base}", file=sys.stderr)
        w = y_word(m, ell)
    if a.frame:
        w = frame(w, a.frame)
    print(w)


def cmd_width(a):
    w = dio.word_arg(a.word)
    if a.pairs:
        rep = width_of(w, _pairs_arg(a.pairs, len(w)))
        dio.emit(dio.csv_text(["step", "erased_width", "surviving_width"], rep.rows()), a.csv)
        print(f"width {rep.width} surviving_width {rep.surviving_width}", file=sys.stderr)
        return
    res = exact_width(w, cap=a.cap)
    print(res.width)
    if a.emit:
        dio.emit(dio.format_repairing(len(w), res.witness), a.emit)


def cmd_strategy(a):
    w = dio.word_arg(a.word)
    if a.kind == "bisect":
        pairs = bisect(w)
    elif a.kind == "greedy":
        pairs = greedy(w)
    else:
        if a.k is None:
            raise ParseError("frame strategy needs --k (word is +^k sigma -^k)")
        inner = w.signs[a.k:len(w) - a.k]
        if frame(inner, a.k) != w:
            raise ParseError("word is not of the form +^k sigma -^k")
        pairs = frame_strategy(inner, a.k)
    rep = width_of(w, pairs)
    dio.emit(dio.format_repairing(len(w), pairs), a.out)
    print(f"width {rep.width}", file=sys.stderr)
    if a.emit:
        trace = {"word": str(w), "strategy": a.kind, "width": rep.width,
                 "pairs": [list(map(int, p)) for p in pairs],
                 "erased_width": rep.erased.tolist(), "surviving_width": rep.surviving.tolist()}
        dio.emit(dio.dump_json(trace), a.emit)


def cmd_zn_strategy(a):
    planner = Planner(strict=a.assert_normality)
    if a.streaming:
        wd, stages = streaming_width(a.q, a.n, a.k, planner)
        pairs = None
    else:
        pairs, stages = recursive_repairing(a.q, a.n, a.k, planner)
        w = frame(z_word(a.n), a.k)
        validate(w, pairs)
        wd = width_of(w, pairs, check=False).width
    if a.assert_normality and stages:
        narrow_check(stages, a.q, Geometry(a.q, a.n, a.k))
    print(f"q={a.q} n={a.n} k={a.k} width={wd} narrow_stages={sum(s.narrow for s in stages)}")
    if a.emit:
        trace = {"q": a.q, "n": a.n, "k": a.k, "width": wd,
                 "stages": [{"t": s.t, "k_t": s.k_t, "r_t": s.r_t, "narrow": s.narrow,
                             "final_steps": s.final_steps} for s in stages]}
        if pairs is not None:
            trace["pairs"] = np.asarray(pairs).tolist()
        dio.emit(dio.dump_json(trace), a.emit)


def cmd_zn_table(a):
    header, rows = experiments.zn_table(a.n_min, a.n_max, a.jobs)
    dio.emit(dio.csv_text(header, rows), a.csv)


def cmd_tree(a):
    if a.action == "convert":
        w = dio.word_arg(a.word)
        tree = derivation.derivation_from_repairing(w, _pairs_arg(a.pairs, len(w)), a.binarize)
        text = derivation.to_json(tree) if a.format == "json" else derivation.to_text(tree) + "\n"
        dio.emit(text, a.out)
        print(f"tree width {tree.width()}", file=sys.stderr)
        return
    with open(a.file) as fh:
        raw = fh.read()
    tree = derivation.from_json(raw) if raw.lstrip().startswith("{") else derivation.from_text(raw.strip())
    derivation.check_derivation(tree)
    pairs = derivation.repairing_from_derivation(tree)
    word = derivation.derived_word(tree)
    if a.action == "validate":
        print(f"OK word {word} width {tree.width()}")
    else:
        dio.emit(dio.format_repairing(len(word), pairs), a.out)


def cmd_pebble(a):
    if a.action == "solve":
        tree = pebble.parse_tree(str(dio.word_arg(a.tree)))
        b, moves = pebble.bw_exact(tree, a.variant, a.black_only, cap=a.cap)
        print(f"bw {b} strahler {pebble.strahler(tree)}", file=sys.stderr)
        dio.emit(dio.format_moves(moves), a.out)
        return
    w = dio.word_arg(a.word)
    if a.action == "translate":
        br = pebble.simple_to_pebble(w, _pairs_arg(a.pairs, len(w)))
        print(f"width(p') {br.doubled_width} peak {br.peak}", file=sys.stderr)
        dio.emit(dio.format_moves(br.moves), a.out)
    else:
        with open(a.moves) as fh:
            moves = dio.parse_moves(fh.read())
        pairs, _ = pebble.black_to_repairing(w, moves)
        print(f"width {width_of(w, pairs).width}", file=sys.stderr)
        dio.emit(dio.format_repairing(len(w), pairs), a.out)


def cmd_phi_psi(a):
    w = dio.word_arg(a.word)
    rows = []
    for x in a.x:
        f = phi(w, x) if x <= len(w) else ""
        try:
            s = psi(w, x)
        except ValueError:
            s = ""
        rows.append([x, f, s])
    dio.emit(dio.csv_text(["x", "phi", "psi"], rows), a.csv)


def _fracs(text):
    try:
        return [Fraction(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"cannot parse numbers in {text!r}") from None


def cmd_parikh(a):
    if a.action == "check":
        y = {}
        for tok in a.y.replace(",", " ").split():
            try:
                i, j = (int(v) for v in tok.split("-"))
            except ValueError:
                raise ParseError(f"bad y edge {tok!r}, expected i-j") from None
            y[(i, j)] = 1
        ok, why = parikh.is_in_un(a.n, y, _fracs(a.x))
        print("member" if ok else "not a member")
        for line in why:
            print(f"  {line}")
        if not ok:
            return 1
    elif a.action == "cone":
        dec = parikh.cone_decompose(_fracs(a.x))
        for (i, j), c in sorted(dec.items()):
            print(f"{c} e_{i},{j}")
    elif a.action == "bvn":
        with open(a.matrix) as fh:
            m = [_fracs(line) for line in fh if line.strip()]
        for wt, perm in parikh.bvn_decompose(m):
            print(wt, " ".join(map(str, perm)))
    elif a.action == "nw":
        p, sets = parikh.nw_family(a.n, a.d, a.p)
        rep = parikh.family_invariants(a.n, a.d, p, sets)
        print(f"# p={p} m={p - 1} d={a.d} sets={len(sets)} max_intersection={rep['max_intersection']}",
              file=sys.stderr)
        dio.emit("".join(" ".join(map(str, s)) + "\n" for s in sets), a.out)
        if not rep["ok"]:
            return 2
    elif a.action == "plan":
        w = dio.word_arg(a.word)
        wd = a.width if a.width is not None else exact_width(w).width
        dio.emit(dio.dump_json(parikh.plan_lower_bound(w, wd)), a.out)
    else:
        with open(a.file) as fh:
            rep = parikh.nfa_validate(parikh.NFA.parse(fh.read()), a.n)
        dio.emit(dio.dump_json(rep), a.out)
        if not rep["ok"]:
            return 2


def cmd_experiment(a):
    name = a.name
    if name == "xn-fit":
        header, rows, fit = experiments.xn_fit(a.n_max or 10**6)
        dio.emit(dio.csv_text(header, rows), a.csv)
        print(json.dumps(fit, sort_keys=True), file=sys.stderr)
        return
    if name == "widths-small":
        header, rows = experiments.widths_small(a.n_max or 12, a.jobs)
    elif name == "zn-table":
        header, rows = experiments.zn_table(3, a.n_max or 12, a.jobs)
    elif name == "phi-psi":
        header, rows = experiments.phi_psi_rows(a.n_max or 14)
    elif name == "pebble-bridge":
        header, rows = experiments.pebble_bridge(a.n_max or 16)
    else:
        header, rows = experiments.parikh_props(a.seed)
    dio.emit(dio.csv_text(header, rows), a.csv)
    if "holds" in header:
        hi = header.index("holds")
        bad = sum(1 for r in rows if not r[hi])
        print(f"{len(rows)} rows, {bad} failing", file=sys.stderr)
        if bad:
            return 2


def cmd_verify(a):
    w = dio.word_arg(a.word)
    pairs = _pairs_arg(a.pairs, len(w))
    try:
        validate(w, pairs)
    except InvalidRepairing as exc:
        print(f"INVALID: {exc}")
        return 2
    rep = width_of(w, pairs)
    print(f"OK width {rep.width} surviving_width {rep.surviving_width}")


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dyckpair", description="Re-pairing widths of Dyck words and related tools")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="print a family word")
    p.add_argument("family", choices=["Z", "X", "Y", "Yell", "random"])
    p.add_argument("params", type=int, nargs="+")
    p.add_argument("--frame", type=int, default=0)
    p.add_argument("--base", type=float, default=2.0, help="log base for Yell")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("width", help="exact width, or the width report of a given re-pairing")
    p.add_argument("--word", required=True, help="word, shorthand like 'Z 3', or file")
    p.add_argument("--exact", action="store_true", help="exact search (default without --pairs)")
    p.add_argument("--pairs", help="re-pairing file")
    p.add_argument("--cap", type=int, default=20)
    p.add_argument("--emit", help="write an optimal re-pairing here")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("strategy", help="run a constructive strategy")
    p.add_argument("kind", choices=["bisect", "frame", "greedy"])
    p.add_argument("--word", required=True)
    p.add_argument("--k", type=int, help="frame size for the frame strategy")
    p.add_argument("--out", help="re-pairing file (default stdout)")
    p.add_argument("--emit", help="JSON trace")
    p.set_defaults(func=cmd_strategy)

    p = sub.add_parser("zn-strategy", help="recursive re-pairing p(q,n,k) of Z(n) framed by k")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--emit")
    p.add_argument("--assert-normality", action="store_true")
    p.add_argument("--streaming", action="store_true", help="width only, no materialized word")
    p.set_defaults(func=cmd_zn_strategy)

    p = sub.add_parser("zn-table", help="width of p(q,n,k) over a grid")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--csv")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_zn_table)

    p = sub.add_parser("tree", help="derivation trees")
    p.add_argument("action", choices=["convert", "validate", "to-repairing"])
    p.add_argument("file", nargs="?", help="tree file (validate, to-repairing)")
    p.add_argument("--word")
    p.add_argument("--pairs")
    p.add_argument("--binarize", choices=["left", "right"], default="left")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("pebble", help="black-white pebbling")
    p.add_argument("action", choices=["solve", "translate", "to-repairing"])
    p.add_argument("--tree", help="tree as its Dyck word (solve)")
    p.add_argument("--word")
    p.add_argument("--pairs", help="simple re-pairing (translate)")
    p.add_argument("--moves", help="black strategy file (to-repairing)")
    p.add_argument("--variant", choices=["M4", "M4'"], default="M4'")
    p.add_argument("--black-only", action="store_true")
    p.add_argument("--cap", type=int, default=pebble.BW_CAP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pebble)

    p = sub.add_parser("phi-psi", help="phi and psi of a word")
    p.add_argument("--word", required=True)
    p.add_argument("--x", type=int, nargs="+", required=True)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_phi_psi)

    p = sub.add_parser("parikh", help="cone, Birkhoff, set families, planning")
    p.add_argument("action", choices=["check", "cone", "bvn", "nw", "plan", "nfa"])
    p.add_argument("file", nargs="?", help="NFA file (nfa)")
    p.add_argument("--n", type=int)
    p.add_argument("--y", default="", help="path edges like '0-3 3-5'")
    p.add_argument("--x", default="", help="vector like '1,0,0,1'")
    p.add_argument("--matrix", help="file with one row per line")
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--word")
    p.add_argument("--width", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_parikh)

    p = sub.add_parser("experiment", help="regenerate a result table as CSV")
    p.add_argument("name", choices=sorted(experiments.SUITES) + ["xn-fit"])
    p.add_argument("--csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--n-max", type=int, help="size parameter of the suite")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify", help="check a re-pairing file against a word")
    p.add_argument("what", choices=["repairing"])
    p.add_argument("--word", required=True)
    p.add_argument("--pairs", required=True)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args) or 0
    except DyckPairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ParseError.exit_code
    return code


if __name__ == "__main__":
    sys.exit(main())
