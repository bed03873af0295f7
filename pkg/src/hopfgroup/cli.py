"""Command-line front end: ``hopfgroup <verb> [options]``.

Verbs: eval, coproduct, convolve, fourier, rank, commute, grouplike, expect,
verify.  Functions are given in the DSL (``--fn 'chi(0, level=0)'``) or as
``@path`` to a file holding DSL text or the JSON function format.

Exit codes: 0 on success or pass, 1 on a failing suite or an unexpected
verdict, 2 on usage, parse or unsupported-operation errors.
"""

import argparse
import json
import random
import re
import sys

from . import convalg as C
from . import harness as H
from . import operator as OP
from . import schwartz as S
from .dsl import DSLError, format_dual, format_function, parse_function
from .fourier import dual_group, fourier, inverse_fourier
from .errors import ConductorError, HopfError, LeakageError, UsageError, UnsupportedOperation
from .group import parse_group, split_top_level
from .schwartz import BSFunction

__all__ = ["main", "build_parser", "parse_window"]


class _Exit(Exception):
    def __init__(self, code, message=""):
        super().__init__(message)
        self.code = code
        self.message = message


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _Exit(2, f"{self.prog}: error: {message}")


# --------------------------------------------------------------------------
# input helpers


def _read_source(text):
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read()
    return text


def load_function(text, group):
    """DSL text, or ``@file`` with DSL or JSON content."""
    src = _read_source(text).strip()
    if src.startswith("{"):
        try:
            data = json.loads(src)
        except json.JSONDecodeError as exc:
            raise UsageError(f"invalid JSON function: {exc}") from None
        if data.get("dual"):
            data = data["symbol"]
        if data.get("group", group.descriptor) != group.descriptor:
            raise UsageError(f"function lives on {data['group']}, not on {group.descriptor}")
        return BSFunction.from_json(data, group)
    return parse_function(src, group)


_WINDOW = re.compile(r"\s*(?:p\s*\^\s*|H_?)?\s*([+-]?\d+)\s*\.\.\s*(?:level\s*)?([+-]?\d+)\s*")


def parse_window(text, group):
    """'p^-2..level 2' (or 'H_-2..2'): level-2 cells of the subgroup H_-2."""
    m = _WINDOW.fullmatch(text)
    if not m:
        raise UsageError(f"cannot parse window {text!r}; expected e.g. 'p^-2..level 2'")
    top, level = int(m.group(1)), int(m.group(2))
    group.check_level(top)
    group.check_level(level)
    if top > level:
        raise UsageError(f"window subgroup H_{top} is smaller than its cells H_{level}")
    return OP.Truncation.ball(group, top, level)


def _default_window(group, functions):
    """Smallest filtration ball holding every support, at the finest level."""
    level = max(f.level for f in functions)
    reps = [r for f in functions for r in f.terms]
    top = level
    while top > group.min_level and not all(group.in_subgroup(r, top) for r in reps):
        top -= 1
    if not all(group.in_subgroup(r, top) for r in reps):
        raise UsageError("supports do not fit in any filtration subgroup; pass --window")
    return OP.Truncation.ball(group, top, level)


# --------------------------------------------------------------------------
# output helpers


def _emit(args, text, data):
    out = json.dumps(data, sort_keys=False) if args.json else text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _tensor_text(t):
    if not t.legs:
        return "0"
    return "\n".join(f"[{format_function(a)}] (x) [{format_function(b)}]" for a, b in t.legs)


def _matrix_json(m):
    return {
        "window": m.domain.describe(),
        "rows": [[str(c) for c in row] for row in m.rows],
    }


# --------------------------------------------------------------------------
# verbs


def cmd_eval(args, group):
    f = load_function(args.fn, group)
    data = {"function": f.to_json(), "dsl": format_function(f)}
    lines = [format_function(f)]
    if args.at:
        values = []
        for text in args.at:
            x = group.parse_element(text)
            v = f(x)
            values.append({"at": group.format_element(x), "value": str(v)})
            lines.append(f"f({group.format_element(x)}) = {v}")
        data["values"] = values
    _emit(args, "\n".join(lines), data)
    return 0


def cmd_coproduct(args, group):
    f = load_function(args.fn, group)
    g = load_function(args.fn2, group)
    if args.side == "right":
        t = S.coproduct_right(f, g)
    else:
        t = S.coproduct_left(f, g)
    t = t.merged() if args.merge else t
    _emit(args, _tensor_text(t), {"side": args.side, "terms": t.to_json()})
    return 0


def cmd_convolve(args, group):
    f = load_function(args.fn, group)
    g = load_function(args.fn2, group)
    h = C.conv_mul(C.ConvElement(f), C.ConvElement(g))
    _emit(args, format_dual(h), h.to_json())
    return 0


def cmd_fourier(args, group):
    dual_group(group)  # reject unsupported groups before parsing the input
    f = load_function(args.fn, group)
    target = parse_group(args.target) if args.target else None
    h = inverse_fourier(f, target) if args.inverse else fourier(f, target)
    text = f"on {h.group.descriptor}: {format_function(h)}"
    _emit(args, text, h.to_json())
    return 0


def _operator_inputs(args, group):
    f = load_function(args.fn, group)
    g = load_function(args.mult, group) if args.mult else None
    funcs = [f] + ([g] if g is not None else [])
    t = parse_window(args.window, group) if args.window else _default_window(group, funcs)
    return f, g, t


def cmd_rank(args, group):
    f, g, t = _operator_inputs(args, group)
    m = OP.matrix_of_conv(f, t, exact=not args.compress)
    if g is not None:
        m = OP.matrix_of_mult(g, t) @ m
    r = OP.exact_rank(m)
    data = {"rank": r, "size": len(t), "window": t.describe()}
    if m.leaked:
        data["leaked"] = [group.format_element(x) for x in m.leaked]
    if args.matrix:
        data["matrix"] = _matrix_json(m)["rows"]
    text = f"rank {r} on {len(t)} cells at level {t.level}"
    if m.leaked:
        text += f" (compressed; {len(m.leaked)} cells leaked)"
    _emit(args, text, data)
    return 0


def cmd_commute(args, group):
    if not args.mult:
        raise UsageError("commute needs --mult for the multiplication symbol")
    f, g, t = _operator_inputs(args, group)
    a = OP.matrix_of_conv(f, t, exact=not args.compress)
    b = OP.matrix_of_mult(g, t)
    w = OP.commutator_witness(a, b)
    verdict = "yes" if w is None else "no"
    data = {"commute": w is None, "verdict": verdict, "size": len(t), "window": t.describe()}
    text = f"commute: {verdict}"
    if w is not None:
        i, j, v = w
        fmt = group.format_element
        data["witness"] = {"row": fmt(t.reps[i]), "col": fmt(t.reps[j]), "value": str(v)}
        text += f" (entry [{fmt(t.reps[i])}, {fmt(t.reps[j])}] = {v})"
    _emit(args, text, data)
    return _verdict_code(args.expect, verdict)


def cmd_grouplike(args, group):
    f = load_function(args.fn, group)
    v = S.is_group_like(f)
    verdict = "yes" if v else "no"
    fmt = group.format_element
    data = {"verdict": verdict}
    if v:
        data["level"] = v.level
        data["cells"] = [fmt(c) for c in v.cells]
        data["subgroup_level"] = v.subgroup_level
        sub = "a subgroup outside the filtration" if v.subgroup_level is None else f"H_{v.subgroup_level}"
        n = len(v.cells)
        text = f"yes: support is {sub} ({n} cell{'' if n == 1 else 's'} at level {v.level})"
    else:
        data["reason"] = v.reason
        text = f"no: {v.reason}"
        if v.witness is not None:
            x, y = v.witness
            if y is None:
                data["witness"] = {"inverse_missing": fmt(x)}
                text += f" (inverse of {fmt(x)} missing)"
            else:
                data["witness"] = {"x": fmt(x), "y": fmt(y)}
                text += f" ({fmt(x)} * {fmt(y)} leaves the support)"
    _emit(args, text, data)
    return _verdict_code(args.expect or "yes", verdict)


def cmd_expect(args, group):
    f = load_function(args.fn, group)
    a = C.ConvElement(f)
    e = C.cond_expectation(a, args.level)
    tau = C.vector_state_tau(a, args.level)
    data = {"level": args.level, "expectation": e.to_json(), "tau": str(tau)}
    text = f"E = {format_dual(e)}\ntau = {tau}"
    _emit(args, text, data)
    return 0


def cmd_verify(args, group):
    if args.seed is None:
        if args.json:
            raise UsageError("--json needs an explicit --seed so the report is reproducible")
        args.seed = random.SystemRandom().randrange(2**63)
        print(f"seed {args.seed}", file=sys.stderr)
    suites = _split_list(args.suite) or list(H.SUITES)
    groups = _split_list(args.group) or list(H.DEFAULT_GROUPS)
    cfg = H.GenConfig(seed=args.seed, trials=args.trials, groups=groups)
    worst = 0
    lines = []
    for name in suites:
        for g in groups:
            rep = H.run_suite(name, cfg, g)
            if rep.status == "fail":
                worst = 1
            if args.json:
                lines.append(json.dumps(rep.to_json(timing=not args.no_timing)))
            else:
                line = f"{rep.suite:15s} {rep.group:12s} {rep.status}"
                if rep.reason:
                    line += f" ({rep.reason})"
                if not args.no_timing:
                    line += f"  {rep.wall_time:.2f}s"
                lines.append(line)
                for fail in rep.failures:
                    lines.append("    " + json.dumps(fail))
    out = "\n".join(lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return worst


def _split_list(values):
    """Flatten repeated and comma-separated options; commas inside prod(...) stay."""
    out = []
    for v in values or []:
        out.extend(x.strip() for x in split_top_level(v) if x.strip())
    return out


def _verdict_code(expect, verdict):
    if expect is None:
        return 0
    return 0 if verdict == expect else 1


# --------------------------------------------------------------------------
# parser


def build_parser():
    p = _ArgumentParser(prog="hopfgroup", description="Exact computations with Bruhat-Schwartz functions.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_ArgumentParser)

    def common(sp, verify=False):
        if verify:
            sp.add_argument("--group", action="append", help="group descriptor (repeatable; default the standard list)")
        else:
            sp.add_argument("--group", required=True, help="group descriptor, e.g. qp:2, shift:2, finite:S3")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--out", help="write output to this file instead of stdout")

    sp = sub.add_parser("eval", help="canonical form and point values of a function")
    common(sp)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--at", action="append", help="element to evaluate at (repeatable)")

    sp = sub.add_parser("coproduct", help="Delta(f)(1 (x) g) or (f (x) 1)Delta(g)")
    common(sp)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--fn2", required=True)
    sp.add_argument("--side", choices=("right", "left"), default="right")
    sp.add_argument("--merge", action="store_true", help="merge terms sharing a leg")

    sp = sub.add_parser("convolve", help="convolution product f * g")
    common(sp)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--fn2", required=True)

    sp = sub.add_parser("fourier", help="exact Fourier transform (abelian groups)")
    common(sp)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--inverse", action="store_true")
    sp.add_argument("--target", help="dual model to land on (e.g. zp:2 when inverting)")

    for verb, text in (("rank", "exact rank of L_f (or M(g) L_f) on a window"),
                       ("commute", "does L_f commute with M(g) on a window")):
        sp = sub.add_parser(verb, help=text)
        common(sp)
        sp.add_argument("--fn", required=True, help="convolution symbol f")
        sp.add_argument("--mult", help="multiplication symbol g")
        sp.add_argument("--window", help="e.g. 'p^-2..level 2'; default: smallest ball holding the supports")
        sp.add_argument("--compress", action="store_true", help="drop leaked cells instead of failing")
        if verb == "rank":
            sp.add_argument("--matrix", action="store_true", help="include the matrix in JSON output")
        else:
            sp.add_argument("--expect", choices=("yes", "no"))

    sp = sub.add_parser("grouplike", help="is f the indicator of a compact open subgroup")
    common(sp)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--expect", choices=("yes", "no"), help="verdict to assert (default yes)")

    sp = sub.add_parser("expect", help="conditional expectation onto H_n and the state tau")
    common(sp)
    sp.add_argument("--fn", required=True)
    sp.add_argument("--level", type=int, default=0)

    sp = sub.add_parser("verify", help="run invariant suites")
    common(sp, verify=True)
    sp.add_argument("--suite", action="append", help=f"suite id, comma list or repeat (default all: {', '.join(H.SUITES)})")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--no-timing", action="store_true", help="omit wall times (byte-stable output)")
    return p


_VERBS = {
    "eval": cmd_eval,
    "coproduct": cmd_coproduct,
    "convolve": cmd_convolve,
    "fourier": cmd_fourier,
    "rank": cmd_rank,
    "commute": cmd_commute,
    "grouplike": cmd_grouplike,
    "expect": cmd_expect,
    "verify": cmd_verify,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        group = None if args.verb == "verify" else parse_group(args.group)
        return _VERBS[args.verb](args, group)
    except _Exit as exc:
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code
    except LeakageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DSLError as exc:
        print(f"parse error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except (UsageError, UnsupportedOperation, ConductorError, HopfError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
