"""Command-line front end.

Exit codes: 0 success, 1 parse or usage error, 2 evaluation did not
terminate within the prefix budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import automaton as auto
from . import expression as ex
from . import kleene, munn
from .monoid import DEFAULT_BUDGET, FreeMonoid, NonTerminating, monoid_from_spec
from .semiring import COUNTING, LiteralError, semiring_from_spec


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_expr(text: str) -> str:
    return sys.stdin.read() if text == "-" else text


def infer_monoid(*texts: str):
    """Free monoid (or free inverse monoid if a ``~`` appears) over the atom tokens used."""
    gens: list[str] = []
    inverse = False
    for text in texts:
        stripped = []
        depth = 0
        for c in text:
            depth += (c == "[") - (c == "]")
            stripped.append(c if depth == 0 and c != "]" else " ")
        for m in ex._ATOM.finditer("".join(stripped)):
            tok = m.group(0)
            inverse |= tok.startswith("~")
            name = tok.lstrip("~")
            if name != "eps" and name not in gens:
                gens.append(name)
    if inverse:
        return monoid_from_spec("fim:" + ",".join(gens))
    return FreeMonoid(gens)


def _automaton_or_expr(args, default_semiring=None):
    """Return (kind, object, semiring, monoid)."""
    if args.automaton:
        A = auto.loads(Path(args.automaton).read_text(encoding="utf-8"))
        return "automaton", A, A.semiring, A.monoid
    if args.expr is None:
        raise UsageError("one of --expr or --automaton is required")
    text = _read_expr(args.expr)
    spec = args.semiring or default_semiring
    if spec is None:
        raise UsageError("--semiring is required with --expr")
    K = semiring_from_spec(spec)
    M = monoid_from_spec(args.monoid) if args.monoid else infer_monoid(text, getattr(args, "at", "") or "")
    return "expr", ex.parse(text, K, M), K, M


def cmd_eval(args) -> int:
    kind, obj, K, M = _automaton_or_expr(args)
    m = M.parse_literal(args.at)
    if kind == "automaton":
        value = auto.evaluate(obj, m, budget=args.budget)
    else:
        value = ex.evaluate(obj, m, K, M, budget=args.budget)
    print(K.render(value))
    return 0


def cmd_ambiguity(args) -> int:
    kind, obj, K, M = _automaton_or_expr(args, default_semiring="counting")
    m = M.parse_literal(args.at)
    if kind == "automaton":
        value = auto.ambiguity(obj, m, budget=args.budget)
    else:
        value = ex.ambiguity(obj, m, M, budget=args.budget)
    print(COUNTING.render(value))
    return 0


def cmd_compile(args) -> int:
    kind, W, K, M = _automaton_or_expr(args)
    if kind != "expr":
        raise UsageError("compile takes --expr")
    A = kleene.to_automaton(W, K, M)
    out = args.out
    text = auto.to_dot(A) if out and out.endswith(".dot") else auto.dumps(A)
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_decompile(args) -> int:
    A = auto.loads(Path(args.automaton).read_text(encoding="utf-8"))
    print(ex.render(kleene.to_expression(A), A.semiring, A.monoid))
    return 0


def cmd_munn(args) -> int:
    if args.tree:
        tree = munn.parse_tree(args.tree)
        arity = args.arity if args.arity is not None else max(1, munn.tree_arity(tree))
        x = munn.encode_tree(tree, arity)
    elif args.twoway is not None:
        letters = args.twoway.split() if " " in args.twoway.strip() else list(args.twoway.strip())
        x = munn.encode_word(letters)
    elif args.word is not None:
        x = munn.from_word(munn.parse_word(args.word))
    else:
        raise UsageError("one of --word, --twoway or --tree is required")
    sys.stdout.write(munn.to_dot(x))
    return 0


def load_fixtures(path: str | None = None) -> list[dict]:
    if path:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    ref = resources.files("prerational") / "fixtures" / "examples.json"
    return json.loads(ref.read_text(encoding="utf-8"))


def fixture_target(fx: dict, M):
    if "at_twoway" in fx:
        return munn.encode_word(list(fx["at_twoway"]))
    if "at_tree" in fx:
        return munn.encode_tree(munn.parse_tree(fx["at_tree"]), fx["arity"])
    return M.parse_literal(fx["at"])


def run_fixture(fx: dict) -> str:
    K = semiring_from_spec(fx["semiring"])
    M = monoid_from_spec(fx["monoid"])
    W = ex.parse(fx["expr"], K, M)
    m = fixture_target(fx, M)
    if fx.get("kind", "eval") == "ambiguity":
        return COUNTING.render(ex.ambiguity(W, m, M))
    return K.render(ex.evaluate(W, m, K, M))


def cmd_fixtures(args) -> int:
    failures = 0
    for fx in load_fixtures(args.file):
        got = run_fixture(fx)
        ok = got == fx["expected"]
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'}\t{fx['name']}\texpected={fx['expected']}\tgot={got}")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="prerational", description="Weighted automata and expressions over pre-rational monoids.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def source_args(sp, need_at=True):
        sp.add_argument("--semiring", help="boolean|counting|tropical|qplus|lang:<alphabet>|prod:<s1>,<s2>")
        sp.add_argument("--monoid", help="free:<gens>|nat|natinf|fim:<gens>|twoway:<letters>|twa:<arity>:<labels>")
        sp.add_argument("--expr", help="weighted expression, or - for stdin")
        sp.add_argument("--automaton", help="automaton JSON file")
        if need_at:
            sp.add_argument("--at", required=True, help="monoid literal to evaluate at")
            sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="preimage DFA state budget")

    sp = sub.add_parser("eval", help="evaluate a series at a monoid element")
    source_args(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("ambiguity", help="count decompositions / runs at a monoid element")
    source_args(sp)
    sp.set_defaults(func=cmd_ambiguity)

    sp = sub.add_parser("compile", help="expression to automaton (JSON, or DOT if --out ends in .dot)")
    source_args(sp, need_at=False)
    sp.add_argument("--out", help="output file; stdout if omitted")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("decompile", help="automaton JSON to expression")
    sp.add_argument("--automaton", required=True)
    sp.set_defaults(func=cmd_decompile)

    sp = sub.add_parser("munn", help="print the Munn tree of a word or encoded input as DOT")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--word", help="signed word such as 'l ~l r'")
    g.add_argument("--twoway", help="word encoded between end markers")
    g.add_argument("--tree", help="ranked tree such as 'a(b,c(d,d))'")
    sp.add_argument("--arity", type=int, help="maximal arity for --tree")
    sp.set_defaults(func=cmd_munn)

    sp = sub.add_parser("fixtures", help="run the shipped worked examples")
    sp.add_argument("--file", help="alternative fixture JSON file")
    sp.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NonTerminating as exc:
        print(f"error: evaluation does not terminate: {exc}", file=sys.stderr)
        return 2
    except (UsageError, LiteralError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
