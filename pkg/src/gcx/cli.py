"""``gcx``: query grammar-compressed XML from the command line.

Exit status is 0 on success, 1 on usage, parse or validation errors and 2
when an expansion limit or the DFA state cap is exceeded.
"""

import argparse
import io
import json
import sys

from . import automaton as dst
from . import engine
from . import grammar as gm
from . import slp as sl
from .errors import ExpansionLimitError, GcxError, LimitExceeded
from .oracle import naive_eval, random_grammar
from .tree import fcns_encode, parse_xml
from .xpath import DEFAULT_MAX_STATES, parse_xpath, query_to_dst


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _is_xml(path, text):
    return path.endswith(".xml") or text.lstrip().startswith("<")


def load_grammar(path, strict=False):
    """Grammar from an ``.slt`` file, or the DAG grammar of an XML document."""
    text = _read(path)
    if _is_xml(path, text):
        return gm.build_dag(fcns_encode(parse_xml(text, strict=strict)))
    return gm.parse_grammar(text)


def load_automaton(args):
    if args.automaton:
        if args.query:
            raise GcxError("give either a query or --automaton, not both")
        return dst.parse_automaton(_read(args.automaton))
    if not args.query:
        raise GcxError("a query (or --automaton FILE) is required")
    return query_to_dst(args.query, max_states=args.dfa_cap)


class _Output:
    def __init__(self, path):
        self.path = path

    def __enter__(self):
        self.stream = sys.stdout if self.path in (None, "-") else open(self.path, "w", encoding="utf-8")
        return self.stream

    def __exit__(self, *exc):
        if self.stream is not sys.stdout:
            self.stream.close()
        else:
            self.stream.flush()


def _emit(args, result, text):
    with _Output(args.output) as out:
        if args.json:
            json.dump({"command": args.command, "result": result}, out)
            out.write("\n")
        else:
            out.write(text)


def cmd_compress(args):
    g = load_grammar(args.input, args.strict)
    if args.nnf:
        g = gm.node_normal_form(g)
    _emit(args, gm.write_grammar(g), gm.write_grammar(g))


def cmd_decompress(args):
    g = load_grammar(args.input, args.strict)
    total = gm.labeled_lengths(g)[g.start]
    if total > args.limit:
        raise ExpansionLimitError(f"document has {total} nodes, limit is {args.limit}")
    if args.json:
        text = "".join(t.text(args.mark) for t in engine.iter_tokens(g))
        _emit(args, text, text)
        return
    with _Output(args.output) as out:
        for token in engine.iter_tokens(g):
            out.write(token.text(args.mark))
        out.write("\n")


def cmd_count(args):
    g = load_grammar(args.input, args.strict)
    n = engine.count(g, load_automaton(args))
    _emit(args, n, f"{n}\n")


def _lines(ids):
    return "".join(f"{u}\n" for u in ids)


def cmd_materialize(args):
    g = load_grammar(args.input, args.strict)
    ids = engine.materialize(g, load_automaton(args))
    _emit(args, ids, _lines(ids))


def cmd_serialize(args):
    g = load_grammar(args.input, args.strict)
    a = load_automaton(args)
    if args.json:
        buf = io.StringIO()
        engine.serialize(g, a, buf, args.mark)
        _emit(args, buf.getvalue(), buf.getvalue())
        return
    with _Output(args.output) as out:
        engine.serialize(g, a, out, args.mark)
        out.write("\n")


def cmd_slp(args):
    g = load_grammar(args.input, args.strict)
    ids = engine.materialize(g, load_automaton(args))
    if args.dag:
        if g.rank != 0:
            raise GcxError("--dag needs a rank-0 (DAG) grammar")
        p = engine.dag_subtrees_slp(g, ids)
    else:
        p = engine.subtrees_slp(g, ids)
    text = sl.write_slp(p)
    _emit(args, text, text)


def cmd_oracle(args):
    g = load_grammar(args.input, args.strict)
    tree = gm.expand(g, args.limit)
    if args.automaton:
        ids = dst.dst_run(load_automaton(args), tree)
    else:
        if not args.query:
            raise GcxError("a query (or --automaton FILE) is required")
        ids = naive_eval(parse_xpath(args.query), tree)
    _emit(args, ids, _lines(ids))


def _kind(path, text):
    if _is_xml(path, text):
        return "xml"
    if path.endswith(".slp"):
        return "slp"
    if path.endswith(".dst"):
        return "dst"
    return "slt"


def cmd_validate(args):
    text = _read(args.input)
    kind = _kind(args.input, text)
    if kind == "xml":
        parse_xml(text, strict=args.strict)
    elif kind == "slp":
        sl.parse_slp(text)
    elif kind == "dst":
        dst.parse_automaton(text)
    else:
        gm.parse_grammar(text)
    _emit(args, {"kind": kind, "valid": True}, "ok\n")


def cmd_stats(args):
    text = _read(args.input)
    kind = _kind(args.input, text)
    if kind == "slp":
        p = sl.parse_slp(text)
        length = sl.lengths(p)[p.start]
        info = {"kind": kind, "rules": len(p.rules), "size": sl.size(p), "length": length}
    elif kind == "dst":
        a = dst.parse_automaton(text)
        info = {"kind": kind, "states": len(a.states), "rules": len(a.rules),
                "selecting": a.selects_anything()}
    else:
        g = load_grammar(args.input, args.strict)
        nodes = gm.labeled_lengths(g)[g.start]
        tree_edges = 2 * nodes
        info = {"kind": kind, "rules": len(g.rules), "size": g.size, "rank": g.rank,
                "nodes": nodes, "tree_size": tree_edges,
                "ratio": tree_edges / g.size if g.size else None}
    text = "".join(f"{k}: {v}\n" for k, v in info.items())
    _emit(args, info, text)


def cmd_random(args):
    g = random_grammar(args.seed, max_rank=args.max_rank)
    _emit(args, gm.write_grammar(g), gm.write_grammar(g))


def build_parser():
    parser = _Parser(prog="gcx", description="Query grammar-compressed XML without decompressing it.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help, query=False):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("input", help="grammar (.slt) or XML document; '-' for stdin")
        if query:
            p.add_argument("query", nargs="?", help="XPath query, e.g. //book/title")
            p.add_argument("--automaton", metavar="FILE", help="use this DST automaton instead of a query")
            p.add_argument("--dfa-cap", type=int, default=DEFAULT_MAX_STATES,
                           help="abort when a query automaton needs more states")
        p.add_argument("-o", "--output", help="write here instead of stdout")
        p.add_argument("--strict", action="store_true",
                       help="reject XML with text, attributes, comments or PIs")
        p.add_argument("--json", action="store_true", help="wrap the result in a JSON object")
        return p

    p = command("compress", cmd_compress, "DAG-compress an XML document")
    p.add_argument("--nnf", action="store_true", help="write the node normal form")
    p = command("decompress", cmd_decompress, "write the XML document a grammar generates")
    p.add_argument("--limit", type=int, default=gm.DEFAULT_EXPANSION_LIMIT)
    p.add_argument("--mark", default="^", help="prefix for marked labels")
    command("count", cmd_count, "number of selected nodes", query=True)
    command("materialize", cmd_materialize, "pre-order numbers of selected nodes", query=True)
    p = command("serialize", cmd_serialize, "XML of every selected subtree", query=True)
    p.add_argument("--mark", default="^", help="prefix for marked labels")
    p = command("slp", cmd_slp, "SLP of the concatenated selected subtrees", query=True)
    p.add_argument("--dag", action="store_true", help="use the O(|G|+|r|) construction for DAG grammars")
    p = command("oracle", cmd_oracle, "brute-force evaluation on the expanded document", query=True)
    p.add_argument("--limit", type=int, default=gm.DEFAULT_EXPANSION_LIMIT)
    command("validate", cmd_validate, "check a grammar, SLP, automaton or XML file")
    command("stats", cmd_stats, "sizes and compression ratio")

    p = sub.add_parser("random", help="write a seeded random grammar")
    p.set_defaults(func=cmd_random)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rank", type=int, default=2)
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except LimitExceeded as exc:
        print(f"gcx: {exc}", file=sys.stderr)
        return 2
    except (GcxError, OSError, ValueError) as exc:
        print(f"gcx: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
