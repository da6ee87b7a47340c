"""Command line interface: ``mdag <command> [options] [FILE]``.

Graphs are read from FILE or standard input in the text format of
:mod:`mdag.textformat`.  Errors go to standard error as
``error[<category>]: <message>`` with a category-specific exit status.
"""

import argparse
import json
import os
import sys

from . import causal, equivalence, markov, projection, reduction, sem
from .errors import MDagError
from .textformat import mdag_to_json, parse_document, serialize, to_dot

EXIT_CODES = {
    "parse": 2,
    "input": 3,
    "cycle": 3,
    "degenerate": 3,
    "resource": 4,
    "consistency": 5,
    "error": 1,
}

CAP_ENV = "MDAG_ENUM_CAP"
CONFIG_ENV = "MDAG_CONFIG"


def _vertex_set(text):
    """``a,b,c``; ``-`` or ``{}`` or an empty string is the empty set."""
    text = text.strip()
    if text in ("", "-", "{}"):
        return frozenset()
    text = text.strip("{}")
    return frozenset(p.strip() for p in text.replace(" ", ",").split(",") if p.strip())


def _fmt(s):
    return "{" + ",".join(sorted(s)) + "}"


def _load(args):
    if args.file in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    return parse_document(text)


def _emit(args, text, obj):
    if args.json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        sys.stdout.write(text if text.endswith("\n") or not text else text + "\n")


def _config(path):
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    return data


def _caps(args, config):
    """Flag, then environment, then config file, then the built-in default."""
    if args.cap is not None:
        cap = args.cap
    elif os.environ.get(CAP_ENV):
        cap = int(os.environ[CAP_ENV])
    else:
        cap = config.get("enumeration_cap")
    if cap is None:
        return equivalence.LABELLED_CAP, equivalence.UNLABELLED_CAP
    return int(cap), int(cap)


# -- commands -----------------------------------------------------------------


def cmd_project(args):
    doc = _load(args)
    keep = _vertex_set(args.keep) if args.keep is not None else doc.observed
    g = projection.latent_project(doc.graph, keep)
    _emit(args, serialize(g), mdag_to_json(g))


def cmd_canonical(args):
    doc = _load(args)
    can = projection.canonical_dag(doc.graph)
    text = serialize(can.dag, can.latents)
    obj = mdag_to_json(can.dag)
    obj["latent"] = sorted(can.latents)
    obj["facet_labels"] = {k: sorted(v) for k, v in sorted(can.facet_labels.items())}
    _emit(args, text, obj)


def cmd_reduce(args):
    doc = _load(args)
    if not doc.graph.is_dag():
        raise MDagError("reduce needs a DAG (a graph without faces)")
    observed = _vertex_set(args.observed) if args.observed is not None else doc.observed
    d = reduction.reduce_latents(doc.graph.dag, observed)
    latent = frozenset(d.vertices) - observed
    obj = mdag_to_json(d)
    obj["latent"] = sorted(latent)
    _emit(args, serialize(d, latent), obj)


def cmd_districts(args):
    doc = _load(args)
    blocks = markov.districts(doc.graph).blocks
    _emit(args, "\n".join(_fmt(b) for b in blocks), [sorted(b) for b in blocks])


def cmd_dsep(args):
    doc = _load(args)
    a, b, c = _vertex_set(args.a), _vertex_set(args.b), _vertex_set(args.c)
    res = markov.d_separated(doc.graph, a, b, c)
    _emit(args, "true" if res else "false", {"a": sorted(a), "b": sorted(b), "c": sorted(c), "separated": res})


def cmd_ci(args):
    doc = _load(args)
    g = doc.graph
    if doc.latent:
        g = projection.latent_project(g, doc.observed)
    stmts = markov.implied_ci(g)
    _emit(
        args,
        "\n".join(str(s) for s in stmts),
        {"schema": "mdag.ci-list/1", "statements": [s.to_dict() for s in stmts]},
    )


def _tree_lines(node, depth, seen, out):
    label = f"{node.kind} random={_fmt(node.random_vertices)} fixed={_fmt(node.conditioning_vertices)}"
    if id(node) in seen:
        out.append("  " * depth + label + " (shared)")
        return
    seen.add(id(node))
    out.append("  " * depth + label)
    for child in node.children:
        _tree_lines(child, depth + 1, seen, out)


def _tree_json(node, ids):
    if id(node) in ids:
        return {"ref": ids[id(node)]}
    ids[id(node)] = len(ids)
    return {
        "id": ids[id(node)],
        "kind": node.kind,
        "random": sorted(node.random_vertices),
        "fixed": sorted(node.conditioning_vertices),
        "graph": mdag_to_json(node.graph),
        "kernel": markov.program_to_json(node.kernel),
        "children": [_tree_json(c, ids) for c in node.children],
    }


def cmd_nested(args):
    doc = _load(args)
    root = markov.nested_factorize(doc.graph)
    cons = markov.verma_constraints(doc.graph)
    lines = ["factorization: " + markov.format_factorization(root)]
    _tree_lines(root, 0, set(), lines)
    lines.append("constraints:")
    lines.extend("  " + c.describe() for c in cons)
    _emit(
        args,
        "\n".join(lines),
        {
            "factorization": markov.format_factorization(root),
            "tree": _tree_json(root, {}),
            "constraints": [c.to_dict() for c in cons],
        },
    )


def cmd_verma_check(args):
    doc = _load(args)
    cons = markov.verma_constraints(doc.graph)
    t = sem.canonical_sem_joint(doc.graph, args.seed, observed_card=args.cards, latent_card=args.latent_card)
    gaps = [sem.constraint_gap(t, c) for c in cons]
    lines = [f"{c.describe()}: gap {g:.3e}" for c, g in zip(cons, gaps)] or ["no constraints"]
    _emit(
        args,
        "\n".join(lines),
        {"seed": args.seed, "constraints": [dict(c.to_dict(), gap=g) for c, g in zip(cons, gaps)]},
    )


def cmd_mutilate(args):
    doc = _load(args)
    g = causal.mutilate_mdag(doc.graph, _vertex_set(args.a))
    _emit(args, serialize(g, doc.latent), mdag_to_json(g))


def cmd_enumerate(args):
    labelled, unlabelled = _caps(args, _config(args.config))
    gs = equivalence.enumerate_mdags(args.n, args.iso, labelled, unlabelled, threads=args.threads)
    text = "\n".join(serialize(g).replace("\n", "; ").rstrip("; ") for g in gs)
    text += f"\ncount: {len(gs)}"
    _emit(args, text, {"n": args.n, "up_to_iso": args.iso, "count": len(gs), "graphs": [mdag_to_json(g) for g in gs]})


def cmd_classify(args):
    labelled, unlabelled = _caps(args, _config(args.config))
    iso = not args.labelled
    gs = equivalence.enumerate_mdags(args.n, iso, labelled, unlabelled, threads=args.threads)
    report = equivalence.equivalence_classes(gs, up_to_iso=iso, witness_search=args.witness)
    lines = []
    for i, cls in enumerate(report.classes):
        lines.append(f"class {i}: {len(cls)} graph(s), e.g. {serialize(cls[0]).strip().replace(chr(10), '; ')}")
    lines.append(f"classes: {len(report.classes)}")
    lines.append(f"undecided pairs: {len(report.undecided)}")
    _emit(args, "\n".join(lines), report.to_dict())


def cmd_dot(args):
    doc = _load(args)
    text = to_dot(doc.graph)
    _emit(args, text, {"dot": text})


def build_parser():
    def global_options(parser, default):
        # sub-parsers use SUPPRESS so they do not overwrite values given
        # before the command name
        kw = {} if default else {"default": argparse.SUPPRESS}
        parser.add_argument("--json", action="store_true", help="machine-readable output", **kw)
        parser.add_argument("--threads", type=int, help="worker threads for enumerate/classify",
                            **(kw or {"default": 1}))
        parser.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})", **kw)
        parser.add_argument("--cap", type=int, help=f"enumeration size cap (overrides ${CAP_ENV})", **kw)

    p = argparse.ArgumentParser(prog="mdag", description="Marginalized DAG toolkit.")
    global_options(p, True)
    common = argparse.ArgumentParser(add_help=False)
    global_options(common, False)
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, func, helptext, file=True):
        s = sub.add_parser(name, help=helptext, parents=[common])
        if file:
            s.add_argument("file", nargs="?", help="input graph (default: stdin)")
        s.set_defaults(func=func)
        return s

    cmd("project", cmd_project, "latent projection").add_argument(
        "--keep", help="vertices to keep (default: the non-latent ones)"
    )
    cmd("canonical", cmd_canonical, "canonical DAG")
    cmd("reduce", cmd_reduce, "reduce a DAG with latents").add_argument("--observed", help="observed vertices")
    cmd("districts", cmd_districts, "bidirected-connected components")
    s = cmd("dsep", cmd_dsep, "d-separation query", file=False)
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("c", nargs="?", default="")
    s.add_argument("file", nargs="?")
    cmd("ci", cmd_ci, "implied conditional independences")
    cmd("nested", cmd_nested, "nested factorization and constraints")
    s = cmd("verma-check", cmd_verma_check, "evaluate constraints on a random model")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cards", type=int, default=2, help="observed cardinality")
    s.add_argument("--latent-card", type=int, default=3)
    s = cmd("mutilate", cmd_mutilate, "perfect intervention", file=False)
    s.add_argument("a")
    s.add_argument("file", nargs="?")
    s = cmd("enumerate", cmd_enumerate, "enumerate mDAGs", file=False)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--iso", action="store_true", help="up to vertex permutation")
    s = cmd("classify", cmd_classify, "classify mDAGs into model classes", file=False)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--labelled", action="store_true", help="do not identify isomorphic graphs")
    s.add_argument("--witness", action=argparse.BooleanOptionalAction, default=None,
                   help="randomized instrumental-inequality search (default: on for n <= 3)")
    cmd("dot", cmd_dot, "Graphviz export")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except MDagError as exc:
        _fail(args, exc.category, str(exc))
        return EXIT_CODES.get(exc.category, 1)
    except (OSError, ValueError) as exc:
        _fail(args, "input", str(exc))
        return EXIT_CODES["input"]
    return 0


def _fail(args, category, message):
    if args.json:
        print(json.dumps({"error": category, "message": message}), file=sys.stderr)
    else:
        print(f"error[{category}]: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
