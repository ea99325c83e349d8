"""Run the worked examples on the shipped fixture and print every intermediate.

    python scripts/worked_examples.py            # all examples
    python scripts/worked_examples.py --only rollup
"""

import argparse

from dnml.cli import render_table
from dnml.expr import Source, evaluate_steps, node_label
from dnml.rewrite import rewrite
from dnml.storage import environment_for, load_fixture
from dnml.syntax import parse_query

EXAMPLES = {
    "select": 'select(exists(hasMeasure("stroke deaths")), db)',
    "project": 'project(hasChar("black women"), db)',
    "groupagg": 'groupagg([hasChar("black women"): unionMerge, hasChar("white women"): unionMerge], db)',
    "across": 'groupaggacross([hasChar("black women"): unionMerge, hasChar("white women"): unionMerge], db)',
    "compare": 'compare(["women", "stroke"], db)',
    "rollup": 'rollup("black women", db)',
    "drilldown": 'drilldown("women", db)',
    "join": 'join(["black women"], n1, n2)',
}


def show(name, text, env, steps):
    print(f"== {name}: {text}")
    expr = rewrite(parse_query(text))
    if not steps:
        print(render_table(evaluate_steps(expr, env)[-1][1]))
        print()
        return
    k = 0
    for node, instance in evaluate_steps(expr, env):
        if isinstance(node, Source):
            continue
        k += 1
        print(f"-- I{k} = {node_label(node)}")
        print(render_table(instance))
    print()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", choices=sorted(EXAMPLES))
    ap.add_argument("--final", action="store_true", help="print only final results")
    args = ap.parse_args()
    env = environment_for(*load_fixture())
    for name, text in EXAMPLES.items():
        if args.only in (None, name):
            show(name, text, env, steps=not args.final)


if __name__ == "__main__":
    main()
