"""Command-line workbench.

Every subcommand prints one JSON report (sorted keys) or, with
``--format text``, a short human summary.  Exit codes: 0 pass, 1 verdict
no or fail, 2 unknown or budget exhausted, 3 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path as FsPath

from . import fixtures
from .algebra import (compute_basis, natural_map_check, present_basis_algebra, quotient_idempotent,
                      truncate_idempotent)
from .ar import knit
from .classes import (CLASS_NAMES, THEOREM_ALIASES, THEOREMS, Analysis, Budgets, classify,
                      left_part, left_support, right_part, verify_theorem)
from .corpus import CorpusSpec, generate_corpus
from .errors import BudgetExceeded, FieldSensitivity
from .homology import global_dimension, minimal_projective_resolution, projective_dimension
from .modules import injective, projective, simple
from .pi1 import (abelianization, fundamental_groups, simply_connected_given_presentation,
                  strongly_simply_connected_given_presentation)
from .presentation import AlgebraPresentation, ParseError, opposite, parse, serialize
from .quiver import is_full_convex

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3

BUDGET_FLAGS = {
    "nilpotency": "largest path length tried when closing the ideal",
    "dimension": "largest algebra dimension",
    "nodes": "largest number of AR-quiver nodes",
    "module-dim": "largest indecomposable dimension while knitting",
    "resolution": "longest projective resolution",
    "slice": "complete-slice search steps",
    "subsets": "largest number of convex subsets enumerated",
    "tietze": "letters rewritten while simplifying a group presentation",
}
# corpus instances are many and small; knit them with tighter caps
CORPUS_BUDGETS = {"nodes": 60, "module_dim": 16}
CORPUS_THEOREMS = ("convex-iso", "convex-homology", "class-descent",
                   "left-support-quasi-tilted", "left-support-tilted")


class InputError(Exception):
    pass


class Context:
    def __init__(self, args):
        self.args = args
        self.notes: list[str] = []
        self.caveats: list[str] = []
        self.source = ""
        self.text_lines: list[str] = []

    def budgets(self, defaults: dict | None = None) -> Budgets:
        b = Budgets(**(defaults or {}))
        for flag in BUDGET_FLAGS:
            attr = flag.replace("-", "_")
            value = getattr(self.args, "budget_" + attr, None)
            if value is not None:
                b = replace(b, **{attr: value})
        return b

    def say(self, line: str) -> None:
        self.text_lines.append(line)


# --------------------------------------------------------------------------
# input

def _read_source(arg: str | None) -> tuple[str, str]:
    """Return (quiv text, description of where it came from)."""
    if arg is None or arg == "-":
        raw = sys.stdin.read()
        where = "stdin"
    else:
        path = FsPath(arg)
        if path.exists():
            raw = path.read_text(encoding="utf-8")
            where = str(arg)
        elif path.stem in fixtures.NAMES and path.suffix in ("", ".quiv"):
            raw = fixtures.text(path.stem)
            where = f"builtin:{path.stem}"
        else:
            raise InputError(f"no such file: {arg}")
    if raw.lstrip().startswith("{"):
        try:
            doc = json.loads(raw)
            raw = doc["results"]["presentation"]
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"JSON input carries no presentation: {exc}") from exc
    return raw, where


def _load(ctx: Context) -> AlgebraPresentation:
    raw, where = _read_source(ctx.args.input)
    ctx.source = raw
    ctx.where = where
    return parse(raw)


def _vertices(p: AlgebraPresentation, spec: str | None) -> tuple[str, ...]:
    if not spec:
        raise InputError("a vertex list is required (e.g. --keep 1,2,3)")
    items = [x for x in spec.replace(" ", ",").split(",") if x]
    unknown = [x for x in items if x not in p.quiver.vertices]
    if unknown:
        raise InputError(f"unknown vertices: {', '.join(unknown)}")
    chosen = set(items)
    return tuple(v for v in p.quiver.vertices if v in chosen)


def _keep(ctx: Context, p: AlgebraPresentation) -> tuple[str, ...]:
    return _vertices(p, getattr(ctx.args, "keep", None) or getattr(ctx.args, "vertices", None))


def _verdict_exit(v: str) -> int:
    return {"yes": EXIT_OK, "pass": EXIT_OK, "skipped": EXIT_OK, "trivial": EXIT_OK,
            "no": EXIT_NO, "fail": EXIT_NO, "nontrivial": EXIT_NO}.get(v, EXIT_UNKNOWN)


# --------------------------------------------------------------------------
# subcommands: each returns (results, exit code)

def cmd_info(ctx: Context):
    p = _load(ctx)
    b = ctx.budgets()
    alg = compute_basis(p, b.nilpotency, b.dimension)
    g = global_dimension(alg, b.resolution)
    res = {"name": p.name, "field": p.field.name, "tags": list(p.tags),
           "vertices": list(p.quiver.vertices), "arrows": len(p.quiver.arrows),
           "relations": len(p.relations), "dimension": alg.dim,
           "nilpotency_index": alg.nilpotency_index, "cartan": alg.cartan,
           "gldim": g.as_json(), "gldim_note": g.note}
    ctx.say(f"{p.name}: dim {alg.dim}, gldim {g}")
    ctx.say("cartan: " + " | ".join(" ".join(map(str, row)) for row in alg.cartan))
    if not g.is_known:
        ctx.notes.append(g.note)
    return res, EXIT_OK if g.is_known else EXIT_UNKNOWN


def cmd_convex(ctx: Context):
    p = _load(ctx)
    s = _keep(ctx, p)
    v = is_full_convex(p.quiver, s)
    witness = str(v.witness) if v.witness is not None else None
    ctx.say(f"convex {','.join(s)}: {bool(v)}" + (f" (witness {witness})" if witness else ""))
    return {"subset": list(s), "convex": bool(v), "witness": witness}, EXIT_OK if v else EXIT_NO


def cmd_truncate(ctx: Context):
    p = _load(ctx)
    s = _keep(ctx, p)
    b = ctx.budgets()
    alg = compute_basis(p, b.nilpotency, b.dimension)
    t = truncate_idempotent(alg, s)
    pres = present_basis_algebra(t, b.nilpotency, name=f"{p.name}_trunc")
    ctx.emit_text = serialize(pres)
    ctx.say(f"e L e on {','.join(s)}: dim {len(t.labels)}")
    return {"subset": list(s), "dimension": len(t.labels), "basis": list(t.labels),
            "convex": bool(is_full_convex(p.quiver, s)), "presentation": serialize(pres)}, EXIT_OK


def cmd_quotient(ctx: Context):
    p = _load(ctx)
    s = _keep(ctx, p)
    b = ctx.budgets()
    qp = quotient_idempotent(p, s)
    alg = compute_basis(qp, b.nilpotency, b.dimension)
    ctx.emit_text = serialize(qp)
    ctx.say(f"quotient keeping {','.join(s)}: dim {alg.dim}")
    return {"subset": list(s), "dimension": alg.dim, "presentation": serialize(qp)}, EXIT_OK


def cmd_isocheck(ctx: Context):
    p = _load(ctx)
    s = _keep(ctx, p)
    b = ctx.budgets()
    rep = natural_map_check(p, s, compute_basis(p, b.nilpotency, b.dimension))
    ctx.say(f"{rep.verdict} ({rep.dims[0]} vs {rep.dims[1]})")
    out = rep.as_dict()
    out["subset"] = list(s)
    out["convex"] = bool(is_full_convex(p.quiver, s))
    return out, EXIT_OK if rep.is_iso else EXIT_NO


def _module(ctx: Context, alg, spec: str):
    kind, v = spec[:1].upper(), spec[1:].lstrip(":_")
    makers = {"S": simple, "P": projective, "I": injective}
    if kind not in makers or v not in alg.vertices:
        raise InputError(f"module must be S<v>, P<v> or I<v> for a vertex v, got {spec!r}")
    return makers[kind](alg, v)


def cmd_resolve(ctx: Context):
    p = _load(ctx)
    b = ctx.budgets()
    alg = compute_basis(p, b.nilpotency, b.dimension)
    m = _module(ctx, alg, ctx.args.module)
    pd = projective_dimension(m, b.resolution)
    shown = pd.value + 1 if pd.is_finite else min(ctx.args.length, b.resolution)
    res = minimal_projective_resolution(m, shown)
    terms = [res.multiplicities(k) for k in range(len(res.gens))]
    ctx.say(f"{ctx.args.module}: pd {pd}")
    for k, t in enumerate(terms):
        ctx.say(f"  P_{k} = " + (" + ".join(f"{n}P{v}" if n > 1 else f"P{v}" for v, n in t.items() if n) or "0"))
    if not pd.is_known:
        ctx.notes.append(pd.note)
    return {"module": ctx.args.module, "dimvec": list(m.dimvec), "terms": terms,
            "complete": res.complete, "pd": pd.as_json(), "pd_note": pd.note}, \
        EXIT_OK if pd.is_known else EXIT_UNKNOWN


def cmd_gldim(ctx: Context):
    p = _load(ctx)
    b = ctx.budgets()
    alg = compute_basis(p, b.nilpotency, b.dimension)
    g = global_dimension(alg, b.resolution)
    simples = {v: projective_dimension(simple(alg, v), b.resolution) for v in alg.vertices}
    ctx.say(f"gldim {g}")
    if not g.is_known:
        ctx.notes.append(g.note)
    return {"gldim": g.as_json(), "note": g.note,
            "simples": {v: d.as_json() for v, d in simples.items()},
            "simple_notes": {v: d.note for v, d in simples.items() if d.note}}, \
        EXIT_OK if g.is_known else EXIT_UNKNOWN


def cmd_knit(ctx: Context):
    p = _load(ctx)
    b = ctx.budgets()
    alg = compute_basis(p, b.nilpotency, b.dimension)
    arq = knit(alg, b.nodes, b.module_dim)
    ctx.caveats.extend(arq.caveats)
    if ctx.args.dot:
        FsPath(ctx.args.dot).write_text(arq.to_dot(), encoding="utf-8")
    ctx.say(f"representation-finite: {len(arq.nodes)} indecomposables")
    return {"representation_finite": True, "node_count": len(arq.nodes), **arq.as_dict()}, EXIT_OK


def cmd_classify(ctx: Context):
    p = _load(ctx)
    an = Analysis(p, ctx.budgets())
    verdicts = classify(an)
    if an.knit_note:
        ctx.notes.append(an.knit_note)
    if an.arq is not None:
        ctx.caveats.extend(an.arq.caveats)
    for v in verdicts:
        ctx.say(f"{v.name}: {v.verdict}")
    target = ctx.args.target
    chosen = next(v for v in verdicts if v.name == target)
    return {"classes": [v.as_dict() for v in verdicts], "target": target,
            "target_verdict": chosen.verdict}, _verdict_exit(chosen.verdict)


def _part(ctx: Context, side: str):
    p = _load(ctx)
    an = Analysis(p, ctx.budgets())
    rep = left_part(an) if side == "left" else right_part(an)
    if rep.members is None:
        ctx.notes.append(rep.note)
        return rep.as_dict(), EXIT_UNKNOWN
    ctx.say(f"{side} part: {len(rep.members)} of {len(an.arq.nodes)} indecomposables")
    return rep.as_dict(an.arq), EXIT_OK


def cmd_leftpart(ctx: Context):
    return _part(ctx, "left")


def cmd_rightpart(ctx: Context):
    return _part(ctx, "right")


def cmd_leftsupport(ctx: Context):
    p = _load(ctx)
    rep = left_support(p, ctx.budgets())
    if rep.vertices is None:
        ctx.notes.append(rep.note)
        return rep.as_dict(), EXIT_UNKNOWN
    if rep.presentation is not None:
        ctx.emit_text = serialize(rep.presentation)
    ctx.say(f"left support vertices: {','.join(rep.vertices) or '(none)'}; convex {rep.convex}")
    for comp, verdicts in rep.components:
        ctx.say(f"  component {','.join(comp)}: " + ", ".join(f"{v.name} {v.verdict}" for v in verdicts))
    return rep.as_dict(), EXIT_OK


def cmd_pi1(ctx: Context):
    p = _load(ctx)
    b = ctx.budgets()
    groups = fundamental_groups(p, compute_basis(p, b.nilpotency, b.dimension))
    out = {"groups": [{**g.as_dict(), "abelianization": str(abelianization(g))} for g in groups]}
    sc = simply_connected_given_presentation(p, b.tietze)
    out["simply_connected"] = sc.as_dict()
    verdict = sc.verdict
    ctx.say(f"simply connected (for the given presentation): {sc.verdict}")
    if ctx.args.strong:
        ssc = strongly_simply_connected_given_presentation(p, b.subsets, b.tietze)
        out["strongly_simply_connected"] = ssc.as_dict()
        verdict = ssc.verdict
        ctx.say(f"strongly simply connected: {ssc.verdict}")
    for g in out["groups"]:
        ctx.say(f"  component {','.join(g['vertices'])}: abelianization {g['abelianization']}")
    return out, _verdict_exit(verdict)


def _subset_arg(p: AlgebraPresentation, spec: str | None):
    return None if not spec else _vertices(p, spec)


def cmd_verify(ctx: Context):
    p = _load(ctx)
    s = _subset_arg(p, ctx.args.subset)
    rep = verify_theorem(p, ctx.args.theorem, s, ctx.budgets())
    ctx.say(f"{rep.theorem}: {rep.status}" + (f" ({rep.note})" if rep.note else ""))
    return rep.as_dict(), _verdict_exit(rep.status)


def cmd_opposite(ctx: Context):
    p = _load(ctx)
    op = opposite(p)
    ctx.emit_text = serialize(op)
    ctx.say(serialize(op).rstrip())
    return {"presentation": serialize(op)}, EXIT_OK


def _verify_instance(job):
    """Worker: verify one serialized instance (runs in a subprocess under --jobs)."""
    text, theorems, budgets = job
    p = parse(text)
    row = {"name": p.name, "vertices": len(p.quiver.vertices), "arrows": len(p.quiver.arrows),
           "relations": len(p.relations)}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", FieldSensitivity)
        an = Analysis(p, budgets)
        row["dimension"] = an.alg.dim
        row["representation_finite"] = an.arq is not None
        results = {}
        for th in theorems:
            try:
                rep = verify_theorem(p, th, None, budgets)
                failing = [c for c in rep.checks if c.get("status") == "fail"]
                results[rep.theorem] = {"status": rep.status, "failing": failing}
            except BudgetExceeded as exc:
                results[th] = {"status": "unknown", "failing": [], "note": str(exc)}
        row["results"] = results
    row["caveats"] = sorted({str(w.message) for w in caught if issubclass(w.category, FieldSensitivity)})
    return row


def cmd_corpus(ctx: Context):
    try:
        spec = CorpusSpec.parse(ctx.args.spec)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad corpus spec: {exc}") from exc
    theorems = []
    for t in (ctx.args.verify or ",".join(CORPUS_THEOREMS)).split(","):
        t = THEOREM_ALIASES.get(t.strip(), t.strip())
        if t not in THEOREMS:
            raise InputError(f"unknown theorem {t!r}")
        theorems.append(t)
    budgets = ctx.budgets(CORPUS_BUDGETS)
    corpus = generate_corpus(spec, budgets.nilpotency)
    ctx.source = "".join(serialize(p) for p in corpus)
    ctx.where = f"corpus:{ctx.args.spec}"
    jobs = [(serialize(p), tuple(theorems), budgets) for p in corpus]
    if ctx.args.jobs > 1:
        with ProcessPoolExecutor(max_workers=ctx.args.jobs) as pool:
            rows = list(pool.map(_verify_instance, jobs))
    else:
        rows = [_verify_instance(j) for j in jobs]
    summary = {t: {"pass": 0, "fail": 0, "unknown": 0, "skipped": 0} for t in theorems}
    for row in rows:
        for t, r in row["results"].items():
            summary[t][r["status"]] += 1
        ctx.caveats.extend(row.pop("caveats"))
    for t in theorems:
        c = summary[t]
        ctx.say(f"{t}: {c['pass']} pass, {c['fail']} fail, {c['unknown']} unknown, {c['skipped']} skipped")
    failed = any(c["fail"] for c in summary.values())
    unknown = sum(c["unknown"] for c in summary.values())
    if unknown:
        ctx.notes.append(f"{unknown} theorem checks undecided within budgets")
    return {"spec": spec.as_dict(), "instances": rows, "summary": summary,
            "finite_instances": sum(r["representation_finite"] for r in rows)}, \
        EXIT_NO if failed else EXIT_OK


COMMANDS = {
    "info": (cmd_info, "dimensions, Cartan matrix and global dimension"),
    "convex": (cmd_convex, "test whether a vertex set is full convex"),
    "truncate": (cmd_truncate, "idempotent truncation e L e with an extracted presentation"),
    "quotient": (cmd_quotient, "idempotent quotient keeping the given vertices"),
    "isocheck": (cmd_isocheck, "compare truncation and quotient via the natural map"),
    "resolve": (cmd_resolve, "minimal projective resolution of S<v>, P<v> or I<v>"),
    "gldim": (cmd_gldim, "global dimension with per-simple projective dimensions"),
    "knit": (cmd_knit, "knit the AR quiver"),
    "classify": (cmd_classify, "class verdicts (tilted, shod, ...)"),
    "leftpart": (cmd_leftpart, "the left part L"),
    "rightpart": (cmd_rightpart, "the right part R"),
    "leftsupport": (cmd_leftsupport, "the left support and its components"),
    "pi1": (cmd_pi1, "fundamental group of the given presentation"),
    "verify": (cmd_verify, "run one theorem verifier"),
    "corpus": (cmd_corpus, "generate a random corpus and run verifiers on it"),
    "opposite": (cmd_opposite, "presentation of the opposite algebra"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--emit", choices=("report", "quiv"), default="report",
                        help="print the resulting presentation as .quiv instead of a report")
    for flag, text in BUDGET_FLAGS.items():
        common.add_argument(f"--budget-{flag}", type=int, default=None, metavar="N", help=text)

    parser = argparse.ArgumentParser(prog="boundquiver", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if name == "corpus":
            sp.add_argument("spec", help="e.g. seed=1,count=100,vertices=2-5")
            sp.add_argument("--verify", default=None, help="comma-separated theorem list")
            sp.add_argument("--jobs", type=int, default=1)
            continue
        if name == "resolve":
            sp.add_argument("input", nargs="?", default="-")
            sp.add_argument("module", help="S<v>, P<v> or I<v>")
            sp.add_argument("--length", type=int, default=6,
                            help="terms shown when the resolution is infinite")
            continue
        sp.add_argument("input", nargs="?", default="-", help=".quiv file, fixture name, or - for stdin")
        if name in ("convex", "truncate", "quotient", "isocheck"):
            sp.add_argument("vertices", nargs="?", default=None)
            sp.add_argument("--keep", default=None, help="comma-separated vertices")
        if name == "knit":
            sp.add_argument("--dot", default=None, metavar="OUT")
        if name == "classify":
            sp.add_argument("--target", choices=CLASS_NAMES, default="tilted")
        if name == "pi1":
            sp.add_argument("--strong", action="store_true")
        if name == "verify":
            sp.add_argument("theorem", choices=THEOREMS + tuple(THEOREM_ALIASES))
            sp.add_argument("--subset", default=None)
    return parser


def _render(ctx: Context, command: list[str], results, code: int, error: str | None = None) -> str:
    report = {
        "command": command,
        "input": {"source": getattr(ctx, "where", None),
                  "sha256": hashlib.sha256(ctx.source.encode()).hexdigest() if ctx.source else None},
        "results": results,
        "budget_notes": sorted(set(n for n in ctx.notes if n)),
        "caveats": sorted(set(ctx.caveats)),
        "exit_code": code,
    }
    if error is not None:
        report["error"] = error
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def run(argv: list[str]) -> tuple[str, int]:
    """Execute a command line; return (stdout text, exit code)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return "", EXIT_INPUT if exc.code else EXIT_OK
    ctx = Context(args)
    ctx.emit_text = None
    handler = COMMANDS[args.command][0]
    error = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", FieldSensitivity)
        try:
            results, code = handler(ctx)
        except (InputError, ParseError, FileNotFoundError, UnicodeDecodeError) as exc:
            results, code, error = None, EXIT_INPUT, str(exc)
        except BudgetExceeded as exc:
            results, code, error = None, EXIT_UNKNOWN, str(exc)
            ctx.notes.append(str(exc))
        except ValueError as exc:
            results, code, error = None, EXIT_INPUT, str(exc)
    ctx.caveats.extend(str(w.message) for w in caught if issubclass(w.category, FieldSensitivity))
    if args.emit == "quiv" and ctx.emit_text is not None and error is None:
        return ctx.emit_text, code
    if args.format == "text":
        lines = list(ctx.text_lines)
        if error:
            lines.append(f"error: {error}")
        lines.extend(f"budget: {n}" for n in sorted(set(ctx.notes)) if n)
        lines.extend(f"caveat: {c}" for c in sorted(set(ctx.caveats)))
        return "\n".join(lines) + "\n", code
    return _render(ctx, argv, results, code, error), code


def main(argv: list[str] | None = None) -> int:
    out, code = run(list(sys.argv[1:] if argv is None else argv))
    sys.stdout.write(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
