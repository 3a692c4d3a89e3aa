"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 failed internal cross-check.
Reports are JSON on stdout, rendered deterministically (sorted keys), so
identical configurations produce byte-identical output regardless of
worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import catalog, census, classify, grouplab, massey, padic, presentation, serialize
from .digraph import Digraph
from .errors import InputError, InternalCheckError, RaagAtlasError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


@dataclass
class RunConfig:
    p: int = 3
    f: int = 1
    precision: int = 0  # 0: pick max(12, 2f + 4)
    budget: int = massey.DEFAULT_SCAN_BUDGET
    workers: int = 1

    def __post_init__(self):
        if self.precision == 0:
            self.precision = max(12, 2 * self.f + 4)

    @property
    def q(self) -> int:
        return padic.validate_prime_power(self.p, self.f)

    def require_q_precision(self):
        floor = 2 * self.f + 4
        if self.precision < floor:
            raise InputError(
                f"precision {self.precision} too small for f = {self.f}; "
                f"need at least {floor}"
            )


def _config(args) -> RunConfig:
    workers = getattr(args, "workers", None)
    if workers is None:
        workers = int(os.environ.get("RAAG_ATLAS_WORKERS", "1"))
    return RunConfig(
        p=getattr(args, "p", 3),
        f=getattr(args, "f", 1),
        precision=getattr(args, "precision", 0) or 0,
        budget=getattr(args, "budget", massey.DEFAULT_SCAN_BUDGET),
        workers=workers,
    )


def _load_digraph(spec: str) -> Digraph:
    if os.path.exists(spec):
        return serialize.load_file(spec)
    name = spec[:-5] if spec.endswith(".json") else spec
    if name in catalog.names():
        return catalog.load(name)
    raise InputError(f"no such file or bundled digraph: {spec}")


def _emit(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _parse_character(raw: str, g: Digraph, p: int) -> dict:
    parts = raw.split(",")
    if len(parts) != g.n:
        raise InputError(
            f"character needs {g.n} comma-separated values (one per vertex)"
        )
    try:
        values = [int(t) % p for t in parts]
    except ValueError:
        raise InputError(f"bad character {raw!r}") from None
    return dict(zip(g.vertices, values))


def build_parser() -> _Parser:
    parser = _Parser(prog="raag-atlas")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pf(sp, f_default=1):
        sp.add_argument("--p", type=int, default=3)
        sp.add_argument("--f", type=int, default=f_default)
        sp.add_argument("--precision", type=int, default=0)

    sp = sub.add_parser("classify", help="specialness and elementary type")
    sp.add_argument("file")

    sp = sub.add_parser("decompose", help="decomposition tree or stuck subgraph")
    sp.add_argument("file")

    sp = sub.add_parser("census", help="exhaustive labeled census")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--dedup-iso", action="store_true")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--mode", choices=("auto", "objects", "vectorized"), default="auto")

    sp = sub.add_parser("present", help="emit the attached presentation")
    sp.add_argument("file")
    add_pf(sp)
    sp.add_argument("--format", choices=("text", "json", "cas"), default="json")

    sp = sub.add_parser("padic-check", help="verify the unit-power valuation claims")
    add_pf(sp)

    sp = sub.add_parser("witness", help="run a witness computation")
    sp.add_argument(
        "which", choices=("heisenberg", "triangle", "line", "hnn", "square")
    )
    add_pf(sp)
    sp.add_argument("--kind", choices=("first", "second"), default="first")
    sp.add_argument("--window", type=int, default=2)
    sp.add_argument("--file", default="square")

    sp = sub.add_parser("massey", help="unitriangular lift scans")
    msub = sp.add_subparsers(dest="massey_command", required=True)
    ms = msub.add_parser("scan")
    ms.add_argument("file")
    add_pf(ms, f_default=2)
    ms.add_argument("--budget", type=int, default=massey.DEFAULT_SCAN_BUDGET)
    ms.add_argument("--workers", type=int, default=None)
    ml = msub.add_parser("lift")
    ml.add_argument("file")
    add_pf(ml, f_default=2)
    ml.add_argument("--alpha1", required=True)
    ml.add_argument("--alpha2", required=True)
    ml.add_argument("--alpha3", required=True)

    sp = sub.add_parser("export-dot", help="GraphViz export")
    sp.add_argument("file")

    sp = sub.add_parser("examples", help="bundled digraphs")
    sp.add_argument("--show", default=None)
    sp.add_argument("--dump", default=None, metavar="DIR")

    return parser


def _run(args) -> str:
    cmd = args.command
    if cmd == "classify":
        g = _load_digraph(args.file)
        report = classify.classify(g)
        report["vertices"] = list(g.vertices)
        return _emit(report)

    if cmd == "decompose":
        g = _load_digraph(args.file)
        verdict = classify.is_elementary_type_decomp(g)
        report = {
            "vertices": list(g.vertices),
            "elementary_type": verdict.ok,
            "tree": classify.tree_to_json(verdict.tree) if verdict.tree else None,
            "starting_vertices": (
                sorted(classify.starting_vertices(verdict.tree)) if verdict.tree else None
            ),
            "stuck": list(verdict.stuck) if verdict.stuck else None,
            "offender": (
                {"vertex": verdict.offender[0], "pair": list(verdict.offender[1])}
                if verdict.offender
                else None
            ),
            "replay_ok": (
                classify.replay(verdict.tree) is not None if verdict.tree else None
            ),
        }
        if verdict.tree is not None:
            from .digraph import equal_as_labeled

            report["replay_ok"] = equal_as_labeled(classify.replay(verdict.tree), g)
        return _emit(report)

    if cmd == "census":
        cfg = _config(args)
        report = census.census(
            args.n, dedup=args.dedup_iso, workers=cfg.workers, mode=args.mode
        )
        return _emit(report)

    if cmd == "present":
        cfg = _config(args)
        g = _load_digraph(args.file)
        pres = presentation.present(g, cfg.p, cfg.f)
        orient = presentation.orientation(g, cfg.q)
        if args.format == "text":
            return presentation.format_text(pres, orient)
        if args.format == "cas":
            return presentation.format_cas(pres)
        return _emit(presentation.presentation_to_json(pres, orient))

    if cmd == "padic-check":
        cfg = _config(args)
        cfg.require_q_precision()
        return _emit(padic.check_claims(cfg.p, cfg.f, cfg.precision))

    if cmd == "witness":
        cfg = _config(args)
        if args.which == "heisenberg":
            return _emit(grouplab.heisenberg_witness(cfg.p, max(cfg.precision, 2)))
        if args.which == "triangle":
            cfg.require_q_precision()
            return _emit(grouplab.triangle_witness(args.kind, cfg.q, cfg.precision))
        if args.which == "line":
            cfg.require_q_precision()
            return _emit(grouplab.line_identity_checks(cfg.q, cfg.precision))
        if args.which == "hnn":
            return _emit(
                grouplab.hnn_abelianization_check(
                    cfg.p, max(cfg.precision, 2), args.window
                )
            )
        g = _load_digraph(args.file)
        return _emit(grouplab.square_report(g))

    if cmd == "massey":
        cfg = _config(args)
        g = _load_digraph(args.file)
        if args.massey_command == "scan":
            report = massey.massey_scan(
                g, cfg.p, cfg.q, budget=args.budget, workers=cfg.workers
            )
            return _emit(report)
        a1 = _parse_character(args.alpha1, g, cfg.p)
        a2 = _parse_character(args.alpha2, g, cfg.p)
        a3 = _parse_character(args.alpha3, g, cfg.p)
        return _emit(massey.massey_lift(g, cfg.p, cfg.f, a1, a2, a3))

    if cmd == "export-dot":
        g = _load_digraph(args.file)
        return serialize.to_dot(g)

    if cmd == "examples":
        if args.show:
            return serialize.dumps(catalog.load(args.show))
        if args.dump:
            os.makedirs(args.dump, exist_ok=True)
            for name in catalog.names():
                path = os.path.join(args.dump, f"{name}.json")
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(serialize.dumps(catalog.load(name)))
            return _emit({"dumped": catalog.names(), "directory": args.dump})
        return _emit({"available": catalog.names()})

    raise InputError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        sys.stdout.write(_run(args))
        return 0
    except InternalCheckError as exc:
        sys.stderr.write(f"internal check failed: {exc}\n")
        return 2
    except (InputError, RaagAtlasError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
