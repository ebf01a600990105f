"""``galeforge`` command line.

Exit codes: 0 success, 1 a verification failed, 2 invalid input or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import construct, diagram, faces, trees, verify
from .diagram import Diagram
from .errors import ConsistencyError, GaleForgeError

D_LIMIT = 8

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


class InvalidInput(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(out: Optional[str], text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise InvalidInput(f"cannot write {out}: {exc.strerror or exc}") from None


def _load_diagram(path: str) -> Diagram:
    return Diagram.from_json(_read_text(path))


def _load_lattice(path: str) -> faces.FaceLattice:
    """Accept either a face lattice document or a diagram document."""
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON: {exc}") from None
    if isinstance(data, dict) and "facets" in data:
        return faces.FaceLattice.from_dict(data)
    if isinstance(data, dict) and "points" in data:
        return faces.face_lattice(Diagram.from_dict(data))
    raise InvalidInput(f"{path}: expected a diagram or face lattice document")


def _check_d(d: int) -> int:
    if not 0 <= d <= D_LIMIT:
        raise InvalidInput(f"d must lie in 0..{D_LIMIT}, got {d}")
    return d


def _faces_line(face) -> str:
    return ",".join(sorted(face, key=_label_key))


def _label_key(label: str):
    return (label[0], int(label[1:])) if label[1:].isdigit() else (label, 0)


# -- subcommands ---------------------------------------------------------------


def cmd_trees_enumerate(args) -> int:
    if not 3 <= args.leaves <= D_LIMIT + 3:
        raise InvalidInput(f"--leaves must lie in 3..{D_LIMIT + 3}")
    ts = trees.enumerate_trees(args.leaves)
    if args.format == "dot":
        text = "\n".join(trees.to_dot(t, name=f"tree{k}") for k, t in enumerate(ts, start=1))
    else:
        text = "\n".join(trees.to_text(t) for t in ts)
    _write(args.out, text)
    return EXIT_OK


def cmd_trees_count(args) -> int:
    _write(None, str(trees.count_T_diagrams(_check_d(args.d))))
    return EXIT_OK


def cmd_diagram_build(args) -> int:
    t = trees.parse_tree(_read_text(args.tree))
    _check_d(len(t.leaves) - 3)
    X, corr = construct.build_diagram(t)
    _write(args.out, X.to_json())
    if args.correspondence:
        _write(args.correspondence, json.dumps(construct.correspondence_to_json(corr), indent=2))
    return EXIT_OK


def cmd_diagram_check(args) -> int:
    X = _load_diagram(args.path)
    results = {
        "general_position": X.in_general_position,
        "polytope": diagram.is_polytope_diagram(X),
        "neighborly": X.d >= 1 and diagram.is_neighborly_diagram(X),
        "t_diagram": diagram.is_t_diagram(X),
        "T_diagram": X.d >= 2 and diagram.is_T_diagram(X),
    }
    _write(None, "\n".join(f"{k}\t{'yes' if v else 'no'}" for k, v in results.items()))
    return EXIT_OK if results["T_diagram"] or (X.d < 2 and results["t_diagram"]) else EXIT_FAILED


def cmd_diagram_extract(args) -> int:
    X = _load_diagram(args.path)
    t, _ = construct.extract_tree(X)
    _write(None, trees.to_text(t))
    return EXIT_OK


def cmd_faces_list(args) -> int:
    L = _load_lattice(args.path)
    sizes = [args.size] if args.size is not None else sorted(L.faces_by_size)
    if args.size is not None and args.size not in L.faces_by_size:
        raise InvalidInput(f"--size must lie in 1..{2 * L.d}")
    lines = []
    for t in sizes:
        lines += sorted(_faces_line(f) for f in L.faces_by_size[t])
    _write(None, "\n".join(lines))
    return EXIT_OK


def cmd_faces_fvector(args) -> int:
    _write(None, " ".join(str(n) for n in _load_lattice(args.path).f_vector()))
    return EXIT_OK


def cmd_faces_local(args) -> int:
    L = _load_lattice(args.path)
    if args.vertex not in L.labels:
        raise InvalidInput(f"unknown vertex {args.vertex!r}")
    counts = faces.local_face_counts(L, args.vertex)
    _write(None, "\n".join(f"{t}\t{n}" for t, n in counts.items()))
    return EXIT_OK


def cmd_faces_nonfaces(args) -> int:
    X = _load_diagram(args.path)
    found = sorted((sorted(m, key=_label_key) for m in faces.enumerate_minimal_nonfaces(X)), key=lambda m: (len(m), [_label_key(v) for v in m]))
    _write(None, "\n".join(json.dumps(m) for m in found))
    return EXIT_OK


def cmd_faces_identify(args) -> int:
    L = _load_lattice(args.path)
    t = faces.identify_tree(L)
    _write(None, trees.to_text(t))
    return EXIT_OK


def cmd_verify(args) -> int:
    lo, hi = _check_d(args.d_min), _check_d(args.d_max)
    if lo > hi:
        raise InvalidInput("--d-min exceeds --d-max")
    threads = args.threads
    try:
        threads = verify.resolve_threads(threads)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    results = verify.run_all(range(lo, hi + 1), use_oracle=args.oracle, seed=args.seed, threads=threads)
    lines = ["check\td\tstatus\tdetail"] + [r.line() for r in results]
    failed = sum(not r.ok for r in results)
    lines.append(f"summary\t-\t{'PASS' if not failed else 'FAIL'}\t{len(results) - failed}/{len(results)} checks passed")
    _write(None, "\n".join(lines))
    if args.report:
        _write(args.report, json.dumps([r.__dict__ for r in results], indent=2))
    if args.figures:
        _write_figures(Path(args.figures), range(max(lo, 2), hi + 1))
    return EXIT_OK if not failed else EXIT_FAILED


def _write_figures(folder: Path, d_values) -> None:
    from . import plotting

    try:
        folder.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InvalidInput(f"cannot create {folder}: {exc.strerror or exc}") from None
    rows = []
    for d in d_values:
        cyc = faces.face_lattice(faces.cyclic_diagram(d)).f_vector()
        for k, (_, X, _) in enumerate(verify.built(d), start=1):
            plotting.render_diagram_svg(X, folder / f"diagram-d{d}-{k}.svg")
        rows.append((d, verify.lattice(d, 0).f_vector(), cyc))
    if rows:
        plotting.render_counts_svg(rows, folder / "f-vectors.svg")


def cmd_export_svg(args) -> int:
    from . import plotting

    X = _load_diagram(args.path)
    try:
        plotting.render_diagram_svg(X, args.out)
    except OSError as exc:
        raise InvalidInput(f"cannot write {args.out}: {exc.strerror or exc}") from None
    return EXIT_OK


# -- parser --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InvalidInput(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="galeforge", description="Neighborly polytopes from plane Gale diagrams.")
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    tr = sub.add_parser("trees").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    q = tr.add_parser("enumerate", help="all 3-trees with the given number of leaves, up to mirror")
    q.add_argument("--leaves", type=int, required=True)
    q.add_argument("--format", choices=("tree", "dot"), default="tree")
    q.add_argument("--out")
    q.set_defaults(func=cmd_trees_enumerate)
    q = tr.add_parser("count", help="number of T-diagrams for d")
    q.add_argument("--d", type=int, required=True)
    q.set_defaults(func=cmd_trees_count)

    dg = sub.add_parser("diagram").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    q = dg.add_parser("build", help="realize a tree as a t-diagram")
    q.add_argument("--tree", required=True, help="tree text file, or - for stdin")
    q.add_argument("--out")
    q.add_argument("--correspondence", help="also write the tree-to-diagram vertex map here")
    q.set_defaults(func=cmd_diagram_build)
    q = dg.add_parser("check", help="report recognizers; exit 1 unless a t-/T-diagram")
    q.add_argument("path")
    q.set_defaults(func=cmd_diagram_check)
    q = dg.add_parser("extract-tree", help="characteristic tree of a t-diagram")
    q.add_argument("path")
    q.set_defaults(func=cmd_diagram_extract)

    fc = sub.add_parser("faces").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    q = fc.add_parser("list")
    q.add_argument("path")
    q.add_argument("--size", type=int)
    q.set_defaults(func=cmd_faces_list)
    q = fc.add_parser("fvector")
    q.add_argument("path")
    q.set_defaults(func=cmd_faces_fvector)
    q = fc.add_parser("local")
    q.add_argument("path")
    q.add_argument("--vertex", required=True)
    q.set_defaults(func=cmd_faces_local)
    q = fc.add_parser("nonfaces")
    q.add_argument("path")
    q.add_argument("--minimal", action="store_true", required=True)
    q.set_defaults(func=cmd_faces_nonfaces)
    q = fc.add_parser("identify", help="characteristic tree from a face lattice")
    q.add_argument("path")
    q.set_defaults(func=cmd_faces_identify)

    q = sub.add_parser("verify", help="run every check over a range of d")
    q.add_argument("--d-min", type=int, default=2)
    q.add_argument("--d-max", type=int, default=4)
    q.add_argument("--oracle", action="store_true")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--threads", type=int)
    q.add_argument("--report", help="write the results as JSON")
    q.add_argument("--figures", help="directory for SVG renderings of the built diagrams")
    q.set_defaults(func=cmd_verify)

    ex = sub.add_parser("export").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    q = ex.add_parser("svg")
    q.add_argument("path")
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_export_svg)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ConsistencyError as exc:
        print(f"galeforge: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (InvalidInput, GaleForgeError, ValueError) as exc:
        print(f"galeforge: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
