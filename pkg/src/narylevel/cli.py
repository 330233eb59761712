"""Command-line interface.

Exit codes: 0 success or property holds, 1 property fails or the structure
is not of level one, 2 bad input, 3 inconclusive search.
"""

from __future__ import annotations

import argparse
import difflib
import os
import sys
from importlib import resources

from .classification import (
    GOLDEN_DIMS,
    Kind,
    Status,
    enumerate_level_one,
    golden_table,
    is_maximally_p_attractive_presentation,
    is_p_minimal_presentation,
    recognize_level_one,
)
from .corpus import DEFAULT_SIZES, selfcheck
from .degeneration import (
    DEFAULT_BUDGET,
    apply_chain,
    degenerate_to_form,
    form_to_minimal,
    iw_contraction,
    subalgebraic_to_max_attractive,
)
from .errors import (
    BadK,
    NaryError,
    NoLimit,
    NotABasisFamily,
    NotKSubalgebra,
    ParseError,
    PreconditionError,
    SearchExhausted,
    UnsupportedArity,
)
from .fileformats import read_structure, read_witness, render_structure, render_witness
from .properties import (
    is_k_subalgebra,
    is_p_anticommutative,
    is_p_attractive,
    is_subalgebraic,
)
from .scalars import format_rational
from .structures import Partition, Subspace

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3

GOLDEN_FILES = {2: "example1.txt", 3: "example2.txt"}


class InputError(Exception):
    """Bad command-line input detected after argument parsing."""


def resolve_seed(flag) -> int:
    """``--seed`` wins; otherwise ``NARY_SEED``; otherwise 0."""
    if flag is not None:
        return flag
    env = os.environ.get("NARY_SEED")
    if env is None or not env.strip():
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"NARY_SEED must be an integer, got {env!r}") from None


def _load(reader, path):
    try:
        return reader(path)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def golden_text(n: int) -> str:
    return resources.files("narylevel").joinpath("golden", GOLDEN_FILES[n]).read_text(encoding="utf-8")


def _emit(text: str, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _vec(v) -> str:
    return "(" + ", ".join(format_rational(x) for x in v) + ")"


def _print_verdict(verdict):
    print("holds" if verdict.holds else "fails")
    if verdict.reason:
        print(f"reason: {verdict.reason}")
    cert = verdict.certificate
    if cert is not None:
        if cert.chain:
            print("chain: " + " ".join(_vec(v) for v in cert.chain))
        print("arguments: " + " ".join(_vec(v) for v in cert.args))


def _pipeline_output(mu, witnesses, args):
    """Witness chain (and target as comments) to stdout, or to the given files."""
    target = witnesses[-1].target
    wtext = render_witness(mu.n, [w.family for w in witnesses])
    if args.output:
        _emit(render_structure(target), args.output)
    if args.witness:
        _emit(wtext, args.witness)
    if not args.witness:
        sys.stdout.write(wtext)
        if not args.output:
            sys.stdout.write("# target\n" + "".join(f"# {line}\n" for line in render_structure(target).splitlines()))


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_check(args, seed):
    mu = _load(read_structure, args.file)
    prop = args.property
    if prop in ("anticommutative", "attractive"):
        if args.partition is None:
            raise InputError(f"--partition is required for {prop}")
        p = Partition.parse(args.partition)
        check = is_p_anticommutative if prop == "anticommutative" else is_p_attractive
        verdict = check(mu, p, seed=seed)
    elif prop == "subalgebraic":
        verdict = is_subalgebraic(mu, seed=seed)
    else:
        if args.k is None or args.subspace is None:
            raise InputError("k-subalgebra needs --k and --subspace")
        idx = [int(x) - 1 for x in args.subspace.split(",") if x.strip()]
        if any(not 0 <= i < mu.m for i in idx):
            raise InputError(f"subspace indices must lie in 1..{mu.m}")
        verdict = is_k_subalgebra(mu, Subspace.coordinate(mu.m, idx), args.k)
    _print_verdict(verdict)
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_degenerate(args, seed):
    mu = _load(read_structure, args.file)
    wf = _load(read_witness, args.witness_file)
    if (wf.n, wf.m) != (mu.n, mu.m):
        raise InputError(f"witness is for n={wf.n} m={wf.m}, structure has n={mu.n} m={mu.m}")
    chain = apply_chain(mu, wf.families())
    _emit(render_structure(chain[-1].target), args.output)
    return EXIT_OK


def cmd_contract(args, seed):
    mu = _load(read_structure, args.file)
    try:
        w = iw_contraction(mu, args.l, args.k)
    except NotKSubalgebra as exc:
        print(f"not contractible: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.witness:
        _emit(render_witness(mu.n, [w.family]), args.witness)
    _emit(render_structure(w.target), args.output)
    return EXIT_OK


def cmd_to_form(args, seed):
    mu = _load(read_structure, args.file)
    w = degenerate_to_form(mu, seed=seed, budget=args.budget)
    _pipeline_output(mu, [w], args)
    return EXIT_OK


def cmd_to_minimal(args, seed):
    mu = _load(read_structure, args.file)
    w = form_to_minimal(mu, seed=seed, budget=args.budget)
    _pipeline_output(mu, [w], args)
    return EXIT_OK


def cmd_to_attractive(args, seed):
    mu = _load(read_structure, args.file)
    p, chain = subalgebraic_to_max_attractive(mu, seed=seed, budget=args.budget)
    print(f"# partition {p}")
    _pipeline_output(mu, chain, args)
    return EXIT_OK


def cmd_classify(args, seed):
    mu = _load(read_structure, args.file)
    r = recognize_level_one(mu, seed=seed, budget=args.budget)
    print(f"status: {r.status}")
    if r.kind is not None:
        print(f"kind: {r.kind}")
        print(f"partition: {r.partition}")
    if r.match is not None:
        params = ", ".join(format_rational(x) for x in r.match.parameters)
        print(f"family: {r.match.family}" + (f" ({params})" if params else ""))
    if r.reason:
        print(f"reason: {r.reason}")
    if r.target is not None and args.verbose:
        sys.stdout.write("".join(f"# {line}\n" for line in render_structure(r.target).splitlines()))
    if r.status is Status.LEVEL_ONE:
        return EXIT_OK
    if r.status is Status.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_FAIL


def cmd_enumerate(args, seed):
    sys.stdout.write(golden_table(args.n, [args.m]))
    return EXIT_OK


def cmd_verify_paper(args, seed):
    expected = golden_text(args.n)
    produced = golden_table(args.n, GOLDEN_DIMS[args.n])
    sys.stdout.write(produced)
    status = EXIT_OK
    if produced != expected:
        diff = difflib.unified_diff(
            expected.splitlines(True), produced.splitlines(True), "golden", "computed"
        )
        sys.stderr.writelines(diff)
        status = EXIT_FAIL
    for m in GOLDEN_DIMS[args.n]:
        for entry in enumerate_level_one(args.n, m):
            check = (
                is_p_minimal_presentation if entry.kind is Kind.FORM_MINIMAL
                else is_maximally_p_attractive_presentation
            )
            if not check(entry.representative, entry.partition).holds:
                print(f"representative rejected: {entry.golden_line()}", file=sys.stderr)
                status = EXIT_FAIL
    print("verify-paper: " + ("OK" if status == EXIT_OK else "MISMATCH"), file=sys.stderr)
    return status


def _parse_sizes(text: str):
    sizes = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            n, m, count = (int(x) for x in chunk.split("x"))
        except ValueError:
            raise InputError(f"bad size {chunk!r}, expected NxMxCOUNT") from None
        sizes.append((n, m, count))
    return tuple(sizes)


def cmd_selfcheck(args, seed):
    sizes = DEFAULT_SIZES if args.sizes is None else _parse_sizes(args.sizes)
    report = selfcheck(seed, sizes, trials=args.trials, pipelines=not args.no_pipelines)
    sys.stdout.write(report.render())
    return EXIT_OK if report.ok else EXIT_FAIL


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="narylevel",
        description="Level-one n-ary algebras: property checks, degenerations and classification.",
    )
    parser.add_argument("--seed", type=int, default=None, help="random seed (default: $NARY_SEED or 0)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("check", help="test a structural property")
    p.add_argument("--property", required=True, choices=["anticommutative", "attractive", "subalgebraic", "k-subalgebra"])
    p.add_argument("--partition", help="partition such as (2,1)")
    p.add_argument("--k", type=int, help="k for k-subalgebra")
    p.add_argument("--subspace", help="comma-separated basis indices spanning the subspace, e.g. 1,2")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("degenerate", help="apply a witness file to a structure")
    p.add_argument("file")
    p.add_argument("witness_file")
    p.add_argument("-o", "--output", help="target structure file (default: stdout)")
    p.set_defaults(func=cmd_degenerate)

    p = sub.add_parser("contract", help="k-IW contraction with respect to <e_1..e_l>")
    p.add_argument("file")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--output", help="target structure file (default: stdout)")
    p.add_argument("-w", "--witness", help="also write the witness file here")
    p.set_defaults(func=cmd_contract)

    for name, func, text in (
        ("to-form", cmd_to_form, "degenerate a non-subalgebraic structure to a form algebra"),
        ("to-minimal", cmd_to_minimal, "degenerate a form algebra to a p-minimal one"),
        ("to-attractive", cmd_to_attractive, "degenerate a subalgebraic structure to a maximally p-attractive one"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("file")
        p.add_argument("-o", "--output", help="target structure file")
        p.add_argument("-w", "--witness", help="witness file (default: stdout)")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="random basis attempts")
        p.set_defaults(func=func)

    p = sub.add_parser("classify", help="decide whether a structure has level one")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("-v", "--verbose", action="store_true", help="also print the normalized target")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("enumerate", help="table of level-one families for n in {2,3}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify-paper", help="compare the computed tables with the shipped golden files")
    p.add_argument("--n", type=int, required=True, choices=[2, 3])
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("selfcheck", help="seeded invariant suites on random corpora")
    p.add_argument("--sizes", help="comma-separated NxMxCOUNT triples (default 2x3x200,3x3x200)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--no-pipelines", action="store_true")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which matches our input-error code
        return int(exc.code or 0)
    try:
        seed = resolve_seed(args.seed)
        return args.func(args, seed)
    except (InputError, OSError, NotABasisFamily, NoLimit, BadK, UnsupportedArity) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SearchExhausted as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (NaryError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
