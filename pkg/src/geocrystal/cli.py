"""Command-line front end (``crystal``).

Exit codes: 0 success, 2 usage or validation error, 3 internal invariant
violation, such as a positivity failure or a failed verification.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .exact_algebra import AlgebraError, ParseError, PositivityError, VariableContext, parse
from .root_data import is_dominant, is_reduced, WeylElement

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int
    word: tuple[int, ...] | None = None
    lam: tuple[int, ...] | None = None
    mu: tuple[int, ...] | None = None
    out: str = "json"
    seed: int = 0
    trials: int = 0
    height_bound: int = 0
    q: bool = False


def _int_tuple(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(p) for p in re.split(r"[,\s]+", text.strip("()[] ")) if p)
    except ValueError:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from None


def _natural_key(name: str):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", name)]


def _config(args) -> RunConfig:
    n = args.gl
    if n is None or n < 1:
        raise ValidationError("--gl must be a positive integer")
    word = _int_tuple(args.word) if getattr(args, "word", None) else None
    lam = _int_tuple(args.lam) if getattr(args, "lam", None) is not None else None
    mu = _int_tuple(args.mu) if getattr(args, "mu", None) is not None else None
    for name, w in (("--lambda", lam), ("--mu", mu)):
        if w is not None and len(w) != n:
            raise ValidationError(f"{name} needs {n} entries, got {len(w)}")
    if word is not None:
        if any(not 1 <= i < n for i in word):
            raise ValidationError(f"word letters must lie in 1..{n - 1}")
        if not is_reduced(n, word):
            raise ValidationError(f"word {word} is not reduced")
    trials = getattr(args, "trials", 0) or 0
    if trials < 0:
        raise ValidationError("--trials must be nonnegative")
    hb = getattr(args, "height_bound", 0) or 0
    if hb < 0:
        raise ValidationError("--height-bound must be nonnegative")
    return RunConfig(n, word, lam, mu, getattr(args, "out", "json"), getattr(args, "seed", 0) or 0,
                     trials, hb, bool(getattr(args, "q", False)))


def _require_longest(cfg: RunConfig):
    if cfg.word is not None and WeylElement.from_word(cfg.n, cfg.word) != WeylElement.longest(cfg.n):
        raise ValidationError(f"word {cfg.word} is not a reduced word of the longest element")


def _emit(text: str, output: str | None, summary: Sequence[str]):
    """Artifact to ``output`` (summary on stdout) or to stdout (summary on stderr)."""
    if output:
        Path(output).write_text(text)
        for line in summary:
            print(line)
        print(f"wrote {output}")
    else:
        sys.stdout.write(text)
        for line in summary:
            print(line, file=sys.stderr)


def _serialize(crystal, fmt: str) -> str:
    from .kashiwara import to_dot, to_json
    from .trop_crystal import multiplicity_csv

    if fmt == "json":
        return json.dumps(to_json(crystal), indent=1, sort_keys=True) + "\n"
    if fmt == "dot":
        return to_dot(crystal)
    return multiplicity_csv(crystal)


def _crystal_summary(crystal) -> list[str]:
    from .kashiwara import highest_weight_elements

    hw = highest_weight_elements(crystal)
    lines = [f"elements: {len(crystal)}", f"highest-weight elements: {len(hw)}"]
    for b in hw:
        lines.append(f"  id {b} coords {crystal.coords[b]} weight {crystal.weight(b)}")
    return lines


# -- subcommands --------------------------------------------------------------------


def cmd_enum(args) -> int:
    from .trop_crystal import default_trop_chart, enumerate_Blambda

    cfg = _config(args)
    if cfg.lam is None:
        raise ValidationError("--lambda is required")
    _require_longest(cfg)
    crystal = enumerate_Blambda(default_trop_chart(cfg.n, cfg.word), cfg.lam)
    _emit(_serialize(crystal, cfg.out), args.output, _crystal_summary(crystal))
    if args.figure:
        from .plots import plot_crystal

        plot_crystal(crystal, args.figure, f"B^{cfg.lam}")
    return EXIT_OK


def cmd_tensor(args) -> int:
    from .kashiwara import q_polynomial_text
    from .trop_crystal import tensor_decompose

    cfg = _config(args)
    if cfg.lam is None or cfg.mu is None:
        raise ValidationError("--lambda and --mu are required")
    _require_longest(cfg)
    for name, w in (("--lambda", cfg.lam), ("--mu", cfg.mu)):
        if not is_dominant(w):
            raise ValidationError(f"{name} {w} is not dominant")
    dec = tensor_decompose(cfg.lam, cfg.mu, with_charge=cfg.q, word=cfg.word)
    header = "nu,multiplicity" + (",q_polynomial" if cfg.q else "")
    lines = [header]
    for nu, mult, poly in dec.rows:
        row = ";".join(str(v) for v in nu) + f",{mult}"
        if cfg.q:
            row += "," + q_polynomial_text(poly)
        lines.append(row)
    print("\n".join(lines))
    if args.figure:
        from .plots import plot_multiplicities

        plot_multiplicities(dec.rows, args.figure, f"{cfg.lam} x {cfg.mu}")
    return EXIT_OK


def _dominant_weights(n: int, top: int):
    """Dominant weights with ``lam_n = 0`` and ``lam_1 <= top``."""
    def rec(prefix, bound, k):
        if k == 1:
            yield prefix + (0,)
            return
        for v in range(bound, -1, -1):
            yield from rec(prefix + (v,), v, k - 1)

    return list(rec((), top, n))


def cmd_verify(args) -> int:
    from .geometric import build_chart, verify_geometric_axioms
    from .kashiwara import highest_weight_elements, is_normal
    from .trop_crystal import default_trop_chart, enumerate_Blambda

    cfg = _config(args)
    _require_longest(cfg)
    x = build_chart(cfg.n, cfg.word)
    rep = verify_geometric_axioms(x, cfg.trials, cfg.seed)
    lines = ["check,result"]
    for line in rep.summary_lines():
        name, rest = line.split(": ", 1)
        lines.append(f"{name},{rest}")
    ok = rep.ok
    lams = [cfg.lam] if cfg.lam is not None else _dominant_weights(cfg.n, args.normal_top)
    tc = default_trop_chart(cfg.n, cfg.word)
    for lam in lams:
        b = enumerate_Blambda(tc, lam)
        norm = is_normal(b)
        hw = highest_weight_elements(b)
        good = norm.normal and (not is_dominant(lam) or (
            len(hw) == 1 and b.coords[hw[0]] == tuple(lam) + (0,) * x.ell))
        ok &= good
        label = ";".join(str(v) for v in lam)
        lines.append(f"normal B^{label} ({len(b)} elements),{'pass' if good else 'FAIL'}")
    print("\n".join(lines))
    print("overall," + ("pass" if ok else "FAIL"))
    return EXIT_OK if ok else EXIT_INTERNAL


def cmd_trop(args) -> int:
    from .tropical import trop

    if args.expr_file:
        text = Path(args.expr_file).read_text()
    elif args.expr is not None:
        text = args.expr
    else:
        raise ValidationError("--expr or --expr-file is required")
    f = parse(text, VariableContext())
    names = tuple(_int_free(args.vars)) if args.vars else tuple(sorted(f.variables(), key=_natural_key))
    missing = set(f.variables()) - set(names)
    if missing:
        raise ValidationError(f"variables {sorted(missing)} missing from --vars")
    tf = trop(f, names)
    if not args.at:
        raise ValidationError("at least one --at covector is required")
    lines = ["point,value"]
    for spec in args.at:
        pt = _int_tuple(spec)
        if len(pt) != len(names):
            raise ValidationError(f"covector {pt} has {len(pt)} entries, variables are {names}")
        lines.append(";".join(str(v) for v in pt) + f",{tf(pt)}")
    print(f"# variables: {';'.join(names)}")
    print("\n".join(lines))
    return EXIT_OK


def _int_free(text: str):
    return [p for p in re.split(r"[,\s]+", text.strip()) if p]


def cmd_character(args) -> int:
    from .kashiwara import character
    from .exact_algebra import to_text
    from .trop_crystal import default_trop_chart, enumerate_Blambda, multiplicity_csv

    cfg = _config(args)
    if cfg.lam is None:
        raise ValidationError("--lambda is required")
    _require_longest(cfg)
    crystal = enumerate_Blambda(default_trop_chart(cfg.n, cfg.word), cfg.lam)
    sys.stdout.write(multiplicity_csv(crystal))
    print(f"# character: {to_text(character(crystal, context=VariableContext()))}")
    if args.figure:
        from .plots import plot_crystal

        plot_crystal(crystal, args.figure, f"weights of B^{cfg.lam}")
    return EXIT_OK


def cmd_schubert(args) -> int:
    from .trop_crystal import schubert_crystal, weight_height

    cfg = _config(args)
    if cfg.word is None:
        raise ValidationError("--word is required")
    crystal = schubert_crystal(cfg.n, cfg.word, cfg.height_bound, context=VariableContext())
    from .kashiwara import is_normal

    rep = is_normal(crystal)
    summary = _crystal_summary(crystal) + [
        f"upper normal: {rep.upper_normal}", f"lower normal: {rep.lower_normal}"]
    _emit(_serialize(crystal, cfg.out), args.output, summary)
    if args.figure:
        from .plots import plot_depth_profile

        depths = -weight_height(crystal.weights) if len(crystal) else np.zeros(0)
        plot_depth_profile(depths, args.figure, f"w = {cfg.word}")
    return EXIT_OK if rep.upper_normal else EXIT_INTERNAL


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crystal", description="Tropical crystals of GL_n charts.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, lam=True, mu=False, out=True):
        sp.add_argument("--gl", type=int, required=True, help="rank n of GL_n")
        sp.add_argument("--word", help="reduced word, e.g. 1,2,1 (default 1,2,1,3,2,1,...)")
        if lam:
            sp.add_argument("--lambda", dest="lam", help="weight, e.g. 2,1,0 (use --lambda=-1,-2 for negatives)")
        if mu:
            sp.add_argument("--mu", help="second weight")
        if out:
            sp.add_argument("--out", choices=("json", "dot", "csv"), default="json")
            sp.add_argument("--output", "-o", help="artifact file (default: stdout)")
        sp.add_argument("--figure", help="write a matplotlib figure (PNG/PDF/SVG by suffix)")

    s = sub.add_parser("enum", help="enumerate B^lambda")
    common(s)
    s.set_defaults(func=cmd_enum)

    s = sub.add_parser("tensor", help="decompose B^lambda x B^mu")
    common(s, mu=True, out=False)
    s.add_argument("--q", action="store_true", help="add q-polynomials from the central charge")
    s.set_defaults(func=cmd_tensor)

    s = sub.add_parser("verify", help="randomized axiom checks and normality")
    common(s, out=False)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--normal-top", type=int, default=2,
                   help="check normality for dominant lambda with lambda_n = 0, lambda_1 <= this")
    s.set_defaults(func=cmd_verify, figure=None)

    s = sub.add_parser("trop", help="tropicalize a positive expression")
    s.add_argument("--expr", help="expression, e.g. 'x+y' or '1/c3 + c2/(c1*c3^2)'")
    s.add_argument("--expr-file", help="file containing the expression")
    s.add_argument("--vars", help="variable order (default: natural sort)")
    s.add_argument("--at", action="append", help="covector, e.g. 3,5 (repeatable; --at=-1,2)")
    s.set_defaults(func=cmd_trop)

    s = sub.add_parser("character", help="weight multiplicities of B^lambda")
    common(s, out=False)
    s.set_defaults(func=cmd_character)

    s = sub.add_parser("schubert", help="weight-truncated Schubert cell crystal")
    common(s, lam=False)
    s.add_argument("--height-bound", type=int, default=3)
    s.set_defaults(func=cmd_schubert)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValidationError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PositivityError, AlgebraError, RuntimeError, ArithmeticError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
