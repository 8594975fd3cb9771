"""Command line surface.

Five commands. "compute" runs the whole pipeline on one input (builtin
or JSON file): Lie model, homotopy ranks per weight, and the
pure-projective weight-window certificate. "validate" parses and checks
an input without computing anything. "minimal-model" reads a
filtered-complex document and prints its minimal model with the
inclusion that witnesses it. "selftest" runs fast end-to-end suites
with per-suite wall times, exercising every pillar against frozen
constants that the pytest oracles certify independently. "examples"
lists the builtin corpus.

Output formats: "human" prints small tables for reading, "canonical"
prints exactly one JSON document with sorted keys and no whitespace, so
identical input plus identical flags gives byte-identical bytes. Golden
tests pin the canonical form; never let incidental iteration order
reach it.

Exit codes: 0 success, 2 bad input (unreadable file, malformed
document, bad flag combination), 3 an internal invariant or a selftest
failed, 4 a resource bound tripped. Every failure prints one line to
stderr, "error[<category>]: <message>", and stdout stays clean; no
partial reports.

LIEMODEL_WORKERS (optional env var, default 1) lets selftest suites run
on a thread pool. Suite output order is fixed regardless of the worker
count.
"""

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .corpus import builtin_document, builtin_example, builtin_names
from .filtered import (FilteredComplex, check_mixed, contractible_pair,
                       direct_sum, e1_spectral_dims, filtered_document,
                       minimal_model, one_term_complex,
                       parse_filtered_document)
from .freelie import ResourceBoundExceeded
from .inputs import InputError, parse_document, parse_e1
from .linalg import format_scalar
from .quillen import (FAULT_HOOKS, ConstructionError, cobar_dgla,
                      cobar_dgla_e1, homotopy_groups, roundtrip_check)


@dataclass
class RunConfig:
    command: str
    input_path: str = None
    builtin: str = None
    max_degree: int = 6
    max_length: int = 8
    mode: str = "pure-projective"
    fmt: str = "human"
    suite: str = None
    inject_fault: str = None

    def __post_init__(self):
        if self.max_degree < 1:
            raise InputError(f"--max-degree must be >= 1, got {self.max_degree}")
        if self.max_length < 1:
            raise InputError(f"--max-length must be >= 1, got {self.max_length}")


def _canonical(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _load_document(cfg):
    """The raw input document, from --builtin or --input (exactly one)."""
    if (cfg.builtin is None) == (cfg.input_path is None):
        raise InputError("pass exactly one of --builtin NAME or --input PATH")
    if cfg.builtin is not None:
        return builtin_document(cfg.builtin)
    try:
        with open(cfg.input_path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {cfg.input_path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{cfg.input_path}: not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{cfg.input_path}: document must be a JSON object")
    return doc


def _weight_line(ranks):
    if not ranks:
        return "0"
    return ", ".join(f"{r} @ w={w}" for w, r in sorted(ranks.items()))


def cmd_compute(cfg, out):
    doc = _load_document(cfg)
    obj = parse_document(doc)
    report = homotopy_groups(
        obj, max_degree=cfg.max_degree, max_length=cfg.max_length,
        require_simply_connected=(cfg.mode == "simply-connected-only"))
    # The certificate always checks the pure-projective windows; for a
    # genuinely mixed input the violations list is the interesting output.
    report.mixedness = check_mixed(report)
    if cfg.fmt == "canonical":
        print(_canonical(report.to_document()), file=out)
        return 0
    print(f"input: {report.source} ({report.kind})", file=out)
    print(f"truncation: degree <= {report.max_degree}, "
          f"bracket length <= {report.max_length}", file=out)
    if not report.simply_connected and report.pi1:
        print("pi_1 associated graded, by bracket length:", file=out)
        for length in sorted(report.pi1):
            print(f"  length {length}: {_weight_line(report.pi1[length])}",
                  file=out)
    for n in sorted(report.pi):
        print(f"pi_{n}: {_weight_line(report.pi[n])}", file=out)
    if report.uncertified:
        pairs = ", ".join(f"(degree {n}, w={w})"
                          for n, w in report.uncertified)
        print(f"withheld (length cap too small to certify): {pairs}",
              file=out)
    verdict = report.mixedness
    if verdict.mixed:
        print("weights: inside the pure-projective windows everywhere",
              file=out)
    else:
        print(f"weights: {len(verdict.violations)} value(s) outside the "
              "pure-projective windows", file=out)
        for degree, weight, (lo, hi) in verdict.violations:
            print(f"  degree {degree}: weight {weight} outside [{lo}, {hi}]",
                  file=out)
    return 0


def cmd_validate(cfg, out):
    doc = _load_document(cfg)
    if doc.get("kind") == "filtered-complex":
        fc = parse_filtered_document(doc)
        name, kind, size = fc.source, "filtered-complex", fc.total_dim()
    else:
        obj = parse_document(doc)
        name, kind, size = obj.name, obj.kind, len(doc.get("classes", []))
    if cfg.fmt == "canonical":
        print(_canonical({"valid": True, "name": name, "kind": kind,
                          "classes": size}), file=out)
    else:
        print(f"valid: {name} ({kind}, {size} classes)", file=out)
    return 0


def cmd_minimal_model(cfg, out):
    if cfg.builtin is not None:
        raise InputError("minimal-model reads filtered-complex documents; "
                         "the builtins are algebra and page inputs")
    doc = _load_document(cfg)
    fc = parse_filtered_document(doc)
    mm = minimal_model(fc)
    if cfg.fmt == "canonical":
        inclusion = {}
        for n in sorted(mm.inclusion):
            mat = mm.inclusion[n]
            if mat.cols:
                inclusion[str(n)] = [[i, j, format_scalar(c)]
                                     for (i, j), c in sorted(mat.entries.items())]
        e1 = {f"{a},{b}": d
              for (a, b), d in sorted(e1_spectral_dims(mm.model).items())}
        print(_canonical({"model": filtered_document(mm.model),
                          "inclusion": inclusion, "e1": e1}), file=out)
        return 0
    print(f"input: {fc.source}, total dimension {fc.total_dim()}", file=out)
    print(f"minimal model: total dimension {mm.model.total_dim()}", file=out)
    for n in mm.model.degrees():
        levels = ", ".join(str(q) for q in mm.model.filtration[n])
        print(f"  degree {n}: dimension {mm.model.dim(n)} at level(s) {levels}",
              file=out)
    for (a, b), d in sorted(e1_spectral_dims(mm.model).items()):
        print(f"  E1^({a},{b}) = {d}", file=out)
    return 0


def cmd_examples(cfg, out):
    rows = []
    for name in builtin_names():
        doc = builtin_document(name)
        rows.append({"name": name, "kind": doc.get("kind", "algebra"),
                     "classes": len(doc["classes"])})
    if cfg.fmt == "canonical":
        print(_canonical({"examples": rows}), file=out)
        return 0
    width = max(len(r["name"]) for r in rows)
    for r in rows:
        print(f"{r['name']:<{width}}  {r['kind']:<7} {r['classes']:>3} classes",
              file=out)
    return 0


# ---------------------------------------------------------------------------
# selftest suites. Each returns a list of failure strings, empty on pass.
# The frozen constants below are certified by the independent oracles in
# the test suite (Witt/Moebius counts, the symmetric-algebra and
# one-relator series, the spectral bookkeeping); here they guard against
# regressions in a few seconds of wall time.

# A first page whose differential squares to zero only because the
# quadratic and linear parts of the dual differential cancel across the
# Leibniz rule. Any sign slip in the quadratic term breaks it, which is
# exactly what the --inject-fault=cobar-sign negative control relies on.
_SIGN_SENSITIVE_PAGE = {
    "kind": "e1",
    "name": "delta-product-page",
    "classes": [
        {"id": "1", "degree": [0, 0]},
        {"id": "a", "degree": [0, 1]},
        {"id": "b", "degree": [0, 2]},
        {"id": "c", "degree": [2, 1]},
        {"id": "e", "degree": [0, 3]},
        {"id": "f", "degree": [2, 2]},
    ],
    "products": [["a", "b", "e", "1"], ["b", "a", "e", "1"],
                 ["a", "c", "f", "1"], ["c", "a", "f", "-1"]],
    "delta": [["b", "c", "1"], ["e", "f", "-1"]],
}


def _suite_spheres():
    failures = []
    for k in range(2, 6):
        report = homotopy_groups(builtin_example(f"sphere-{k}"),
                                 max_degree=6, max_length=6)
        want = {k: 1}
        if k % 2 == 0 and 2 * k - 1 <= 6:
            want[2 * k - 1] = 1
        for n in range(2, 7):
            got = report.rank(n)
            if got != want.get(n, 0):
                failures.append(f"sphere-{k}: rank pi_{n} = {got}, "
                                f"want {want.get(n, 0)}")
        for n, ws in report.pi.items():
            for w in ws:
                if w != -2 * (n - 1) and w != -n:
                    # sphere weights sit at the window endpoints
                    failures.append(f"sphere-{k}: pi_{n} weight {w}")
    return failures


def _suite_cp():
    failures = []
    for m in (2, 3):
        report = homotopy_groups(builtin_example(f"cp-{m}"),
                                 max_degree=6, max_length=7)
        want = {2: 1}
        if 2 * m + 1 <= 6:
            want[2 * m + 1] = 1
        for n in range(2, 7):
            got = report.rank(n)
            if got != want.get(n, 0):
                failures.append(f"cp-{m}: rank pi_{n} = {got}, "
                                f"want {want.get(n, 0)}")
    return failures


# Witt-style grade ranks of the free rank-2 case, lengths 1..5.
_WITT_GRADES = {1: 2, 2: 1, 3: 2, 4: 3, 5: 6}


def _suite_witt():
    failures = []
    report = homotopy_groups(builtin_example("p1-minus-3-points"),
                             max_degree=1, max_length=5)
    for length, want in _WITT_GRADES.items():
        got = report.pi1_rank(length)
        if got != want:
            failures.append(f"p1-minus-3-points: length {length} rank {got}, "
                            f"want {want}")
        weights = set(report.pi1.get(length, ()))
        if weights != {-2 * length}:
            failures.append(f"p1-minus-3-points: length {length} weights "
                            f"{sorted(weights)}, want -2*{length}")
    if not check_mixed(report).mixed:
        failures.append("p1-minus-3-points: weight certificate failed")
    return failures


# Grade ranks of one-relator surface groups, lengths 1..3.
_SURFACE_GRADES = {"elliptic-curve": (2, 0, 0),
                   "genus-2-curve": (4, 5, 16),
                   "genus-3-curve": (6, 14, 64)}


def _suite_surfaces():
    failures = []
    for name, grades in _SURFACE_GRADES.items():
        report = homotopy_groups(builtin_example(name),
                                 max_degree=1, max_length=3)
        for length, want in enumerate(grades, start=1):
            got = report.pi1_rank(length)
            if got != want:
                failures.append(f"{name}: length {length} "
                                f"rank {got}, want {want}")
    return failures


def _suite_dsq():
    failures = []
    jobs = [(name, builtin_example(name)) for name in builtin_names()]
    jobs.append(("delta-product-page", parse_e1(_SIGN_SENSITIVE_PAGE)))
    for name, obj in jobs:
        try:
            if obj.kind == "algebra":
                cobar_dgla(obj, max_degree=4, max_length=4)
            else:
                cobar_dgla_e1(obj, max_degree=4, max_length=4)
        except ConstructionError as exc:
            failures.append(f"{name}: {exc}")
    return failures


def _suite_roundtrip():
    failures = []
    for name in ("sphere-2", "sphere-3", "cp-2", "wedge-of-spheres"):
        verdict = roundtrip_check(builtin_example(name), max_degree=6)
        if not verdict.match:
            failures.append(f"{name}: {verdict.reason or verdict.diffs}")
    return failures


def _suite_minimal():
    failures = []
    # hand-worked contraction: e in degree 0 kills g in degree 1, f in
    # degree 1 survives but its differential hits h, which drops a level
    fixture = parse_filtered_document({
        "kind": "filtered-complex", "name": "worked-contraction",
        "terms": {"0": [{"label": "e", "filtration": 1}],
                  "1": [{"label": "g", "filtration": 0},
                        {"label": "f", "filtration": 1}],
                  "2": [{"label": "h", "filtration": 1}]},
        "differential": {"0": [[0, 0, "1"]], "1": [[0, 1, "1"]]},
    })
    mm = minimal_model(fixture)
    if (mm.model.dim(0), mm.model.dim(1), mm.model.dim(2)) != (1, 1, 0):
        failures.append("worked-contraction: wrong model dimensions")
    if e1_spectral_dims(mm.model) != {(0, 1): 1, (-1, 1): 1}:
        failures.append("worked-contraction: first page mismatch")

    rng = random.Random(11)
    for trial in range(10):
        v = None
        expected = {}
        for _ in range(rng.randint(2, 6)):
            level = rng.randrange(0, 3)
            if rng.random() < 0.5:
                n = rng.randrange(0, 4)
                piece = one_term_complex(n, level)
                expected[(n, level)] = expected.get((n, level), 0) + 1
            else:
                piece = contractible_pair(rng.randrange(1, 4), level)
            v = piece if v is None else direct_sum(v, piece)
        mm = minimal_model(v)
        if mm.model.level_dims() != expected:
            failures.append(f"sum trial {trial}: model {mm.model.level_dims()}"
                            f", want {expected}")
        if not mm.model.is_minimal():
            failures.append(f"sum trial {trial}: model not minimal")
        again = minimal_model(mm.model)
        if again.model.level_dims() != expected:
            failures.append(f"sum trial {trial}: not idempotent")
    return failures


SUITES = (("spheres", _suite_spheres),
          ("cp", _suite_cp),
          ("witt", _suite_witt),
          ("surfaces", _suite_surfaces),
          ("dsq", _suite_dsq),
          ("roundtrip", _suite_roundtrip),
          ("minimal", _suite_minimal))


def _worker_count():
    raw = os.environ.get("LIEMODEL_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"LIEMODEL_WORKERS={raw!r} is not an integer") from None
    if n < 1:
        raise InputError(f"LIEMODEL_WORKERS must be >= 1, got {n}")
    return n


def cmd_selftest(cfg, out):
    chosen = [(name, fn) for name, fn in SUITES
              if cfg.suite is None or cfg.suite == name]
    if not chosen:
        known = ", ".join(name for name, _ in SUITES)
        raise InputError(f"unknown suite {cfg.suite!r} (have: {known})")
    if cfg.inject_fault is not None:
        if cfg.inject_fault != "cobar-sign":
            raise InputError(f"unknown fault {cfg.inject_fault!r}")
        FAULT_HOOKS[cfg.inject_fault] = True

    def run(pair):
        name, fn = pair
        start = time.perf_counter()
        try:
            fails = fn()
        except (AssertionError, ConstructionError) as exc:
            fails = [f"{name}: construction failed: {exc}"]
        return name, fails, time.perf_counter() - start

    try:
        workers = _worker_count()
        if workers > 1 and len(chosen) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(run, chosen))
        else:
            rows = [run(pair) for pair in chosen]
    finally:
        FAULT_HOOKS.pop("cobar-sign", None)

    if cfg.fmt == "canonical":
        # no timings in canonical output, they are not deterministic
        doc = {"suites": [{"name": name, "pass": not fails,
                           "failures": fails}
                          for name, fails, _ in rows]}
        print(_canonical(doc), file=out)
    else:
        for name, fails, dt in rows:
            status = "pass" if not fails else "FAIL"
            print(f"{name:<10} {status}  {dt:7.2f}s", file=out)
            for line in fails:
                print(f"    {line}", file=out)
    if any(fails for _, fails, _ in rows):
        first = next(f[0] for _, f, _ in rows if f)
        print(f"error[assertion-failure]: selftest: {first}", file=sys.stderr)
        return 3
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="liemodel",
        description="exact homotopy Lie models of weight-graded algebras "
                    "and first pages")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, with_input=True):
        if with_input:
            p.add_argument("--input", dest="input_path", metavar="PATH",
                           help="JSON input document")
            p.add_argument("--builtin", metavar="NAME",
                           help="builtin example (see the examples command)")
        p.add_argument("--format", dest="fmt", choices=("human", "canonical"),
                       default="human",
                       help="canonical = one JSON line, byte-stable")

    p = sub.add_parser("compute", help="homotopy ranks per weight")
    add_common(p)
    p.add_argument("--max-degree", type=int, default=6, metavar="N",
                   help="truncate above this degree (default 6)")
    p.add_argument("--max-length", type=int, default=8, metavar="L",
                   help="truncate brackets above this length (default 8)")
    p.add_argument("--mode", choices=("pure-projective", "simply-connected-only"),
                   default="pure-projective",
                   help="simply-connected-only rejects degree <= 1 classes")

    p = sub.add_parser("validate", help="parse and check an input document")
    add_common(p)

    p = sub.add_parser("minimal-model",
                       help="minimal model of a filtered-complex document")
    add_common(p)

    p = sub.add_parser("selftest", help="fast end-to-end suites")
    p.add_argument("--suite", metavar="NAME", help="run only this suite")
    p.add_argument("--inject-fault", dest="inject_fault",
                   help=argparse.SUPPRESS)
    add_common(p, with_input=False)

    p = sub.add_parser("examples", help="list the builtin corpus")
    add_common(p, with_input=False)
    return ap


HANDLERS = {"compute": cmd_compute, "validate": cmd_validate,
            "minimal-model": cmd_minimal_model, "selftest": cmd_selftest,
            "examples": cmd_examples}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            input_path=getattr(args, "input_path", None),
            builtin=getattr(args, "builtin", None),
            max_degree=getattr(args, "max_degree", 6),
            max_length=getattr(args, "max_length", 8),
            mode=getattr(args, "mode", "pure-projective"),
            fmt=getattr(args, "fmt", "human"),
            suite=getattr(args, "suite", None),
            inject_fault=getattr(args, "inject_fault", None))
        return HANDLERS[cfg.command](cfg, sys.stdout)
    except InputError as exc:
        print(f"error[input-error]: {exc}", file=sys.stderr)
        return 2
    except ResourceBoundExceeded as exc:
        print(f"error[resource-bound-exceeded]: {exc}", file=sys.stderr)
        return 4
    except (AssertionError, ConstructionError) as exc:
        print(f"error[assertion-failure]: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
