"""Command-line front end.

Every subcommand reads a ring-definition file (the bundled one when no
path is given), runs one analysis, and prints either aligned text or,
with ``--json``, a machine-readable report.  Exit codes are a stable
contract: 0 when every check passes, 1 when a check fails, 2 when the
input cannot be loaded or validated.
"""
from __future__ import annotations

import argparse
import sys

from . import ringfile
from .algebra import Polynomial, parse_polynomial
from .errors import (DefinitionFileError, DescentError, DifferentialError,
                     F2CohError, NZDViolationError)
from .report import Report
from .rings import (ideal_slice_in_quotient, morphism_check, morphism_rank,
                    nilradical_slice)
from .series import series_equal
from .spectral import (PERMANENT, bockstein_collapses, bockstein_pages,
                       einfty_nilpotence_report, page_series,
                       run_transgression_script, serre_total)
from .steenrod import q_cohomology
from .suite import run_suite

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="f2coh",
        description="Exact mod-2 graded ring calculations driven by a "
                    "definition file.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("file", nargs="?", default=None,
                        help="definition file (default: the bundled one)")
        sp.add_argument("--json", action="store_true",
                        help="emit a machine-readable report")
        sp.add_argument("--up-to", type=int, default=None, metavar="D",
                        help="working degree bound (default: the file's "
                             "truncation)")
        return sp

    sp = command("hilbert", "dimension series of a ring, degree by degree")
    sp.add_argument("--ring", required=True, help="ring name from the file")

    sp = command("nilradical", "nilpotent slices of a ring, with the degrees "
                               "where new generators appear")
    sp.add_argument("--ring", required=True, help="ring name from the file")

    sp = command("qcohomology", "kernel-mod-image dimensions of a declared "
                                "derivation")
    sp.add_argument("--ring", required=True, help="ring name from the file")
    sp.add_argument("--derivation", required=True,
                    help="derivation name declared on that ring")

    sp = command("nilpotency", "squares and nilpotency verdicts for the "
                               "file's limit classes")
    sp.add_argument("--ring", default=None,
                    help="ring to evaluate in (default: the last family ring)")
    sp.add_argument("--derivation", default=None,
                    help="derivation for the cycle check (default: the "
                         "file's choice)")

    sp = command("morphism", "well-definedness and per-degree rank of a "
                             "declared morphism")
    sp.add_argument("name", nargs="?", default=None,
                    help="morphism name (default: the file's choice)")

    command("serre", "run the transgression script and print each page "
                     "series")

    sp = command("bockstein", "tower pages for a ring and derivation, with "
                              "the parity-collapse verdict")
    sp.add_argument("--ring", default=None,
                    help="ring name (default: the last family ring)")
    sp.add_argument("--derivation", default=None,
                    help="derivation name (default: the file's choice)")

    command("verify-paper", "run the file's complete check suite")
    return parser


def _load(args) -> ringfile.Definition:
    path = args.file if args.file is not None else ringfile.bundled_path()
    return ringfile.load_definition(path)


def _emit(rep: Report, args) -> int:
    sys.stdout.write(rep.render_json() if args.json else rep.render_text())
    return rep.exit_code


def _verify(defn: ringfile.Definition):
    if defn.verify is None:
        raise DefinitionFileError("this file has no verify section")
    return defn.verify


def _family_ring(defn: ringfile.Definition, override: str | None) -> str:
    if override is not None:
        return override
    return _verify(defn).family[2]


def _ring_floor(defn: ringfile.Definition, name: str) -> int:
    """Smallest bound the presentation itself is valid at."""
    blk = defn.block(name)
    floor = max(blk.table.degrees)
    for rel in blk.relations:
        floor = max(floor, rel.degree)
    return floor


def _build_ring(defn: ringfile.Definition, name: str, bound: int):
    """Build at the display bound, raised to the presentation's floor."""
    return defn.ring(name, max(bound, _ring_floor(defn, name)))


def _derivation_name(defn: ringfile.Definition, override: str | None) -> str:
    if override is not None:
        return override
    return _verify(defn).derivation


def cmd_hilbert(args) -> int:
    defn = _load(args)
    bound = args.up_to if args.up_to is not None else defn.truncation
    ring = _build_ring(defn, args.ring, bound)
    coeffs = ring.hilbert().coefficients[:bound + 1]
    declared = defn.block(args.ring).declared_series

    rep = Report("hilbert", (("ring", args.ring), ("up_to", bound)))
    rep.ok("coefficients", {"coefficients": list(coeffs)})
    cmp = None
    if declared is not None:
        cmp = series_equal(coeffs, declared, up_to=bound)
        payload = {"form": str(declared)}
        if cmp:
            rep.ok("declared-series", payload, "expansion matches")
        else:
            payload["first_mismatch_degree"] = cmp.first_mismatch
            rep.fail("declared-series", payload, "expansion differs")

    if args.json:
        sys.stdout.write(rep.render_json())
    else:
        print(" ".join(str(c) for c in coeffs))
        if declared is not None:
            verdict = ("match" if cmp else
                       f"mismatch at degree {cmp.first_mismatch}")
            print(f"declared form {declared}: {verdict}")
    return rep.exit_code


def cmd_nilradical(args) -> int:
    defn = _load(args)
    bound = args.up_to if args.up_to is not None else defn.truncation // 2
    ring = defn.ring(args.ring, max(defn.truncation, 2 * bound))

    dims = []
    found = []
    lower: list[Polynomial] = []
    for d in range(1, bound + 1):
        s = nilradical_slice(ring, d)
        dims.append(s.dim)
        below = ideal_slice_in_quotient(ring, lower, d).dim if lower else 0
        if s.dim > below:
            found.append(f"degree {d}: {s.dim - below}")
        for i in range(s.dim):
            lower.append(ring.from_coords(s.space.matrix.row(i), d))

    rep = Report("nilradical", (("ring", args.ring), ("up_to", bound)))
    rep.ok("slice-dims", {"dims": dims},
           "nilpotent subspace dimension per degree, starting at degree 1")
    rep.ok("new-generators", {"found": found or ["none"]},
           "degrees where the nilradical needs fresh generators")

    v = defn.verify
    if v is not None and v.nilradical_ring == args.ring:
        gens = [v.elements[label].value for label in v.nilradical_generators]
        compare_to = min(bound, v.nilradical_up_to)
        mismatch = None
        for d in range(1, compare_to + 1):
            want = ideal_slice_in_quotient(ring, gens, d)
            if nilradical_slice(ring, d).space != want.space:
                mismatch = d
                break
        payload = {"generators": list(v.nilradical_generators),
                   "compared_up_to": compare_to}
        if mismatch is None:
            rep.ok("ideal-comparison", payload,
                   "slices equal the declared-generator ideal")
        else:
            payload["first_mismatch_degree"] = mismatch
            rep.fail("ideal-comparison", payload,
                     "slices differ from the declared-generator ideal")
    return _emit(rep, args)


def cmd_qcohomology(args) -> int:
    defn = _load(args)
    bound = args.up_to if args.up_to is not None else defn.truncation
    ring = _build_ring(defn, args.ring, bound)
    der = defn.derivation(args.ring, args.derivation)
    h = q_cohomology(ring, der)
    top = h.top_degree
    nonedge = top - der.shift

    rep = Report("qcohomology", (("ring", args.ring),
                                 ("derivation", args.derivation),
                                 ("up_to", bound)))
    rep.ok("dims", {"dims": list(h.dims), "evaluated_up_to": top},
           "cohomology dimension per degree")
    rep.add("edge-window", "edge-excluded",
            {"degrees": f"{nonedge + 1}..{top}"},
            "incoming images here are outside the verification window")

    v = defn.verify
    if v is not None and args.ring in v.family and args.derivation == v.derivation:
        form = v.q_series[v.family.index(args.ring)]
        cmp = series_equal(h.dims[:nonedge + 1], form.expand(nonedge),
                           up_to=nonedge)
        payload = {"form": str(form), "compared_up_to": nonedge}
        if cmp:
            rep.ok("declared-series", payload, "expansion matches off the edge")
        else:
            payload["first_mismatch_degree"] = cmp.first_mismatch
            rep.fail("declared-series", payload, "expansion differs")
    return _emit(rep, args)


def cmd_nilpotency(args) -> int:
    defn = _load(args)
    v = _verify(defn)
    rname = _family_ring(defn, args.ring)
    bound = args.up_to if args.up_to is not None else defn.truncation
    ring = _build_ring(defn, rname, bound)
    der = defn.derivation(rname, _derivation_name(defn, args.derivation))
    classes = [v.elements[label].value for label in v.limit_classes]
    entries = einfty_nilpotence_report(ring, classes, q0=der,
                                       labels=list(v.limit_classes))

    rep = Report("nilpotency", (("ring", rname), ("up_to", bound)))
    for entry in entries:
        payload = {"square": str(entry.square)}
        if entry.witnessed:
            payload["order"] = entry.order
            rep.ok(entry.label, payload,
                   "nilpotent; order is the least vanishing power of two")
        else:
            rep.ok(entry.label, payload,
                   "no power of two vanishes within the bound; verdict is "
                   "one-sided")
    return _emit(rep, args)


def cmd_morphism(args) -> int:
    defn = _load(args)
    name = args.name
    if name is None:
        if defn.verify is not None:
            name = defn.verify.morphism
        elif len(defn.morphisms) == 1:
            name = next(iter(defn.morphisms))
        else:
            raise DefinitionFileError(
                "several morphisms are defined; name one")
    bound = args.up_to if args.up_to is not None else defn.truncation
    mb = defn.morphisms.get(name)
    build = bound
    if mb is not None:
        build = max(bound, _ring_floor(defn, mb.source),
                    _ring_floor(defn, mb.target))
    eta = defn.morphism(name, build)

    rep = Report("morphism", (("name", name), ("up_to", bound)))
    chk = morphism_check(eta)
    if chk.ok:
        rep.ok("well-defined", {"relations": len(eta.source.relations)},
               "every relation maps to zero in the target")
    else:
        rep.fail("well-defined",
                 {"failures": [f"relation {i}: {img}" for i, img in chk.failures]},
                 "a relation has a nonzero image")

    ranks = [morphism_rank(eta, d) for d in range(bound + 1)]
    drop = next((r.degree for r in ranks if not r.injective), None)
    if drop is None:
        rep.ok("injective", {"degrees_checked": bound},
               "full rank in every degree")
    else:
        rep.fail("injective", {"first_failure_degree": drop},
                 "rank drops below the source dimension")
    rep.ok("image-dims", {"dims": [r.rank for r in ranks]},
           "rank of the induced map per degree")
    return _emit(rep, args)


def cmd_serre(args) -> int:
    defn = _load(args)
    if defn.serre is None:
        raise DefinitionFileError("this file has no serre script")
    bound = args.up_to if args.up_to is not None else defn.truncation
    table = defn.block(defn.serre.base).table
    floor = _ring_floor(defn, defn.serre.base)
    for step in defn.serre.steps:
        if step.strip() != PERMANENT:
            floor = max(floor, parse_polynomial(step, table).degree)
    base = defn.ring(defn.serre.base, max(bound, floor))
    rep = Report("serre", (("base", defn.serre.base), ("up_to", bound)))
    try:
        chain = run_transgression_script(base, defn.serre.steps)
    except NZDViolationError as exc:
        rep.fail("script", {"failure_degree": exc.degree}, str(exc))
        return _emit(rep, args)

    forms = defn.verify.page_series if defn.verify is not None else None
    for i, state in enumerate(chain):
        series = page_series(state, bound)
        label = 2 if i == 0 else 2 ** (i - 1) + 2
        name = f"page-{label}"
        payload = {"fiber_degree": state.fiber_degree,
                   "coefficients": list(series.coefficients)}
        note = "series of this page"
        if forms is not None and 1 <= i <= len(forms):
            cmp = series_equal(series, forms[i - 1], up_to=bound)
            payload["form"] = str(forms[i - 1])
            if cmp:
                note = "series of this page; declared form matches"
                rep.ok(name, payload, note)
            else:
                payload["first_mismatch_degree"] = cmp.first_mismatch
                rep.fail(name, payload, "declared form differs")
            continue
        rep.ok(name, payload, note)
    if chain[-1].is_permanent:
        total = serre_total(chain[-1], bound)
        rep.ok("limit", {"coefficients": list(total.coefficients)},
               "series of the limit, fiber tower included")
    return _emit(rep, args)


def cmd_bockstein(args) -> int:
    defn = _load(args)
    rname = _family_ring(defn, args.ring)
    bound = args.up_to if args.up_to is not None else defn.truncation
    ring = _build_ring(defn, rname, bound)
    der = defn.derivation(rname, _derivation_name(defn, args.derivation))
    pages = bockstein_pages(ring, der, max_page=2)

    rep = Report("bockstein", (("ring", rname), ("derivation", der.name),
                               ("up_to", bound)))
    for page in pages:
        payload = {"dims": list(page.dims)}
        if page.fates:
            payload["fates"] = [f"{n}: {fate}" for n, fate in page.fates]
        rep.ok(f"page-{page.number}", payload, page.note)
    if bockstein_collapses(pages):
        rep.ok("parity-collapse", None,
               "page two is concentrated in even degrees; the tower "
               "collapses there")
    else:
        rep.fail("parity-collapse", None,
                 "page two has odd-degree classes; no collapse certificate")
    return _emit(rep, args)


def cmd_verify_paper(args) -> int:
    defn = _load(args)
    if args.up_to is not None:
        defn.truncation = args.up_to
    rep = run_suite(defn)
    return _emit(rep, args)


_DISPATCH = {
    "hilbert": cmd_hilbert,
    "nilradical": cmd_nilradical,
    "qcohomology": cmd_qcohomology,
    "nilpotency": cmd_nilpotency,
    "morphism": cmd_morphism,
    "serre": cmd_serre,
    "bockstein": cmd_bockstein,
    "verify-paper": cmd_verify_paper,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except (DescentError, DifferentialError, NZDViolationError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except F2CohError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
