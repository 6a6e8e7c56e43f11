"""End-to-end verification over a definition file.

``run_suite`` executes a fixed sequence of checks against the rings,
operation tables, transgression script, morphisms and derived
invariants a definition file declares, and assembles a deterministic
Report.  Declared series are compared against exact expansions,
membership questions are decided by elimination, and every identity is
evaluated in the field of two elements with zero tolerance.

Three inputs are structurally outside what the engine can verify and
are reported with status ``assumed`` instead of being silently
trusted: the declared homogeneous forms of the relations, the
permanence of the final fiber power, and the derivation value declared
on the generator no operation table covers.

The suite expects the ``verify`` section to follow the bundled shape:
a product ring with an operation table, a three-ring family adding one
relation at a time, a transgression script whose first step seeds the
later ones, a morphism out of the last family ring, and named elements
for the nilradical and limit-class lists.
"""
from __future__ import annotations

import os

from ._kernels import BACKEND
from .algebra import Polynomial, parse_polynomial
from .errors import DefinitionFileError, DescentError, DifferentialError, F2CohError
from .report import Report
from .ringfile import Definition, VerifyBlock
from .rings import (ideal_slice_in_quotient, is_nonzerodivisor,
                    morphism_check, morphism_rank, nilpotency_order,
                    nilradical_slice)
from .series import RationalForm, series_equal
from .spectral import (PERMANENT, bockstein_collapses, bockstein_pages,
                       einfty_nilpotence_report, page_series,
                       run_transgression_script, serre_total)
from .steenrod import composite_square_check, milnor_q, q_cohomology, sq

__all__ = ["run_suite"]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DefinitionFileError(message)


def _series_payload(form: RationalForm, cmp) -> dict:
    out = {"form": str(form), "compared_up_to": cmp.bound}
    if cmp.first_mismatch is not None:
        out["first_mismatch_degree"] = cmp.first_mismatch
    return out


def _square_table_selftests(rep: Report, spec) -> None:
    """Identities the operation table must satisfy beyond construction.

    Construction already enforces that Sq^0 fixes each generator and
    that the top square is the Frobenius square.  Here two classical
    composite identities are evaluated on every generator: Sq1 Sq1 = 0
    and Sq2 Sq2 = Sq3 Sq1.
    """
    bad = []
    for name in spec.table.names:
        g = Polynomial.generator(spec.table, name)
        if not sq(1, sq(1, g, spec), spec).is_zero:
            bad.append((name, "Sq1 Sq1"))
        lhs = sq(2, sq(2, g, spec), spec)
        rhs = sq(3, sq(1, g, spec), spec)
        if lhs != rhs:
            bad.append((name, "Sq2 Sq2 = Sq3 Sq1"))
    payload = {"generators": len(spec.table),
               "identities": ["Sq1 Sq1 = 0", "Sq2 Sq2 = Sq3 Sq1"]}
    if bad:
        payload["violations"] = [f"{n}: {what}" for n, what in bad]
        rep.fail("square-tables", payload, "composite identities violated")
    else:
        rep.ok("square-tables", payload, "composite identities hold on every generator")


def _composite_square_rule(rep: Report, defn: Definition, v: VerifyBlock,
                           k_values: tuple[int, ...]) -> None:
    """The recursion route equals the iterated-square route.

    Exhaustive over the full degree-2 component of the product ring,
    zero included, for each requested index.
    """
    spec = defn.block(v.product).steenrod
    free = defn.ring(v.product)
    basis = free.basis(2)
    elements = []
    for mask in range(1 << len(basis)):
        picked = [basis[i] for i in range(len(basis)) if mask >> i & 1]
        elements.append(Polynomial.from_monomials(spec.table, picked))
    failures = 0
    for x in elements:
        for k in k_values:
            if not composite_square_check(spec, x, k):
                failures += 1
    payload = {"elements": len(elements), "indices": list(k_values)}
    if failures:
        payload["failures"] = failures
        rep.fail("composite-square-rule", payload,
                 "recursion and iterated squares disagree")
    else:
        rep.ok("composite-square-rule", payload,
               "recursion equals the iterated-square composite")


def _congruences(rep: Report, defn: Definition, v: VerifyBlock) -> None:
    """The script's later steps are the Milnor images of the first.

    Step two must be the first derivation image exactly; each further
    step must agree with the next image modulo the ideal generated by
    everything transgressed before it.
    """
    spec = defn.block(v.product).steenrod
    table = spec.table
    free = defn.ring(v.product)
    steps = [parse_polynomial(s, table)
             for s in defn.serre.steps if s != PERMANENT]
    seed = steps[0]

    q0_image = milnor_q(0, seed, spec)
    if q0_image == steps[1]:
        rep.ok("q0-identity", {"value": str(q0_image)},
               "first derivation image equals the second step exactly")
    else:
        rep.fail("q0-identity", {"value": str(q0_image),
                                 "step": str(steps[1])},
                 "first derivation image differs from the second step")

    ideal = [seed, steps[1]]
    for idx in range(2, len(steps)):
        i = idx - 1
        name = f"q{i}-congruence"
        target = steps[idx]
        image = milnor_q(i, seed, spec)
        d = target.degree
        slice_ = ideal_slice_in_quotient(free, ideal, d)
        member = slice_.contains(free.coords(image + target, d))
        payload = {"degree": d, "modulo": [str(p) for p in ideal]}
        if member:
            rep.ok(name, payload,
                   f"image q{i} of the seed reduces to the step modulo "
                   "the earlier ones")
        else:
            rep.fail(name, payload,
                     f"image q{i} of the seed is not congruent to the step")
        ideal.append(image)


def _regular_sequence(rep: Report, defn: Definition, v: VerifyBlock) -> None:
    for i in (1, 2):
        prev = defn.ring(v.family[i - 1])
        rel = defn.block(v.family[i]).relations[i - 1]
        res = is_nonzerodivisor(rel, prev)
        payload = {"relation": str(rel), "checked_up_to": res.checked_up_to}
        name = f"regular-sequence-{i}"
        if res.ok:
            rep.ok(name, payload, "multiplication is injective at every "
                                  "checkable degree")
        else:
            payload["failure_degrees"] = list(res.failures)
            rep.fail(name, payload, "multiplication map has a kernel")


def _serre_chain(rep: Report, defn: Definition, v: VerifyBlock, bound: int):
    """Run the script and compare each resulting page series."""
    names = [f"page-{2 ** (i - 1) + 2}-series"
             for i in range(1, len(v.page_series) + 1)]
    try:
        chain = run_transgression_script(defn.ring(v.product), defn.serre.steps)
    except F2CohError as exc:
        for i, name in enumerate(names):
            rep.fail(name, {"form": str(v.page_series[i])},
                     f"script did not run: {exc}")
        rep.fail("fiber-permanence", None, f"script did not run: {exc}")
        rep.fail("limit-vs-presentation", None, f"script did not run: {exc}")
        return None

    for i, (name, form) in enumerate(zip(names, v.page_series), start=1):
        got = page_series(chain[i], bound)
        cmp = series_equal(got, form, up_to=bound)
        if cmp:
            rep.ok(name, _series_payload(form, cmp),
                   "computed page series equals the declared form")
        else:
            rep.fail(name, _series_payload(form, cmp),
                     "computed page series differs from the declared form")

    rep.assumed("fiber-permanence",
                {"fiber_degree": chain[-1].fiber_degree},
                "the script declares the final fiber power permanent; "
                "taken as an input, its numeric consequence is the next check")

    total = serre_total(chain[-1], bound)
    presentation = defn.ring(v.family[2]).hilbert()
    cmp = series_equal(total, presentation, up_to=bound)
    declared = defn.block(v.family[2]).declared_series
    payload = {"compared_up_to": bound}
    if declared is not None:
        payload["form"] = str(declared)
        cmp2 = series_equal(total, declared, up_to=bound)
    else:
        cmp2 = cmp
    if cmp and cmp2:
        rep.ok("limit-vs-presentation", payload,
               "limit of the tower equals the presentation series")
    else:
        first = cmp.first_mismatch if not cmp else cmp2.first_mismatch
        payload["first_mismatch_degree"] = first
        rep.fail("limit-vs-presentation", payload,
                 "limit of the tower differs from the presentation series")
    return chain


def _morphism_checks(rep: Report, defn: Definition, v: VerifyBlock,
                     bound: int) -> None:
    eta = defn.morphism(v.morphism)
    chk = morphism_check(eta)
    name = v.morphism
    if chk.ok:
        rep.ok(f"{name}-well-defined",
               {"relations": len(eta.source.relations)},
               "every relation maps to zero in the target")
    else:
        rep.fail(f"{name}-well-defined",
                 {"failures": [f"relation {i}: {img}" for i, img in chk.failures]},
                 "a relation has a nonzero image")

    ranks = []
    dims = []
    first_drop = None
    for d in range(bound + 1):
        mr = morphism_rank(eta, d)
        ranks.append(mr.rank)
        dims.append(mr.source_dim)
        if first_drop is None and not mr.injective:
            first_drop = d
    if first_drop is None:
        rep.ok(f"{name}-injective", {"degrees_checked": bound},
               "full rank in every degree")
    else:
        rep.fail(f"{name}-injective",
                 {"degrees_checked": bound, "first_failure_degree": first_drop},
                 "rank drops below the source dimension")

    if ranks == dims:
        rep.ok(f"{name}-image-series", {"compared_up_to": bound},
               "image series equals the source series")
    else:
        first = next(d for d in range(bound + 1) if ranks[d] != dims[d])
        rep.fail(f"{name}-image-series",
                 {"compared_up_to": bound, "first_mismatch_degree": first},
                 "image series differs from the source series")


def _nilradical(rep: Report, defn: Definition, v: VerifyBlock) -> None:
    ring = defn.ring(v.nilradical_ring)
    gens = [v.elements[label].value for label in v.nilradical_generators]
    payload = {"generators": list(v.nilradical_generators),
               "up_to": v.nilradical_up_to}
    try:
        dims = []
        first_nonzero = None
        for d in range(1, v.nilradical_up_to + 1):
            got = nilradical_slice(ring, d)
            want = ideal_slice_in_quotient(ring, gens, d)
            if got.space != want.space:
                payload["first_mismatch_degree"] = d
                payload["slice_dim"] = got.dim
                payload["ideal_dim"] = want.dim
                rep.fail("nilradical-slices", payload,
                         "nilpotent slice differs from the ideal slice")
                return
            dims.append(got.dim)
            if first_nonzero is None and got.dim:
                first_nonzero = d
    except F2CohError as exc:
        rep.fail("nilradical-slices", payload, f"not evaluated: {exc}")
        return
    payload["first_nonzero_degree"] = first_nonzero
    payload["dims"] = dims
    rep.ok("nilradical-slices", payload,
           "nilpotent slices equal the ideal slices degree by degree")


def _derivation_origin(rep: Report, defn: Definition, v: VerifyBlock) -> None:
    """Split the derivation table into derived and declared values.

    Values on generators shared with the product's operation table must
    equal the degree-one square of the generator there; values on the
    remaining generators are inputs and are reported as assumed.
    """
    spec = defn.block(v.product).steenrod
    fam_table = defn.block(v.family[0]).table
    der = defn.derivation(v.family[0], v.derivation)
    shared = set(spec.table.names)
    mismatched = []
    uncovered = []
    for name, value in zip(fam_table.names, der.values):
        if name in shared:
            g = Polynomial.generator(spec.table, name)
            if str(value) != str(sq(1, g, spec)):
                mismatched.append(name)
        else:
            uncovered.append((name, str(value)))
    name = f"{v.derivation}-matches-square-rule"
    payload = {"generators_covered": len(fam_table) - len(uncovered)}
    if mismatched:
        payload["mismatched"] = mismatched
        rep.fail(name, payload,
                 "derivation values disagree with the operation table")
    else:
        rep.ok(name, payload,
               "derivation values on covered generators equal their "
               "degree-one squares")
    for gname, value in uncovered:
        rep.assumed(f"{v.derivation}-{gname}-declared", {"value": value},
                    f"the value on {gname} is a declared input; no operation "
                    "table covers it")


def _cohomology_block(rep: Report, defn: Definition, v: VerifyBlock):
    """Descent, square-zero, per-ring series and the splice identities."""
    hs = []
    descent_failures = []
    square_failures = []
    for rname in v.family:
        try:
            hs.append(q_cohomology(defn.ring(rname),
                                   defn.derivation(rname, v.derivation)))
        except DescentError as exc:
            descent_failures.append(f"{rname}: {exc}")
            hs.append(None)
        except DifferentialError as exc:
            square_failures.append(f"{rname}: {exc}")
            hs.append(None)

    dname = v.derivation
    if descent_failures:
        rep.fail(f"{dname}-descends", {"failures": descent_failures},
                 "the derivation does not descend everywhere")
    else:
        rep.ok(f"{dname}-descends", {"rings": list(v.family)},
               "the derivation maps every relation into its ideal")
    if square_failures:
        rep.fail("differential-square-zero", {"failures": square_failures},
                 "the induced differential does not square to zero")
    else:
        rep.ok("differential-square-zero", {"rings": list(v.family)},
               "the induced differential squares to zero on every ring")

    edges = {}
    for rname, h, form in zip(v.family, hs, v.q_series):
        name = f"h-series-{rname}"
        if h is None:
            rep.fail(name, {"form": str(form)}, "not evaluated")
            continue
        top = h.top_degree - h.differential.shift
        edges[rname] = f"{top + 1}..{h.top_degree}"
        cmp = series_equal(h.dims[:top + 1], form.expand(top), up_to=top)
        odd_bad = [d for d in range(1, top + 1, 2) if h.dims[d] != 0]
        payload = _series_payload(form, cmp)
        if odd_bad:
            payload["odd_nonzero_degrees"] = odd_bad
        if cmp and not odd_bad:
            rep.ok(name, payload, "cohomology dims equal the declared form; "
                                  "odd degrees vanish")
        else:
            rep.fail(name, payload, "cohomology dims differ from the "
                                    "declared form")
    if edges:
        rep.add("edge-window", "edge-excluded", edges,
                "incoming images at these degrees are outside the "
                "verification window and are excluded from comparisons")

    if all(h is not None for h in hs):
        identities = []
        ok = True
        detail = {}
        for i in (1, 2):
            shift = defn.block(v.family[i]).relations[i - 1].degree - 1
            lo, hi = hs[i - 1], hs[i]
            top = min(lo.top_degree - lo.differential.shift,
                      hi.top_degree - hi.differential.shift)
            for d in range(top + 1):
                below = lo.dims[d - shift] if d >= shift else 0
                if hi.dims[d] != lo.dims[d] + below:
                    ok = False
                    detail.setdefault("first_failure", f"step {i}, degree {d}")
                    break
            identities.append(f"h[{v.family[i]}] = h[{v.family[i - 1]}] "
                              f"+ h[{v.family[i - 1]}] shifted by {shift}")
        payload = {"identities": identities, **detail}
        if ok:
            rep.ok("les-consistency", payload,
                   "splice identities hold at every evaluable degree")
        else:
            rep.fail("les-consistency", payload, "a splice identity fails")
    else:
        rep.fail("les-consistency", None, "not evaluated")
    return hs


def _bockstein(rep: Report, defn: Definition, v: VerifyBlock, h2) -> None:
    ring = defn.ring(v.family[2])
    der = defn.derivation(v.family[2], v.derivation)
    form = v.q_series[2]
    if h2 is None:
        rep.fail("bockstein-parity", None, "not evaluated")
        rep.fail("bockstein-limit-series", {"form": str(form)}, "not evaluated")
        return
    pages = bockstein_pages(ring, der, max_page=2, cohomology=h2)
    page2 = pages[1]
    top = len(page2.dims) - 1
    odd_bad = [d for d in range(1, top + 1, 2) if page2.dims[d] != 0]
    if bockstein_collapses(pages) and not odd_bad:
        rep.ok("bockstein-parity", {"odd_degrees_zero_up_to": top},
               "page two is concentrated in even degrees, so the tower "
               "collapses there")
    else:
        rep.fail("bockstein-parity", {"odd_nonzero_degrees": odd_bad},
                 "page two has odd-degree classes")
    cmp = series_equal(page2.dims, form.expand(top), up_to=top)
    if cmp:
        rep.ok("bockstein-limit-series", _series_payload(form, cmp),
               "page-two series equals the declared limit form")
    else:
        rep.fail("bockstein-limit-series", _series_payload(form, cmp),
                 "page-two series differs from the declared limit form")


def _nilpotence(rep: Report, defn: Definition, v: VerifyBlock) -> None:
    ring = defn.ring(v.family[2])
    der = defn.derivation(v.family[2], v.derivation)
    classes = [v.elements[label].value for label in v.limit_classes]
    entries = einfty_nilpotence_report(ring, classes, q0=der,
                                       labels=list(v.limit_classes))
    mb = defn.morphisms.get(v.morphism)
    eta = defn.morphism(v.morphism) if mb and mb.source == v.family[2] else None
    for label, cls, entry in zip(v.limit_classes, classes, entries):
        name = f"nilpotence-{label}"
        expected_nilpotent = label in v.nilradical_generators
        payload = {"square": str(entry.square)}
        if expected_nilpotent:
            payload["order"] = entry.order
            ok = entry.witnessed
            note = "nilpotent as required; order is the least vanishing " \
                   "power of two"
            if eta is not None:
                image = eta.target.normal_form(eta.apply(cls))
                img_res = nilpotency_order(image, eta.target)
                payload["image_order"] = img_res.order
                ok = ok and img_res.witnessed and img_res.order == entry.order
                note += "; the morphism image agrees"
        else:
            ok = not entry.witnessed and not entry.square.is_zero
            note = "square is nonzero and no power of two vanishes in bound"
            if eta is not None:
                image = eta.target.normal_form(eta.apply(cls))
                img_res = nilpotency_order(image, eta.target)
                payload["image_witnessed"] = img_res.witnessed
                ok = ok and not img_res.witnessed
                note += "; the morphism image agrees"
        if ok:
            rep.ok(name, payload, note)
        else:
            rep.fail(name, payload, "nilpotence verdict does not match the "
                                    "declared lists")


def run_suite(defn: Definition) -> Report:
    """Execute the full check sequence and return the report."""
    if defn.verify is None:
        raise DefinitionFileError("this file has no verify section")
    if defn.serre is None:
        raise DefinitionFileError("this file has no serre script")
    v = defn.verify
    bound = defn.truncation
    _require(defn.block(v.product).steenrod is not None,
             "the product ring needs an operation table")
    expr_steps = [s for s in defn.serre.steps if s != PERMANENT]
    _require(len(expr_steps) >= 2,
             "the script needs at least two transgression steps")

    rep = Report(
        title="verification suite",
        context=(("file", os.path.basename(defn.source)),
                 ("truncation", bound),
                 ("backend", BACKEND)),
    )

    rep.ok("definition-file", {
        "rings": list(defn.ring_names()),
        "morphisms": sorted(defn.morphisms),
        "elements": sorted(v.elements),
        "script_steps": len(defn.serre.steps),
    }, "parsed; expressions validated against the declared generators")

    family2 = defn.block(v.family[2])
    rep.assumed("relation-forms",
                {"relations": [str(p) for p in family2.relations]},
                "relations are taken in their declared homogeneous forms; "
                "inhomogeneous variants fail validation before this suite runs")

    _square_table_selftests(rep, defn.block(v.product).steenrod)
    k_values = tuple(range(1, len(expr_steps) - 1))
    _composite_square_rule(rep, defn, v, k_values or (1,))
    _congruences(rep, defn, v)
    _regular_sequence(rep, defn, v)
    _serre_chain(rep, defn, v, bound)
    _morphism_checks(rep, defn, v, bound)
    _nilradical(rep, defn, v)
    _derivation_origin(rep, defn, v)
    hs = _cohomology_block(rep, defn, v)
    _bockstein(rep, defn, v, hs[2])
    _nilpotence(rep, defn, v)
    return rep
