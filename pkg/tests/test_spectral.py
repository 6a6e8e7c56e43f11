"""Transgression driver and Bockstein tower."""
import pytest

from f2coh.algebra import GeneratorTable, Polynomial, parse_polynomial
from f2coh.errors import (DegenerateInputError, HomogeneityError,
                          NZDViolationError)
from f2coh.rings import QuotientRing, is_nonzerodivisor
from f2coh.series import RationalForm, series_equal
from f2coh.spectral import (BocksteinPage, SerreState, bockstein_pages,
                            einfty_nilpotence_report, page_series,
                            run_transgression_script, serre_step, serre_total)
from f2coh.steenrod import Derivation

from conftest import BOUND, F5, F9, G4, G8, SCRIPT, SIX_PAIRS, V2, V3


def test_page_numbering(serre_chain):
    assert [s.page for s in serre_chain] == [2, 3, 5, 9, 17]
    assert [s.fiber_degree for s in serre_chain] == [1, 2, 4, 8, 16]
    assert serre_chain[-1].is_permanent


def test_page_series_chain(serre_chain):
    checks = [
        (RationalForm((), (1, 2, 2, 2, 3, 3, 3)), serre_chain[0]),
        (RationalForm((), (2, 2, 2, 3, 3, 3)), serre_chain[1]),
        (RationalForm((), (2, 2, 3, 3, 4)), serre_chain[2]),
        (RationalForm((5,), (2, 2, 3, 3, 8)), serre_chain[3]),
        (RationalForm((5, 9), (2, 2, 3, 3, 16)), serre_chain[4]),
    ]
    for form, state in checks:
        got = page_series(state)
        assert series_equal(got, form, up_to=BOUND), state.page


def test_linear_transgressions_shrink_the_table(serre_chain):
    assert len(serre_chain[1].base.table) == 5
    assert len(serre_chain[2].base.table) == 4
    assert serre_chain[2].base.table.names == ("w2'", "w2''", "w3'", "w3''")
    assert serre_chain[2].base.is_free
    assert len(serre_chain[3].base.relations) == 1
    assert len(serre_chain[4].base.relations) == 2


def test_total_series_is_the_presentation_series(serre_chain, r2):
    total = serre_total(serre_chain[-1])
    assert series_equal(total, r2.hilbert(), up_to=BOUND)
    assert series_equal(total, RationalForm((5, 9), (2, 2, 3, 3, 16)),
                        up_to=BOUND)


def test_each_step_kills_something(serre_chain):
    for before, after in zip(serre_chain, serre_chain[1:]):
        e = 2 ** before.fiber_power + 1
        assert after.base.dimension(e) == before.base.dimension(e) - 1


def test_base_line_telescoping(serre_chain):
    for before, after in zip(serre_chain, serre_chain[1:]):
        e = 2 ** before.fiber_power + 1
        for d in range(BOUND + 1):
            lower = before.base.dimension(d - e) if d >= e else 0
            assert after.base.dimension(d) == before.base.dimension(d) - lower


def test_elimination_and_added_relation_agree():
    """Quotient by a linear image, computed both ways, matches in dims."""
    table = GeneratorTable.build([("a", 2), ("b", 2), ("c", 3)])
    base = QuotientRing.free(table, 16)
    v = parse_polynomial("a + b", table)
    stepped = serre_step(SerreState(base, 0, v), "permanent")
    explicit = QuotientRing.quotient(table, [v], 16)
    for d in range(17):
        assert stepped.base.dimension(d) == explicit.dimension(d)
    assert len(stepped.base.table) == 2


def test_su2_style_two_step_run():
    """Fiber over a one-factor base: everything collapses to one class."""
    table = GeneratorTable.build([("w2", 2), ("w3", 3)])
    base = QuotientRing.free(table, 24)
    states = run_transgression_script(base, ("w2", "w3", "permanent"))
    total = serre_total(states[-1])
    assert series_equal(total, RationalForm((), (4,)), up_to=24)
    assert len(states[-1].base.table) == 0


def test_trivial_fibration_multiplies_by_the_fiber_line():
    table = GeneratorTable.build([("x", 3)])
    base = QuotientRing.free(table, 12)
    state = SerreState.start(base, "permanent")
    total = serre_total(state)
    assert series_equal(total, RationalForm((), (1, 3)), up_to=12)


def test_zero_divisor_transgression_is_refused():
    table = GeneratorTable.build([("x", 2), ("y", 3)])
    base = QuotientRing.quotient(
        table, [parse_polynomial("x*y", table)], 20)
    v = parse_polynomial("y + y", table)
    with pytest.raises(DegenerateInputError):
        SerreState.start(base, "y + y")
    state = SerreState(base, 2, parse_polynomial("x*y + y*x + x*y", table))
    with pytest.raises(NZDViolationError) as info:
        serre_step(state, "permanent")
    assert info.value.degree == is_nonzerodivisor(
        parse_polynomial("x*y", table), base).failures[0]


def test_step_validates_image_degree():
    table = GeneratorTable.build([("x", 2), ("y", 3)])
    base = QuotientRing.free(table, 20)
    with pytest.raises(HomogeneityError):
        SerreState(base, 0, parse_polynomial("y", table))
    with pytest.raises(DegenerateInputError):
        serre_step(SerreState.start(base, "permanent"), "x")


def test_script_must_end_permanent():
    table = GeneratorTable.build([("x", 2), ("y", 3)])
    base = QuotientRing.free(table, 20)
    with pytest.raises(DegenerateInputError):
        run_transgression_script(base, ("x", "y"))


# -- Bockstein ---------------------------------------------------------------

@pytest.fixture(scope="module")
def tower(r2, q0_w):
    return bockstein_pages(r2, q0_w, max_page=4)


def test_tower_page_one_is_the_ring(tower, r2):
    assert tower[0].number == 1
    assert tower[0].dims == r2.hilbert().coefficients


def test_tower_page_two_series(tower):
    page2 = tower[1]
    form = RationalForm((8, 16), (4, 4, 4, 8, 16))
    assert page2.dims == form.expand(len(page2.dims) - 1)
    assert all(v == 0 for v in page2.dims[1::2])


def test_tower_reports_collapse(tower):
    assert [p.number for p in tower] == [1, 2, 3, 4]
    assert tower[2].dims == tower[1].dims
    assert tower[3].dims == tower[1].dims
    assert "page 2" in tower[2].note


def test_tower_generator_fates(tower):
    fates = dict(tower[1].fates)
    assert fates["w2'"] == "squared"
    assert fates["w2''"] == "squared"
    assert fates["w3'"] == "killed"
    assert fates["w3''"] == "killed"
    assert fates["w16"] == "survives"


def test_tower_monotone(tower):
    top = len(tower[1].dims)
    for earlier, later in zip(tower, tower[1:]):
        assert all(b <= a for a, b in zip(earlier.dims[:top], later.dims[:top]))


def test_zero_derivation_keeps_every_page():
    table = GeneratorTable.build([("x", 2)])
    ring = QuotientRing.free(table, 12)
    q = Derivation(table, 1, (parse_polynomial("0", table),))
    pages = bockstein_pages(ring, q, max_page=3)
    usable = len(pages[1].dims)
    assert pages[1].dims == pages[0].dims[:usable]
    assert pages[2].dims == pages[1].dims


# -- limit nilpotence --------------------------------------------------------

def test_limit_class_squares(r2, w_table, q0_w):
    p = lambda s: parse_polynomial(s, w_table)
    classes = [p(G4), p(G8), p(f"({G4})*({G8})")]
    report = einfty_nilpotence_report(r2, classes, q0=q0_w,
                                      labels=["g4", "g8", "g4*g8"])
    by_label = {e.label: e for e in report}
    assert by_label["g4"].square == p("w2'^2*w2''^2")
    assert not by_label["g4"].witnessed
    assert by_label["g8"].square.is_zero
    assert by_label["g8"].order == 2
    assert by_label["g4*g8"].square.is_zero
    assert by_label["g4*g8"].order == 2


def test_limit_report_rejects_non_cycles(r2, w_table, q0_w):
    with pytest.raises(DegenerateInputError):
        einfty_nilpotence_report(
            r2, [parse_polynomial("w2'", w_table)], q0=q0_w)
