"""Ring definition files.

A single JSON document specifies a complete verification run: generator
tables, relations, operation tables, derivations, morphisms between the
declared rings, a transgression script, and the expected series that
the check suite compares against.  Polynomial values use the expression
grammar of the parser (generator names, ``+``, ``*``, ``^``,
parentheses, ``0`` and ``1``).

Top-level keys:

``truncation``
    working degree bound applied to every ring in the file.

``rings``
    map of ring name to a block with keys:

    - ``generators``: ordered list of ``[name, degree]`` pairs
    - ``relations``: optional list of homogeneous expressions
    - ``steenrod``: optional map from generator name to its list of
      ``Sq^0 .. Sq^deg`` value expressions (a row per generator)
    - ``derivations``: optional map from derivation name to
      ``{"shift": n, "values": {generator: expression}}``
    - ``series``: optional declared rational form
      ``{"numerator": [..], "denominator": [..]}`` read as a product
      of ``(1 - t^a)`` factors

``morphisms``
    map of morphism name to ``{"source", "target", "images"}`` with one
    image expression per source generator, written over the target.

``serre``
    ``{"base": ring, "steps": [..]}``: an ordered transgression script
    whose entries are expressions or the literal ``"permanent"``.

``verify``
    configuration of the end-to-end check suite; see suite.py.

Everything is parsed and degree-checked at load time.  Any problem
raises DefinitionFileError naming the offending key path.
"""
from __future__ import annotations

import importlib.resources
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .algebra import GeneratorTable, Polynomial, parse_polynomial
from .errors import DefinitionFileError, F2CohError
from .rings import QuotientRing, RingMorphism
from .series import RationalForm
from .spectral import PERMANENT
from .steenrod import Derivation, SteenrodSpec

__all__ = [
    "RingBlock",
    "MorphismBlock",
    "SerreBlock",
    "ElementRef",
    "VerifyBlock",
    "Definition",
    "parse_definition",
    "load_definition",
    "bundled_path",
    "load_bundled",
]

BUNDLED_NAME = "bg.json"


def _fail(path: str, message: str) -> DefinitionFileError:
    return DefinitionFileError(f"{path}: {message}")


def _expect_object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise _fail(path, f"expected an object, got {type(value).__name__}")
    return value


def _expect_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise _fail(path, f"expected a list, got {type(value).__name__}")
    return value


def _expect_str(value, path: str) -> str:
    if not isinstance(value, str):
        raise _fail(path, f"expected a string, got {type(value).__name__}")
    return value


def _expect_int(value, path: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(path, f"expected an integer, got {type(value).__name__}")
    if value < minimum:
        raise _fail(path, f"expected an integer >= {minimum}, got {value}")
    return value


def _no_extra_keys(obj: dict, allowed: Sequence[str], path: str) -> None:
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise _fail(path, f"unknown keys {extra}; allowed: {sorted(allowed)}")


def _parse_expr(text, table: GeneratorTable, path: str) -> Polynomial:
    source = _expect_str(text, path)
    try:
        return parse_polynomial(source, table)
    except F2CohError as exc:
        raise _fail(path, f"cannot parse {source!r}: {exc}") from exc


def _parse_form(value, path: str) -> RationalForm:
    obj = _expect_object(value, path)
    _no_extra_keys(obj, ("numerator", "denominator"), path)
    num = tuple(_expect_int(a, f"{path}.numerator", 1)
                for a in _expect_list(obj.get("numerator", []), f"{path}.numerator"))
    den = tuple(_expect_int(b, f"{path}.denominator", 1)
                for b in _expect_list(obj.get("denominator", []), f"{path}.denominator"))
    return RationalForm(num, den)


@dataclass(frozen=True)
class RingBlock:
    """One declared ring: table, relations and attached operation data."""

    name: str
    table: GeneratorTable
    relations: tuple[Polynomial, ...]
    steenrod: SteenrodSpec | None
    derivations: Mapping[str, Derivation]
    declared_series: RationalForm | None


@dataclass(frozen=True)
class MorphismBlock:
    name: str
    source: str
    target: str
    images: tuple[Polynomial, ...]  # one per source generator, over the target


@dataclass(frozen=True)
class SerreBlock:
    base: str
    steps: tuple[str, ...]  # expressions, re-parsed against each page's table


@dataclass(frozen=True)
class ElementRef:
    """A named homogeneous element, tagged with its home ring."""

    ring: str
    value: Polynomial

    @property
    def degree(self) -> int:
        d = self.value.degree
        assert d is not None
        return d


@dataclass(frozen=True)
class VerifyBlock:
    """What the end-to-end suite should check, all by declared names."""

    product: str
    family: tuple[str, str, str]
    derivation: str
    morphism: str
    elements: Mapping[str, ElementRef]
    nilradical_ring: str
    nilradical_generators: tuple[str, ...]
    nilradical_up_to: int
    page_series: tuple[RationalForm, ...]
    q_series: tuple[RationalForm, RationalForm, RationalForm]
    limit_classes: tuple[str, ...]


@dataclass
class Definition:
    """A loaded definition file plus a cache of built rings."""

    source: str
    truncation: int
    rings: dict[str, RingBlock]
    morphisms: dict[str, MorphismBlock]
    serre: SerreBlock | None
    verify: VerifyBlock | None
    _built: dict[tuple[str, int], QuotientRing] = field(default_factory=dict)

    def ring_names(self) -> tuple[str, ...]:
        return tuple(self.rings)

    def block(self, name: str) -> RingBlock:
        try:
            return self.rings[name]
        except KeyError:
            raise DefinitionFileError(
                f"no ring named {name!r}; defined: {sorted(self.rings)}") from None

    def ring(self, name: str, up_to: int | None = None) -> QuotientRing:
        """Build (and cache) the named ring at the requested bound."""
        bound = self.truncation if up_to is None else up_to
        key = (name, bound)
        hit = self._built.get(key)
        if hit is not None:
            return hit
        blk = self.block(name)
        if blk.relations:
            q = QuotientRing.quotient(blk.table, blk.relations, bound)
        else:
            q = QuotientRing.free(blk.table, bound)
        self._built[key] = q
        return q

    def derivation(self, ring_name: str, der_name: str) -> Derivation:
        blk = self.block(ring_name)
        try:
            return blk.derivations[der_name]
        except KeyError:
            raise DefinitionFileError(
                f"ring {ring_name!r} has no derivation {der_name!r}; "
                f"defined: {sorted(blk.derivations)}") from None

    def morphism(self, name: str, up_to: int | None = None) -> RingMorphism:
        try:
            mb = self.morphisms[name]
        except KeyError:
            raise DefinitionFileError(
                f"no morphism named {name!r}; defined: {sorted(self.morphisms)}") from None
        return RingMorphism(self.ring(mb.source, up_to),
                            self.ring(mb.target, up_to), mb.images)

    def element(self, label: str) -> ElementRef:
        if self.verify is None:
            raise DefinitionFileError("file has no verify section")
        try:
            return self.verify.elements[label]
        except KeyError:
            raise DefinitionFileError(
                f"no element named {label!r}; defined: "
                f"{sorted(self.verify.elements)}") from None


def _parse_ring_block(name: str, raw, truncation: int) -> RingBlock:
    path = f"rings.{name}"
    obj = _expect_object(raw, path)
    _no_extra_keys(obj, ("generators", "relations", "steenrod", "derivations",
                         "series"), path)
    if "generators" not in obj:
        raise _fail(path, "missing required key 'generators'")

    pairs = []
    for i, entry in enumerate(_expect_list(obj["generators"], f"{path}.generators")):
        epath = f"{path}.generators[{i}]"
        item = _expect_list(entry, epath)
        if len(item) != 2:
            raise _fail(epath, "expected a [name, degree] pair")
        gname = _expect_str(item[0], epath)
        gdeg = _expect_int(item[1], epath, 1)
        pairs.append((gname, gdeg))
    try:
        table = GeneratorTable.build(pairs)
    except (F2CohError, ValueError) as exc:
        raise _fail(f"{path}.generators", str(exc)) from exc

    relations = []
    for i, expr in enumerate(_expect_list(obj.get("relations", []),
                                          f"{path}.relations")):
        rpath = f"{path}.relations[{i}]"
        p = _parse_expr(expr, table, rpath)
        if p.is_zero:
            raise _fail(rpath, "relation reduces to zero")
        if not p.is_homogeneous:
            degs = sorted({table.degree_of(m.exponents) for m in p})
            raise _fail(rpath, f"relation is not homogeneous (term degrees {degs})")
        if p.degree > truncation:
            raise _fail(rpath, f"relation degree {p.degree} exceeds the "
                               f"truncation bound {truncation}")
        relations.append(p)

    steenrod = None
    if "steenrod" in obj:
        spath = f"{path}.steenrod"
        rows_raw = _expect_object(obj["steenrod"], spath)
        missing = sorted(set(table.names) - set(rows_raw))
        extra = sorted(set(rows_raw) - set(table.names))
        if missing or extra:
            raise _fail(spath, f"rows must cover the generators exactly "
                               f"(missing {missing}, unknown {extra})")
        rows = []
        for gname, gdeg in zip(table.names, table.degrees):
            row_raw = _expect_list(rows_raw[gname], f"{spath}.{gname}")
            if len(row_raw) != gdeg + 1:
                raise _fail(f"{spath}.{gname}",
                            f"expected {gdeg + 1} values (Sq^0 .. Sq^{gdeg}), "
                            f"got {len(row_raw)}")
            rows.append(tuple(
                _parse_expr(expr, table, f"{spath}.{gname}[{k}]")
                for k, expr in enumerate(row_raw)))
        try:
            steenrod = SteenrodSpec(table, tuple(rows))
        except (F2CohError, ValueError) as exc:
            raise _fail(spath, str(exc)) from exc

    derivations: dict[str, Derivation] = {}
    for dname, draw in _expect_object(obj.get("derivations", {}),
                                      f"{path}.derivations").items():
        dpath = f"{path}.derivations.{dname}"
        dobj = _expect_object(draw, dpath)
        _no_extra_keys(dobj, ("shift", "values"), dpath)
        if "shift" not in dobj or "values" not in dobj:
            raise _fail(dpath, "needs both 'shift' and 'values'")
        shift = _expect_int(dobj["shift"], f"{dpath}.shift", 1)
        vals_raw = _expect_object(dobj["values"], f"{dpath}.values")
        missing = sorted(set(table.names) - set(vals_raw))
        extra = sorted(set(vals_raw) - set(table.names))
        if missing or extra:
            raise _fail(f"{dpath}.values",
                        f"values must cover the generators exactly "
                        f"(missing {missing}, unknown {extra})")
        values = tuple(_parse_expr(vals_raw[g], table, f"{dpath}.values.{g}")
                       for g in table.names)
        try:
            derivations[dname] = Derivation(table, shift, values, name=dname)
        except (F2CohError, ValueError) as exc:
            raise _fail(dpath, str(exc)) from exc

    declared = None
    if "series" in obj:
        try:
            declared = _parse_form(obj["series"], f"{path}.series")
        except ValueError as exc:
            raise _fail(f"{path}.series", str(exc)) from exc

    return RingBlock(name, table, tuple(relations), steenrod, derivations,
                     declared)


def _parse_morphism_block(name: str, raw, rings: dict[str, RingBlock]) -> MorphismBlock:
    path = f"morphisms.{name}"
    obj = _expect_object(raw, path)
    _no_extra_keys(obj, ("source", "target", "images"), path)
    for key in ("source", "target", "images"):
        if key not in obj:
            raise _fail(path, f"missing required key {key!r}")
    src_name = _expect_str(obj["source"], f"{path}.source")
    tgt_name = _expect_str(obj["target"], f"{path}.target")
    for role, rname in (("source", src_name), ("target", tgt_name)):
        if rname not in rings:
            raise _fail(f"{path}.{role}", f"unknown ring {rname!r}")
    src = rings[src_name].table
    tgt = rings[tgt_name].table
    images_raw = _expect_object(obj["images"], f"{path}.images")
    missing = sorted(set(src.names) - set(images_raw))
    extra = sorted(set(images_raw) - set(src.names))
    if missing or extra:
        raise _fail(f"{path}.images",
                    f"images must cover the source generators exactly "
                    f"(missing {missing}, unknown {extra})")
    images = []
    for gname, gdeg in zip(src.names, src.degrees):
        ipath = f"{path}.images.{gname}"
        img = _parse_expr(images_raw[gname], tgt, ipath)
        if not img.is_homogeneous:
            degs = sorted({tgt.degree_of(m.exponents) for m in img})
            raise _fail(ipath, f"image is not homogeneous (term degrees {degs})")
        d = img.degree
        if d is not None and d != gdeg:
            raise _fail(ipath, f"image has degree {d}, expected {gdeg}")
        images.append(img)
    return MorphismBlock(name, src_name, tgt_name, tuple(images))


def _parse_serre_block(raw, rings: dict[str, RingBlock]) -> SerreBlock:
    path = "serre"
    obj = _expect_object(raw, path)
    _no_extra_keys(obj, ("base", "steps"), path)
    for key in ("base", "steps"):
        if key not in obj:
            raise _fail(path, f"missing required key {key!r}")
    base = _expect_str(obj["base"], f"{path}.base")
    if base not in rings:
        raise _fail(f"{path}.base", f"unknown ring {base!r}")
    steps_raw = _expect_list(obj["steps"], f"{path}.steps")
    if not steps_raw:
        raise _fail(f"{path}.steps", "the script needs at least one step")
    table = rings[base].table
    steps = []
    for i, step in enumerate(steps_raw):
        spath = f"{path}.steps[{i}]"
        text = _expect_str(step, spath)
        if text == PERMANENT:
            if i != len(steps_raw) - 1:
                raise _fail(spath, "'permanent' may only close the script")
        else:
            p = _parse_expr(text, table, spath)
            if p.is_zero:
                raise _fail(spath, "transgression step reduces to zero")
            if not p.is_homogeneous:
                degs = sorted({table.degree_of(m.exponents) for m in p})
                raise _fail(spath, f"step is not homogeneous (term degrees {degs})")
        steps.append(text)
    return SerreBlock(base, tuple(steps))


def _parse_verify_block(raw, rings: dict[str, RingBlock],
                        morphisms: dict[str, MorphismBlock],
                        serre: SerreBlock | None) -> VerifyBlock:
    path = "verify"
    obj = _expect_object(raw, path)
    allowed = ("product", "family", "derivation", "morphism", "elements",
               "nilradical", "page_series", "q_series", "limit_classes")
    _no_extra_keys(obj, allowed, path)
    for key in allowed:
        if key not in obj:
            raise _fail(path, f"missing required key {key!r}")

    product = _expect_str(obj["product"], f"{path}.product")
    if product not in rings:
        raise _fail(f"{path}.product", f"unknown ring {product!r}")
    if rings[product].steenrod is None:
        raise _fail(f"{path}.product",
                    f"ring {product!r} declares no steenrod table")

    family_raw = _expect_list(obj["family"], f"{path}.family")
    if len(family_raw) != 3:
        raise _fail(f"{path}.family",
                    "expected exactly three ring names (0, 1 and 2 relations)")
    family = []
    for i, rname in enumerate(family_raw):
        fname = _expect_str(rname, f"{path}.family[{i}]")
        if fname not in rings:
            raise _fail(f"{path}.family[{i}]", f"unknown ring {fname!r}")
        if len(rings[fname].relations) != i:
            raise _fail(f"{path}.family[{i}]",
                        f"ring {fname!r} has {len(rings[fname].relations)} "
                        f"relations, expected {i}")
        family.append(fname)

    der_name = _expect_str(obj["derivation"], f"{path}.derivation")
    for fname in family:
        if der_name not in rings[fname].derivations:
            raise _fail(f"{path}.derivation",
                        f"ring {fname!r} declares no derivation {der_name!r}")

    mor_name = _expect_str(obj["morphism"], f"{path}.morphism")
    if mor_name not in morphisms:
        raise _fail(f"{path}.morphism", f"unknown morphism {mor_name!r}")

    elements: dict[str, ElementRef] = {}
    for label, eraw in _expect_object(obj["elements"], f"{path}.elements").items():
        epath = f"{path}.elements.{label}"
        eobj = _expect_object(eraw, epath)
        _no_extra_keys(eobj, ("ring", "expr"), epath)
        if "ring" not in eobj or "expr" not in eobj:
            raise _fail(epath, "needs both 'ring' and 'expr'")
        rname = _expect_str(eobj["ring"], f"{epath}.ring")
        if rname not in rings:
            raise _fail(f"{epath}.ring", f"unknown ring {rname!r}")
        p = _parse_expr(eobj["expr"], rings[rname].table, f"{epath}.expr")
        if p.is_zero or not p.is_homogeneous:
            raise _fail(f"{epath}.expr",
                        "element must be homogeneous and nonzero")
        elements[label] = ElementRef(rname, p)

    npath = f"{path}.nilradical"
    nobj = _expect_object(obj["nilradical"], npath)
    _no_extra_keys(nobj, ("ring", "generators", "up_to"), npath)
    for key in ("ring", "generators", "up_to"):
        if key not in nobj:
            raise _fail(npath, f"missing required key {key!r}")
    nring = _expect_str(nobj["ring"], f"{npath}.ring")
    if nring not in rings:
        raise _fail(f"{npath}.ring", f"unknown ring {nring!r}")
    ngens = []
    for i, label in enumerate(_expect_list(nobj["generators"],
                                           f"{npath}.generators")):
        lab = _expect_str(label, f"{npath}.generators[{i}]")
        if lab not in elements:
            raise _fail(f"{npath}.generators[{i}]", f"unknown element {lab!r}")
        ngens.append(lab)
    nup = _expect_int(nobj["up_to"], f"{npath}.up_to", 1)

    if serre is None:
        raise _fail(f"{path}.page_series", "verify needs a serre script")
    expr_steps = sum(1 for s in serre.steps if s != PERMANENT)
    forms_raw = _expect_list(obj["page_series"], f"{path}.page_series")
    if len(forms_raw) != expr_steps:
        raise _fail(f"{path}.page_series",
                    f"expected one form per transgression step "
                    f"({expr_steps}), got {len(forms_raw)}")
    page_series = tuple(_parse_form(f, f"{path}.page_series[{i}]")
                        for i, f in enumerate(forms_raw))

    q_raw = _expect_list(obj["q_series"], f"{path}.q_series")
    if len(q_raw) != 3:
        raise _fail(f"{path}.q_series", "expected one form per family ring")
    q_series = tuple(_parse_form(f, f"{path}.q_series[{i}]")
                     for i, f in enumerate(q_raw))

    limit = []
    for i, label in enumerate(_expect_list(obj["limit_classes"],
                                           f"{path}.limit_classes")):
        lab = _expect_str(label, f"{path}.limit_classes[{i}]")
        if lab not in elements:
            raise _fail(f"{path}.limit_classes[{i}]", f"unknown element {lab!r}")
        limit.append(lab)

    return VerifyBlock(product, (family[0], family[1], family[2]), der_name,
                       mor_name, elements, nring, tuple(ngens), nup,
                       page_series, q_series, tuple(limit))


def parse_definition(doc, source: str = "<memory>") -> Definition:
    """Validate a decoded JSON document into a Definition."""
    obj = _expect_object(doc, "top level")
    _no_extra_keys(obj, ("truncation", "rings", "morphisms", "serre", "verify"),
                   "top level")
    if "truncation" not in obj or "rings" not in obj:
        raise _fail("top level", "both 'truncation' and 'rings' are required")
    truncation = _expect_int(obj["truncation"], "truncation", 1)

    rings_raw = _expect_object(obj["rings"], "rings")
    if not rings_raw:
        raise _fail("rings", "at least one ring is required")
    rings = {name: _parse_ring_block(name, raw, truncation)
             for name, raw in rings_raw.items()}

    morphisms = {name: _parse_morphism_block(name, raw, rings)
                 for name, raw in _expect_object(obj.get("morphisms", {}),
                                                 "morphisms").items()}

    serre = None
    if "serre" in obj:
        serre = _parse_serre_block(obj["serre"], rings)

    verify = None
    if "verify" in obj:
        verify = _parse_verify_block(obj["verify"], rings, morphisms, serre)

    return Definition(source, truncation, rings, morphisms, serre, verify)


def load_definition(path: str | Path) -> Definition:
    """Read and validate a definition file from disk."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise DefinitionFileError(f"cannot read {p}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DefinitionFileError(
            f"{p}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc
    return parse_definition(doc, source=str(p))


def bundled_path() -> Path:
    """Filesystem path of the definition file shipped with the package."""
    return Path(str(importlib.resources.files("f2coh") / "data" / BUNDLED_NAME))


def load_bundled() -> Definition:
    return load_definition(bundled_path())
