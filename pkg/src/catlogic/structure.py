"""Bicartesian-closed structure discovered by exhaustive universal-property search.

Every witness is certified against every test object before it is cached;
nothing is trusted from theory.  Searches are deterministic: candidates are
tried in index order and the first fully-verified one wins, so two runs on
the same input produce identical witness tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .errors import (
    LawViolation,
    NoSuchStructure,
    ShapeMismatch,
    UniversalityBroken,
)
from .kernel import ArrId, FinCategory, ObjId, validate_category


@dataclass(frozen=True)
class ProductWitness:
    pair: tuple[ObjId, ObjId]
    apex: ObjId
    proj1: ArrId
    proj2: ArrId


@dataclass(frozen=True)
class CoproductWitness:
    pair: tuple[ObjId, ObjId]
    apex: ObjId
    inj1: ArrId
    inj2: ArrId


@dataclass(frozen=True)
class TerminalWitness:
    obj: ObjId


@dataclass(frozen=True)
class InitialWitness:
    obj: ObjId


@dataclass(frozen=True)
class ExponentialWitness:
    base: ObjId       # A
    target: ObjId     # C
    apex: ObjId       # C^A
    eval: ArrId       # apex x A -> C


def _count_mediators(cat: FinCategory, candidates: Sequence[ArrId],
                     ok: Callable[[ArrId], bool]) -> list[ArrId]:
    return [m for m in candidates if ok(m)]


def find_terminal(cat: FinCategory) -> TerminalWitness:
    best: tuple[int, str] | None = None
    for t in cat.objects:
        good = sum(1 for w in cat.objects if len(cat.hom(w, t)) == 1)
        if good == len(cat.objects):
            return TerminalWitness(t)
        if best is None or good > best[0]:
            best = (good, t.name)
    raise NoSuchStructure(
        f"{cat.name}: no terminal object; best candidate {best[1]} receives a "
        f"unique arrow from {best[0]}/{len(cat.objects)} objects")


def find_initial(cat: FinCategory) -> InitialWitness:
    best: tuple[int, str] | None = None
    for t in cat.objects:
        good = sum(1 for w in cat.objects if len(cat.hom(t, w)) == 1)
        if good == len(cat.objects):
            return InitialWitness(t)
        if best is None or good > best[0]:
            best = (good, t.name)
    raise NoSuchStructure(
        f"{cat.name}: no initial object; best candidate {best[1]} reaches "
        f"{best[0]}/{len(cat.objects)} objects uniquely")


def find_product(cat: FinCategory, a: ObjId, b: ObjId) -> ProductWitness:
    """Search apex and projections satisfying the product UMP against every object.

    Deterministic: lowest apex index first, then lowest projection indices.
    """
    best: tuple[int, str] | None = None
    for apex in cat.objects:
        for p1 in cat.hom(apex, a):
            for p2 in cat.hom(apex, b):
                score = 0
                ok = True
                for w in cat.objects:
                    into_apex = cat.hom(w, apex)
                    for f in cat.hom(w, a):
                        for g in cat.hom(w, b):
                            ms = _count_mediators(
                                cat, into_apex,
                                lambda m: cat.compose(p1, m) == f and cat.compose(p2, m) == g)
                            if len(ms) == 1:
                                score += 1
                            else:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        break
                if ok:
                    return ProductWitness((a, b), apex, p1, p2)
                if best is None or score > best[0]:
                    best = (score, f"apex {apex.name} via ({p1.name}, {p2.name})")
    near = "no candidate cone at all" if best is None else f"near miss: {best[1]} satisfied {best[0]} mediation checks"
    raise NoSuchStructure(f"{cat.name}: no product for ({a.name}, {b.name}); {near}")


def find_coproduct(cat: FinCategory, a: ObjId, b: ObjId) -> CoproductWitness:
    best: tuple[int, str] | None = None
    for apex in cat.objects:
        for i1 in cat.hom(a, apex):
            for i2 in cat.hom(b, apex):
                score = 0
                ok = True
                for w in cat.objects:
                    from_apex = cat.hom(apex, w)
                    for f in cat.hom(a, w):
                        for g in cat.hom(b, w):
                            ms = _count_mediators(
                                cat, from_apex,
                                lambda m: cat.compose(m, i1) == f and cat.compose(m, i2) == g)
                            if len(ms) == 1:
                                score += 1
                            else:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        break
                if ok:
                    return CoproductWitness((a, b), apex, i1, i2)
                if best is None or score > best[0]:
                    best = (score, f"apex {apex.name} via ({i1.name}, {i2.name})")
    near = "no candidate cocone at all" if best is None else f"near miss: {best[1]} satisfied {best[0]} mediation checks"
    raise NoSuchStructure(f"{cat.name}: no coproduct for ({a.name}, {b.name}); {near}")


def _pair_into(cat: FinCategory, pw: ProductWitness, f: ArrId, g: ArrId) -> ArrId:
    """Unique m with proj1.m = f and proj2.m = g; witnesses guarantee exactly one."""
    if f.dom != g.dom:
        raise ShapeMismatch(f"pair({f.name}, {g.name}): different domains")
    w = cat.objects[f.dom]
    ms = _count_mediators(cat, cat.hom(w, pw.apex),
                          lambda m: cat.compose(pw.proj1, m) == f
                          and cat.compose(pw.proj2, m) == g)
    if len(ms) != 1:
        raise UniversalityBroken(
            f"product ({pw.pair[0].name}, {pw.pair[1].name}) admits {len(ms)} mediators "
            f"for ({f.name}, {g.name})")
    return ms[0]


def find_exponential(cat: FinCategory, products: Mapping[tuple[int, int], ProductWitness],
                     a: ObjId, target: ObjId) -> ExponentialWitness:
    """Search apex and eval arrow with the unique-transpose property against every W.

    Requires the binary products involved to be present in ``products``.
    """
    best: tuple[int, str] | None = None
    for apex in cat.objects:
        pw = products.get((apex.index, a.index))
        if pw is None:
            continue
        for ev in cat.hom(pw.apex, target):
            score = 0
            ok = True
            for w in cat.objects:
                pww = products.get((w.index, a.index))
                if pww is None:
                    continue
                into_apex = cat.hom(w, apex)
                for f in cat.hom(pww.apex, target):
                    ms = []
                    for m in into_apex:
                        m_x_id = _pair_into(cat, pw,
                                            cat.compose(m, pww.proj1), pww.proj2)
                        if cat.compose(ev, m_x_id) == f:
                            ms.append(m)
                    if len(ms) == 1:
                        score += 1
                    else:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return ExponentialWitness(a, target, apex, ev)
            if best is None or score > best[0]:
                best = (score, f"apex {apex.name} via eval {ev.name}")
    near = "no candidate eval arrow at all" if best is None else f"near miss: {best[1]} passed {best[0]} transpose checks"
    raise NoSuchStructure(
        f"{cat.name}: no exponential with base {a.name}, target {target.name}; {near}")


class StructureTable:
    """Cache of every discovered witness, keyed by object index pairs.

    Built once by :func:`discover_structure`; downstream modules never
    re-search.  Also hosts the canonical arrow combinators (pairing,
    copairing, arrow product, transpose, theta) which always verify
    mediator uniqueness instead of trusting it.
    """

    def __init__(self, cat: FinCategory):
        self.cat = cat
        self.terminal: TerminalWitness | None = None
        self.initial: InitialWitness | None = None
        self.products: dict[tuple[int, int], ProductWitness] = {}
        self.coproducts: dict[tuple[int, int], CoproductWitness] = {}
        self.exponentials: dict[tuple[int, int], ExponentialWitness] = {}
        self.terminal_failure: str | None = None
        self.initial_failure: str | None = None
        self.product_failures: dict[tuple[int, int], str] = {}
        self.coproduct_failures: dict[tuple[int, int], str] = {}
        self.exponential_failures: dict[tuple[int, int], str] = {}

    @property
    def complete(self) -> bool:
        return (self.terminal is not None and self.initial is not None
                and not self.product_failures and not self.coproduct_failures
                and not self.exponential_failures)

    # -- witness lookups ---------------------------------------------------

    def product(self, a: ObjId, b: ObjId) -> ProductWitness:
        try:
            return self.products[(a.index, b.index)]
        except KeyError:
            raise NoSuchStructure(
                self.product_failures.get((a.index, b.index),
                                          f"no product for ({a.name}, {b.name})")) from None

    def coproduct(self, a: ObjId, b: ObjId) -> CoproductWitness:
        try:
            return self.coproducts[(a.index, b.index)]
        except KeyError:
            raise NoSuchStructure(
                self.coproduct_failures.get((a.index, b.index),
                                            f"no coproduct for ({a.name}, {b.name})")) from None

    def exponential(self, base: ObjId, target: ObjId) -> ExponentialWitness:
        try:
            return self.exponentials[(base.index, target.index)]
        except KeyError:
            raise NoSuchStructure(
                self.exponential_failures.get(
                    (base.index, target.index),
                    f"no exponential base {base.name} target {target.name}")) from None

    def terminal_obj(self) -> ObjId:
        if self.terminal is None:
            raise NoSuchStructure(self.terminal_failure or "no terminal object")
        return self.terminal.obj

    def initial_obj(self) -> ObjId:
        if self.initial is None:
            raise NoSuchStructure(self.initial_failure or "no initial object")
        return self.initial.obj

    def identity(self, o: ObjId) -> ArrId:
        return self.cat.identity_of(o)

    def ob(self, index: int) -> ObjId:
        return self.cat.objects[index]

    # -- canonical combinators ----------------------------------------------

    def pair(self, f: ArrId, g: ArrId) -> ArrId:
        """<f, g> : dom f -> cod f x cod g."""
        return _pair_into(self.cat, self.product(self.ob(f.cod), self.ob(g.cod)), f, g)

    def copair(self, f: ArrId, g: ArrId) -> ArrId:
        """[f, g] : dom f + dom g -> cod f."""
        if f.cod != g.cod:
            raise ShapeMismatch(f"copair({f.name}, {g.name}): different codomains")
        cw = self.coproduct(self.ob(f.dom), self.ob(g.dom))
        w = self.ob(f.cod)
        cat = self.cat
        ms = [m for m in cat.hom(cw.apex, w)
              if cat.compose(m, cw.inj1) == f and cat.compose(m, cw.inj2) == g]
        if len(ms) != 1:
            raise UniversalityBroken(
                f"coproduct ({cw.pair[0].name}, {cw.pair[1].name}) admits {len(ms)} "
                f"mediators for ({f.name}, {g.name})")
        return ms[0]

    def arrow_product(self, f: ArrId, g: ArrId) -> ArrId:
        """f x g = <f . proj1, g . proj2> : dom f x dom g -> cod f x cod g."""
        src = self.product(self.ob(f.dom), self.ob(g.dom))
        return _pair_into(self.cat,
                          self.product(self.ob(f.cod), self.ob(g.cod)),
                          self.cat.compose(f, src.proj1),
                          self.cat.compose(g, src.proj2))

    def swap(self, a: ObjId, b: ObjId) -> ArrId:
        """The canonical a x b -> b x a built from <proj2, proj1>."""
        pw = self.product(a, b)
        return _pair_into(self.cat, self.product(b, a), pw.proj2, pw.proj1)

    def transpose(self, f: ArrId, w: ObjId, a: ObjId) -> ArrId:
        """Unique m : w -> cod(f)^a with eval . (m x id_a) = f, for f : w x a -> cod f."""
        c = self.ob(f.cod)
        ew = self.exponential(a, c)
        pw = self.product(w, a)
        if f.dom != pw.apex.index:
            raise ShapeMismatch(
                f"transpose({f.name}): domain is not the apex of {w.name} x {a.name}")
        pe = self.product(ew.apex, a)
        cat = self.cat
        ms = []
        for m in cat.hom(w, ew.apex):
            m_x_id = _pair_into(cat, pe, cat.compose(m, pw.proj1), pw.proj2)
            if cat.compose(ew.eval, m_x_id) == f:
                ms.append(m)
        if len(ms) != 1:
            raise UniversalityBroken(
                f"exponential {c.name}^{a.name} admits {len(ms)} transposes for {f.name}")
        return ms[0]

    def theta(self, g: ArrId, a: ObjId, c: ObjId) -> ArrId:
        """theta(g) = eval . (g x id_a) : dom g x a -> c, inverse to transpose."""
        ew = self.exponential(a, c)
        if g.cod != ew.apex.index:
            raise ShapeMismatch(
                f"theta({g.name}): codomain is not the exponential {c.name}^{a.name}")
        return self.cat.compose(ew.eval, self.arrow_product(g, self.identity(a)))


def discover_structure(cat: FinCategory, *, require_validated: bool = True) -> StructureTable:
    """Search terminal/initial objects, then all products and coproducts,
    then all exponentials; failures are recorded per key rather than raised.
    """
    if require_validated and not cat.validated:
        report = validate_category(cat)
        if not report.ok:
            raise LawViolation(
                f"{cat.name} failed validation ({len(report.violations)} violations); "
                f"structure search requires a validated category")

    st = StructureTable(cat)
    try:
        st.terminal = find_terminal(cat)
    except NoSuchStructure as exc:
        st.terminal_failure = str(exc)
    try:
        st.initial = find_initial(cat)
    except NoSuchStructure as exc:
        st.initial_failure = str(exc)

    for a in cat.objects:
        for b in cat.objects:
            try:
                st.products[(a.index, b.index)] = find_product(cat, a, b)
            except NoSuchStructure as exc:
                st.product_failures[(a.index, b.index)] = str(exc)
            try:
                st.coproducts[(a.index, b.index)] = find_coproduct(cat, a, b)
            except NoSuchStructure as exc:
                st.coproduct_failures[(a.index, b.index)] = str(exc)

    for a in cat.objects:
        for c in cat.objects:
            try:
                st.exponentials[(a.index, c.index)] = find_exponential(cat, st.products, a, c)
            except NoSuchStructure as exc:
                st.exponential_failures[(a.index, c.index)] = str(exc)

    return st
