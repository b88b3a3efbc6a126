"""Finite categories stored as dense composition tables.

Objects and arrows carry dense indices; every law check and every
universal-property search downstream runs on those indices, with names
kept only for reports and file round-trips.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    CategoryFileError,
    MalformedInput,
    NotComposable,
    ShapeMismatch,
    UndefinedComposite,
)

UNDEFINED = -1


@dataclass(frozen=True)
class ObjId:
    index: int
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ArrId:
    index: int
    name: str
    dom: int  # object index
    cod: int  # object index

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid category"
        return "\n".join(str(v) for v in self.violations)


class FinCategory:
    """Objects, arrows, identities and a dense |Arr| x |Arr| composition table.

    The table stores ``table[g][f] = g after f`` and UNDEFINED elsewhere.
    Instances are immutable after construction except for the ``validated``
    flag set by :func:`validate_category`.
    """

    def __init__(self, name: str, objects: Sequence[ObjId], arrows: Sequence[ArrId],
                 identity: Sequence[int], table: Sequence[Sequence[int]]):
        self.name = name
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self._identity = tuple(identity)
        self._table = tuple(tuple(row) for row in table)
        self.validated = False
        self._check_shape()
        self._obj_by_name = {o.name: o for o in self.objects}
        self._arr_by_name = {a.name: a for a in self.arrows}
        hom: dict[tuple[int, int], list[ArrId]] = {}
        for f in self.arrows:
            hom.setdefault((f.dom, f.cod), []).append(f)
        self._hom = {k: tuple(v) for k, v in hom.items()}

    def _check_shape(self) -> None:
        n_obj, n_arr = len(self.objects), len(self.arrows)
        for i, o in enumerate(self.objects):
            if o.index != i:
                raise MalformedInput(f"object {o.name} has index {o.index}, expected {i}")
        if len({o.name for o in self.objects}) != n_obj:
            raise MalformedInput("duplicate object names")
        for i, a in enumerate(self.arrows):
            if a.index != i:
                raise MalformedInput(f"arrow {a.name} has index {a.index}, expected {i}")
            if not (0 <= a.dom < n_obj and 0 <= a.cod < n_obj):
                raise MalformedInput(f"arrow {a.name} has dangling endpoint")
        if len({a.name for a in self.arrows}) != n_arr:
            raise MalformedInput("duplicate arrow names")
        if len(self._identity) != n_obj:
            raise MalformedInput("identity map does not cover every object")
        for k in self._identity:
            if not 0 <= k < n_arr:
                raise MalformedInput("identity map has dangling arrow index")
        if len(self._table) != n_arr or any(len(r) != n_arr for r in self._table):
            raise MalformedInput("composition table is not |Arr| x |Arr|")
        for row in self._table:
            for k in row:
                if k != UNDEFINED and not 0 <= k < n_arr:
                    raise MalformedInput("composition table has dangling arrow index")

    # -- construction -----------------------------------------------------

    @classmethod
    def build(cls, objects: Sequence[str], arrows: Iterable[tuple[str, str, str]],
              identities: Mapping[str, str] | str = "auto",
              compositions: Iterable[tuple[str, str, str]] = (),
              name: str = "category") -> "FinCategory":
        """Assemble a category from names.

        ``arrows`` lists non-identity arrows as (name, dom, cod) unless
        identities are given explicitly.  ``compositions`` lists
        (g, f, h) meaning g.f = h; composites with an identity are filled
        in automatically and may be overridden by an explicit entry.
        """
        obj_list = [ObjId(i, n) for i, n in enumerate(objects)]
        if len(obj_list) != len({o.name for o in obj_list}):
            raise MalformedInput("duplicate object names")
        obj_index = {o.name: o.index for o in obj_list}

        arr_specs = list(arrows)
        arr_list: list[ArrId] = []
        for aname, dname, cname in arr_specs:
            if dname not in obj_index:
                raise MalformedInput(f"arrow {aname}: unknown object {dname}")
            if cname not in obj_index:
                raise MalformedInput(f"arrow {aname}: unknown object {cname}")
            arr_list.append(ArrId(len(arr_list), aname, obj_index[dname], obj_index[cname]))

        arr_index = {a.name: a.index for a in arr_list}
        if len(arr_index) != len(arr_list):
            raise MalformedInput("duplicate arrow names")

        identity = [UNDEFINED] * len(obj_list)
        if identities == "auto":
            for o in obj_list:
                auto_name = f"id_{o.name}"
                if auto_name in arr_index:
                    raise MalformedInput(f"auto identity clashes with arrow {auto_name}")
                arr_list.append(ArrId(len(arr_list), auto_name, o.index, o.index))
                arr_index[auto_name] = arr_list[-1].index
                identity[o.index] = arr_list[-1].index
        else:
            for oname, aname in identities.items():
                if oname not in obj_index:
                    raise MalformedInput(f"identity for unknown object {oname}")
                if aname == "auto":
                    auto_name = f"id_{oname}"
                    if auto_name not in arr_index:
                        arr_list.append(ArrId(len(arr_list), auto_name,
                                              obj_index[oname], obj_index[oname]))
                        arr_index[auto_name] = arr_list[-1].index
                    identity[obj_index[oname]] = arr_index[auto_name]
                elif aname in arr_index:
                    identity[obj_index[oname]] = arr_index[aname]
                else:
                    raise MalformedInput(f"identity of {oname} names unknown arrow {aname}")
            for o in obj_list:
                if identity[o.index] == UNDEFINED:
                    raise MalformedInput(f"object {o.name} has no identity arrow")

        n = len(arr_list)
        table = [[UNDEFINED] * n for _ in range(n)]
        # identity composites first, explicit entries may override them
        for f in arr_list:
            table[identity[f.cod]][f.index] = f.index
            table[f.index][identity[f.dom]] = f.index
        for gname, fname, hname in compositions:
            for nm in (gname, fname, hname):
                if nm not in arr_index:
                    raise MalformedInput(f"compose line names unknown arrow {nm}")
            table[arr_index[gname]][arr_index[fname]] = arr_index[hname]

        return cls(name, obj_list, arr_list, identity, table)

    def with_composition(self, g: ArrId, f: ArrId, h: ArrId | None) -> "FinCategory":
        """Copy with one table cell replaced (None clears it). For fault injection."""
        table = [list(row) for row in self._table]
        table[g.index][f.index] = UNDEFINED if h is None else h.index
        return FinCategory(self.name, self.objects, self.arrows, self._identity, table)

    # -- queries -----------------------------------------------------------

    def obj(self, name: str) -> ObjId:
        try:
            return self._obj_by_name[name]
        except KeyError:
            raise MalformedInput(f"unknown object {name}") from None

    def arrow(self, name: str) -> ArrId:
        try:
            return self._arr_by_name[name]
        except KeyError:
            raise MalformedInput(f"unknown arrow {name}") from None

    def identity_of(self, o: ObjId | int) -> ArrId:
        idx = o.index if isinstance(o, ObjId) else o
        return self.arrows[self._identity[idx]]

    def is_identity(self, f: ArrId) -> bool:
        return self._identity[f.dom] == f.index and f.dom == f.cod

    def compose(self, g: ArrId, f: ArrId) -> ArrId:
        """g after f.  Total on composable pairs of a validated category."""
        if f.cod != g.dom:
            raise NotComposable(f"cannot compose {g.name} . {f.name}: "
                                f"dom({g.name}) != cod({f.name})")
        k = self._table[g.index][f.index]
        if k == UNDEFINED:
            raise UndefinedComposite(f"composite {g.name} . {f.name} missing from table")
        return self.arrows[k]

    def hom(self, a: ObjId, b: ObjId) -> tuple[ArrId, ...]:
        """Arrows a -> b in stable (index) order."""
        return self._hom.get((a.index, b.index), ())

    def composable_pairs(self) -> Iterator[tuple[ArrId, ArrId]]:
        for g in self.arrows:
            for f in self.arrows:
                if f.cod == g.dom:
                    yield g, f

    def table_entry(self, g: ArrId, f: ArrId) -> int:
        return self._table[g.index][f.index]

    def __repr__(self) -> str:
        return (f"FinCategory({self.name!r}, {len(self.objects)} objects, "
                f"{len(self.arrows)} arrows)")


def validate_category(c: FinCategory) -> ValidationReport:
    """Check every category law; empty report iff ``c`` is a category.

    Structural defects raise MalformedInput at construction time already;
    this pass reports law failures (identity, associativity, composition
    typing/totality) with the witnessing arrows.  Sets ``c.validated`` on
    success so structure searches can insist on the staged pipeline.
    """
    out: list[Violation] = []

    for o in c.objects:
        ia = c.identity_of(o)
        if ia.dom != o.index or ia.cod != o.index:
            out.append(Violation("identity-endpoints",
                                 f"identity of {o.name} is {ia.name}: {_ends(c, ia)}"))

    for g in c.arrows:
        for f in c.arrows:
            k = c.table_entry(g, f)
            if f.cod == g.dom:
                if k == UNDEFINED:
                    out.append(Violation("compose-missing",
                                         f"composite {g.name} . {f.name} undefined"))
                else:
                    h = c.arrows[k]
                    if h.dom != f.dom or h.cod != g.cod:
                        out.append(Violation("compose-endpoints",
                                             f"{g.name} . {f.name} = {h.name} but "
                                             f"{h.name} is {_ends(c, h)}, expected "
                                             f"{c.objects[f.dom].name} -> {c.objects[g.cod].name}"))
            elif k != UNDEFINED:
                out.append(Violation("compose-spurious",
                                     f"table defines {g.name} . {f.name} "
                                     f"on a non-composable pair"))

    for f in c.arrows:
        left = c.table_entry(c.identity_of(f.cod), f)
        if left != UNDEFINED and left != f.index:
            out.append(Violation("identity-law",
                                 f"id_{c.objects[f.cod].name} . {f.name} = "
                                 f"{c.arrows[left].name}, expected {f.name}"))
        right = c.table_entry(f, c.identity_of(f.dom))
        if right != UNDEFINED and right != f.index:
            out.append(Violation("identity-law",
                                 f"{f.name} . id_{c.objects[f.dom].name} = "
                                 f"{c.arrows[right].name}, expected {f.name}"))

    for h in c.arrows:
        for g in c.arrows:
            if g.cod != h.dom:
                continue
            hg = c.table_entry(h, g)
            if hg == UNDEFINED:
                continue
            for f in c.arrows:
                if f.cod != g.dom:
                    continue
                gf = c.table_entry(g, f)
                if gf == UNDEFINED:
                    continue
                lhs = c.table_entry(h, c.arrows[gf])
                rhs = c.table_entry(c.arrows[hg], f)
                if lhs == UNDEFINED or rhs == UNDEFINED:
                    continue  # totality violation already reported
                if lhs != rhs:
                    out.append(Violation("associativity",
                                         f"{h.name} . ({g.name} . {f.name}) = "
                                         f"{c.arrows[lhs].name} but ({h.name} . {g.name}) . "
                                         f"{f.name} = {c.arrows[rhs].name}"))

    report = ValidationReport(tuple(out))
    if report.ok:
        c.validated = True
    return report


def _ends(c: FinCategory, a: ArrId) -> str:
    return f"{c.objects[a.dom].name} -> {c.objects[a.cod].name}"


def mutually_inverse(c: FinCategory, f: ArrId, g: ArrId) -> bool:
    """True iff g.f and f.g are the two identities."""
    if f.dom != g.cod or f.cod != g.dom:
        raise ShapeMismatch(f"{f.name} and {g.name} do not have opposite endpoints")
    return (c.compose(g, f) == c.identity_of(f.dom)
            and c.compose(f, g) == c.identity_of(g.dom))


# -- category file format ----------------------------------------------------

_OBJECT_RE = re.compile(r"^object\s+(\S+)$")
_ARROW_RE = re.compile(r"^arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$")
_ID_RE = re.compile(r"^id\s+(\S+)\s*=\s*(\S+)$")
_COMPOSE_RE = re.compile(r"^compose\s+(\S+)\s*\.\s*(\S+)\s*=\s*(\S+)$")


def parse_category(text: str, name: str = "category") -> FinCategory:
    """Parse the line-oriented category format.

    Lines: ``object N`` / ``arrow N : A -> B`` / ``id A = N|auto`` /
    ``compose G . F = H``; ``#`` starts a comment.  Errors carry line numbers.
    """
    objects: list[str] = []
    arrows: list[tuple[str, str, str]] = []
    ids: dict[str, str] = {}
    comps: list[tuple[str, str, str, int]] = []
    seen_obj: dict[str, int] = {}
    seen_arr: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _OBJECT_RE.match(line):
            oname = m.group(1)
            if oname in seen_obj:
                raise CategoryFileError(f"object {oname} already declared "
                                        f"on line {seen_obj[oname]}", lineno)
            seen_obj[oname] = lineno
            objects.append(oname)
        elif m := _ARROW_RE.match(line):
            aname, dname, cname = m.groups()
            if aname in seen_arr:
                raise CategoryFileError(f"arrow {aname} already declared "
                                        f"on line {seen_arr[aname]}", lineno)
            if dname not in seen_obj:
                raise CategoryFileError(f"arrow {aname}: unknown object {dname}", lineno)
            if cname not in seen_obj:
                raise CategoryFileError(f"arrow {aname}: unknown object {cname}", lineno)
            seen_arr[aname] = lineno
            arrows.append((aname, dname, cname))
        elif m := _ID_RE.match(line):
            oname, aname = m.groups()
            if oname not in seen_obj:
                raise CategoryFileError(f"id line for unknown object {oname}", lineno)
            if aname != "auto" and aname not in seen_arr:
                raise CategoryFileError(f"id {oname} names unknown arrow {aname}", lineno)
            ids[oname] = aname
        elif m := _COMPOSE_RE.match(line):
            comps.append((m.group(1), m.group(2), m.group(3), lineno))
        else:
            raise CategoryFileError(f"unrecognized line: {line}", lineno)

    for oname in objects:
        if oname not in ids:
            raise CategoryFileError(f"object {oname} has no id line")

    resolved: list[tuple[str, str, str]] = []
    auto_names = {f"id_{o}" for o, a in ids.items() if a == "auto"}
    for gname, fname, hname, lineno in comps:
        for nm in (gname, fname, hname):
            if nm not in seen_arr and nm not in auto_names:
                raise CategoryFileError(f"compose line names unknown arrow {nm}", lineno)
        resolved.append((gname, fname, hname))

    try:
        return FinCategory.build(objects, arrows, identities=ids,
                                 compositions=resolved, name=name)
    except MalformedInput as exc:
        raise CategoryFileError(str(exc)) from exc


def format_category(c: FinCategory) -> str:
    """Render a category back into the file format (parse . format = identity)."""
    lines = [f"# category {c.name}: {len(c.objects)} objects, {len(c.arrows)} arrows"]
    for o in c.objects:
        lines.append(f"object {o.name}")
    identity_indices = {c.identity_of(o).index for o in c.objects}
    for a in c.arrows:
        if a.index in identity_indices:
            continue
        lines.append(f"arrow {a.name} : {c.objects[a.dom].name} -> {c.objects[a.cod].name}")
    for o in c.objects:
        ia = c.identity_of(o)
        if ia.name == f"id_{o.name}":
            lines.append(f"id {o.name} = auto")
        else:
            lines.append(f"arrow {ia.name} : {o.name} -> {o.name}")
            lines.append(f"id {o.name} = {ia.name}")
    for g in c.arrows:
        for f in c.arrows:
            if f.cod != g.dom:
                continue
            if g.index in identity_indices or f.index in identity_indices:
                continue  # identity composites are re-derived on parse
            k = c.table_entry(g, f)
            if k != UNDEFINED:
                lines.append(f"compose {g.name} . {f.name} = {c.arrows[k].name}")
    return "\n".join(lines) + "\n"
