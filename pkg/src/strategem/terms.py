"""Universal term representation.

Generic traversal needs one uniform view of values from many datatypes.
Here a value is wrapped in a `Term` carrying a `TypeTag` that identifies
its concrete datatype.  Tags know how to take a value apart into child
terms and how to put it back together, so traversal code never mentions
the datatypes it walks over.

Three families of datatypes exist:

  * atoms: int, str and bool, registered once per process with zero
    children,
  * algebraic datatypes: a named union of frozen dataclass constructors,
    registered in a `Registry`,
  * containers: sequences, pairs and optionals, instantiated per element
    type through `list_of`, `pair_of` and `optional_of`; each distinct
    instantiation is its own datatype.

Tags compare by identity and are stable for the lifetime of the process.
Registries are populated at import time and then frozen, which also checks
the closure property: every datatype reachable from a registered one is
itself registered.

Ordinary datatypes are registered with `Registry.derive`, which reads
constructor field types straight from dataclass annotations.  A textual
descriptor format (one `TypeName.ConName : FieldType*` line per
constructor) is supported through `descriptor_lines` and
`register_descriptors` for the same purpose.
"""

from __future__ import annotations

import dataclasses
import itertools
import types
import typing
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .effects import Just, NOTHING

__all__ = [
    "TypeTag",
    "ConstructorTag",
    "Term",
    "Registry",
    "INT",
    "STR",
    "BOOL",
    "list_of",
    "pair_of",
    "optional_of",
    "term",
    "type_of",
    "constructor",
    "children",
    "rebuild",
    "cast",
    "same_term",
    "validate_term",
    "descriptor_lines",
    "register_descriptors",
    "ArityMismatch",
    "ChildTypeMismatch",
    "DuplicateRegistration",
    "UnregisteredType",
    "RegistryFrozen",
]


class ArityMismatch(Exception):
    """Rebuild was given the wrong number of children."""


class ChildTypeMismatch(Exception):
    """Rebuild was given a child of the wrong type."""


class DuplicateRegistration(Exception):
    """A datatype name or constructor class was registered twice with a different shape."""


class UnregisteredType(Exception):
    """A datatype was used before being registered."""


class RegistryFrozen(Exception):
    """A frozen registry refused a new registration."""


class TypeTag:
    """Identity of one concrete datatype.

    Tags compare by object identity; the registration machinery hands out
    exactly one tag per datatype, so identity equality coincides with
    datatype equality.
    """

    __slots__ = ("name", "uid", "_entry")
    _uids = itertools.count(1)

    def __init__(self, name: str):
        self.name = name
        self.uid = next(TypeTag._uids)
        self._entry = None

    def __repr__(self):
        return f"TypeTag({self.name})"


@dataclass(frozen=True)
class ConstructorTag:
    """Identity of one constructor of a datatype, with its field types."""

    name: str
    owner: TypeTag
    field_tags: tuple

    @property
    def arity(self) -> int:
        return len(self.field_tags)

    def __repr__(self):
        return f"{self.owner.name}.{self.name}/{self.arity}"


class Term:
    """A value paired with the tag of its datatype.

    Terms are immutable handles.  Equality is structural: same tag, same
    constructor, pairwise equal children.
    """

    __slots__ = ("value", "tag")

    def __init__(self, value, tag: TypeTag):
        self.value = value
        self.tag = tag

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return same_term(self, other)

    def __repr__(self):
        return f"Term({self.value!r} : {self.tag.name})"


def _entry(tag: TypeTag):
    if tag._entry is None:
        raise UnregisteredType(f"datatype {tag.name} was declared but never defined")
    return tag._entry


class _AtomEntry:
    kind = "atom"

    def __init__(self, tag, pytype):
        self.tag = tag
        self.pytype = pytype

    def check(self, value):
        # Exact type: bool is a subclass of int but has its own tag.
        return type(value) is self.pytype

    def constructor_of(self, value):
        return ConstructorTag(repr(value), self.tag, ())

    def children(self, value):
        return ()

    def rebuild(self, value, con, kid_values):
        return value


class _NodeEntry:
    kind = "node"

    def __init__(self, tag, constructors):
        # constructors: list of (class, ConstructorTag, field name tuple)
        self.tag = tag
        self.by_class = {cls: (con, names) for cls, con, names in constructors}
        self.by_con = {con: (cls, names) for cls, con, names in constructors}

    def check(self, value):
        return type(value) in self.by_class

    def constructor_of(self, value):
        return self.by_class[type(value)][0]

    def children(self, value):
        con, names = self.by_class[type(value)]
        return tuple(
            Term(getattr(value, name), ftag) for name, ftag in zip(names, con.field_tags)
        )

    def rebuild(self, value, con, kid_values):
        cls, _ = self.by_con[con]
        return cls(*kid_values)


class _ListEntry:
    kind = "list"

    def __init__(self, tag, elem):
        self.tag = tag
        self.elem = elem
        self.nil = ConstructorTag("Nil", tag, ())
        self.cons = ConstructorTag("Cons", tag, (elem, tag))

    def check(self, value):
        return isinstance(value, (list, tuple))

    def constructor_of(self, value):
        return self.cons if len(value) else self.nil

    def children(self, value):
        if not len(value):
            return ()
        return (Term(value[0], self.elem), Term(value[1:], self.tag))

    def rebuild(self, value, con, kid_values):
        head, tail = kid_values
        if isinstance(tail, tuple):
            return (head,) + tail
        return [head] + tail


class _PairEntry:
    kind = "pair"

    def __init__(self, tag, first, second):
        self.tag = tag
        self.first = first
        self.second = second
        self.pair = ConstructorTag("Pair", tag, (first, second))

    def check(self, value):
        return type(value) is tuple and len(value) == 2

    def constructor_of(self, value):
        return self.pair

    def children(self, value):
        return (Term(value[0], self.first), Term(value[1], self.second))

    def rebuild(self, value, con, kid_values):
        return (kid_values[0], kid_values[1])


class _OptionalEntry:
    kind = "optional"

    def __init__(self, tag, elem):
        self.tag = tag
        self.elem = elem
        self.none = ConstructorTag("None", tag, ())
        self.some = ConstructorTag("Some", tag, (elem,))

    def check(self, value):
        if value is None:
            return True
        return _entry(self.elem).check(value)

    def constructor_of(self, value):
        return self.none if value is None else self.some

    def children(self, value):
        if value is None:
            return ()
        return (Term(value, self.elem),)

    def rebuild(self, value, con, kid_values):
        return kid_values[0]


def _atom(name, pytype):
    tag = TypeTag(name)
    tag._entry = _AtomEntry(tag, pytype)
    return tag


INT = _atom("Int", int)
STR = _atom("Str", str)
BOOL = _atom("Bool", bool)

_ATOM_BY_TYPE = {int: INT, str: STR, bool: BOOL}

_containers: dict = {}


def list_of(elem: TypeTag) -> TypeTag:
    """The datatype of sequences over one element type."""
    key = ("list", elem)
    if key not in _containers:
        tag = TypeTag(f"List({elem.name})")
        tag._entry = _ListEntry(tag, elem)
        _containers[key] = tag
    return _containers[key]


def pair_of(first: TypeTag, second: TypeTag) -> TypeTag:
    """The datatype of two-tuples over two element types."""
    key = ("pair", first, second)
    if key not in _containers:
        tag = TypeTag(f"Pair({first.name},{second.name})")
        tag._entry = _PairEntry(tag, first, second)
        _containers[key] = tag
    return _containers[key]


def optional_of(elem: TypeTag) -> TypeTag:
    """The datatype of an optional value: None or an element."""
    key = ("optional", elem)
    if key not in _containers:
        tag = TypeTag(f"Opt({elem.name})")
        tag._entry = _OptionalEntry(tag, elem)
        _containers[key] = tag
    return _containers[key]


def term(value, tag: TypeTag | None = None) -> Term:
    """Wrap a value as a term, inferring the tag for atoms.

    Values of container or algebraic datatypes need an explicit tag here;
    `Registry.term` can additionally infer tags for its own constructor
    classes.
    """
    if tag is None:
        tag = _ATOM_BY_TYPE.get(type(value))
        if tag is None:
            raise UnregisteredType(
                f"cannot infer a datatype for {value!r}; pass the tag explicitly"
            )
    if not _entry(tag).check(value):
        raise TypeError(f"{value!r} is not a value of datatype {tag.name}")
    return Term(value, tag)


def type_of(t: Term) -> TypeTag:
    return t.tag


def constructor(t: Term) -> ConstructorTag:
    return _entry(t.tag).constructor_of(t.value)


def children(t: Term) -> tuple:
    """The immediate subterms of a term, left to right."""
    return _entry(t.tag).children(t.value)


def rebuild(t: Term, kids: Sequence[Term]) -> Term:
    """Rebuild a term around new children, keeping its constructor.

    Children must match the constructor's arity and field types; with the
    original children the result is structurally equal to the input.
    """
    con = constructor(t)
    kids = tuple(kids)
    if len(kids) != con.arity:
        raise ArityMismatch(
            f"{con!r} takes {con.arity} children, got {len(kids)}"
        )
    for kid, ftag in zip(kids, con.field_tags):
        if kid.tag is not ftag:
            raise ChildTypeMismatch(
                f"{con!r} expects a child of type {ftag.name}, got {kid.tag.name}"
            )
    if con.arity == 0:
        return t
    new_value = _entry(t.tag).rebuild(t.value, con, [kid.value for kid in kids])
    return Term(new_value, t.tag)


def cast(t: Term, target: TypeTag):
    """The underlying value if the term has the target type, else NOTHING."""
    if t.tag is target:
        return Just(t.value)
    return NOTHING


def same_term(a: Term, b: Term) -> bool:
    """Structural equality: equal tags, constructors and children."""
    if a.tag is not b.tag:
        return False
    entry = _entry(a.tag)
    if entry.kind == "atom":
        return type(a.value) is type(b.value) and a.value == b.value
    if entry.constructor_of(a.value) != entry.constructor_of(b.value):
        return False
    return all(same_term(x, y) for x, y in zip(entry.children(a.value), entry.children(b.value)))


def validate_term(t: Term) -> None:
    """Walk a term and check every level against its datatype."""
    if not _entry(t.tag).check(t.value):
        raise TypeError(f"{t.value!r} is not a value of datatype {t.tag.name}")
    for kid in children(t):
        validate_term(kid)


class Registry:
    """Bookkeeper for named algebraic datatypes.

    A datatype is declared to obtain its tag, then defined with its
    constructor classes, which must be dataclasses.  `derive` does both
    steps for a whole family of datatypes by reading field annotations.
    After `freeze` no further definitions are accepted and the closure
    property has been checked.
    """

    def __init__(self):
        self._by_name: dict[str, TypeTag] = {}
        self._classes: dict[type, TypeTag] = {}
        self._signatures: dict[TypeTag, tuple] = {}
        self._frozen = False

    def declare(self, name: str) -> TypeTag:
        """Create (or fetch) the tag for a named datatype."""
        if name in self._by_name:
            return self._by_name[name]
        if self._frozen:
            raise RegistryFrozen(f"registry is frozen; cannot declare {name}")
        tag = TypeTag(name)
        self._by_name[name] = tag
        return tag

    def define(self, tag: TypeTag, constructors: Sequence[tuple]) -> TypeTag:
        """Define a declared datatype by its constructors.

        `constructors` lists (dataclass, field tag sequence) pairs.
        Defining the same datatype twice is an error unless the shape is
        identical, in which case it is a no-op.
        """
        if self._by_name.get(tag.name) is not tag:
            raise UnregisteredType(f"{tag!r} was not declared in this registry")
        signature = tuple((cls, tuple(ftags)) for cls, ftags in constructors)
        if tag in self._signatures:
            if self._signatures[tag] == signature:
                return tag
            raise DuplicateRegistration(
                f"datatype {tag.name} is already defined with a different shape"
            )
        if self._frozen:
            raise RegistryFrozen(f"registry is frozen; cannot define {tag.name}")
        built = []
        for cls, ftags in signature:
            if not dataclasses.is_dataclass(cls):
                raise TypeError(f"constructor {cls!r} of {tag.name} is not a dataclass")
            owner = self._classes.get(cls)
            if owner is not None and owner is not tag:
                raise DuplicateRegistration(
                    f"constructor class {cls.__name__} already belongs to {owner.name}"
                )
            names = tuple(f.name for f in dataclasses.fields(cls))
            if len(names) != len(ftags):
                raise ArityMismatch(
                    f"{tag.name}.{cls.__name__} has {len(names)} fields, got {len(ftags)} tags"
                )
            built.append((cls, ConstructorTag(cls.__name__, tag, ftags), names))
        tag._entry = _NodeEntry(tag, built)
        self._signatures[tag] = signature
        for cls, _, _ in built:
            self._classes[cls] = tag
        return tag

    def derive(self, datatypes: Mapping[str, Sequence[type]]) -> dict[str, TypeTag]:
        """Register a family of datatypes from dataclass annotations.

        Maps each datatype name to its constructor classes.  Field types
        are read from the class annotations: atoms, classes of any
        datatype in the family (or already in the registry), unions of
        such classes, list[X], tuple[X, ...], tuple[X, Y] and Optional[X].
        """
        tags = {name: self.declare(name) for name in datatypes}
        class_map = dict(self._classes)
        for name, classes in datatypes.items():
            for cls in classes:
                class_map[cls] = tags[name]
        for name, classes in datatypes.items():
            constructors = []
            for cls in classes:
                hints = typing.get_type_hints(cls)
                ftags = tuple(
                    self._resolve(hints[f.name], class_map, f"{name}.{cls.__name__}.{f.name}")
                    for f in dataclasses.fields(cls)
                )
                constructors.append((cls, ftags))
            self.define(tags[name], constructors)
        return tags

    def _resolve(self, hint, class_map, where) -> TypeTag:
        direct = _ATOM_BY_TYPE.get(hint)
        if direct is not None:
            return direct
        if isinstance(hint, type) and hint in class_map:
            return class_map[hint]
        origin = typing.get_origin(hint)
        args = typing.get_args(hint)
        if origin is list:
            return list_of(self._resolve(args[0], class_map, where))
        if origin is tuple:
            if len(args) == 2 and args[1] is Ellipsis:
                return list_of(self._resolve(args[0], class_map, where))
            if len(args) == 2:
                return pair_of(
                    self._resolve(args[0], class_map, where),
                    self._resolve(args[1], class_map, where),
                )
            raise UnregisteredType(f"{where}: only pairs and tuple[X, ...] are supported")
        if origin in (typing.Union, types.UnionType):
            members = [a for a in args if a is not type(None)]
            resolved = {self._resolve(a, class_map, where) for a in members}
            if len(resolved) != 1:
                raise UnregisteredType(f"{where}: union members span several datatypes")
            inner = resolved.pop()
            if len(members) != len(args):
                return optional_of(inner)
            return inner
        raise UnregisteredType(f"{where}: cannot resolve annotation {hint!r}")

    def freeze(self) -> None:
        """Refuse further definitions after checking the closure property."""
        seen = set()

        def walk(tag):
            if tag in seen:
                return
            seen.add(tag)
            entry = _entry(tag)
            if entry.kind == "node":
                for con, _ in entry.by_con.items():
                    for ftag in con.field_tags:
                        walk(ftag)
            elif entry.kind == "list":
                walk(entry.elem)
            elif entry.kind == "pair":
                walk(entry.first)
                walk(entry.second)
            elif entry.kind == "optional":
                walk(entry.elem)

        for tag in self._by_name.values():
            walk(tag)
        self._frozen = True

    @property
    def frozen(self) -> bool:
        return self._frozen

    def tag(self, name: str) -> TypeTag:
        if name not in self._by_name:
            raise UnregisteredType(f"no datatype named {name} in this registry")
        return self._by_name[name]

    def term(self, value, tag: TypeTag | None = None) -> Term:
        """Like the module-level `term`, also inferring node datatypes."""
        if tag is None and type(value) in self._classes:
            tag = self._classes[type(value)]
        return term(value, tag)


def descriptor_lines(tag: TypeTag) -> list[str]:
    """Render a node datatype in the textual descriptor format."""
    entry = _entry(tag)
    if entry.kind != "node":
        raise TypeError(f"{tag!r} is not an algebraic datatype")
    lines = []
    for con in entry.by_con:
        fields = " ".join(ftag.name for ftag in con.field_tags)
        lines.append(f"{tag.name}.{con.name} : {fields}".rstrip())
    return lines


def _parse_field_type(text: str, lookup) -> TypeTag:
    text = text.strip()
    for head, wrap in (("List(", list_of), ("Opt(", optional_of)):
        if text.startswith(head) and text.endswith(")"):
            return wrap(_parse_field_type(text[len(head) : -1], lookup))
    if text.startswith("Pair(") and text.endswith(")"):
        inner = text[len("Pair(") : -1]
        depth = 0
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                return pair_of(
                    _parse_field_type(inner[:i], lookup),
                    _parse_field_type(inner[i + 1 :], lookup),
                )
        raise ValueError(f"malformed pair type {text!r}")
    return lookup(text)


def register_descriptors(registry: Registry, text: str):
    """Register datatypes from descriptor text, synthesizing dataclasses.

    Each non-blank line reads `TypeName.ConName : FieldType*` where a
    field type is Int, Str, Bool, a datatype name, or List(T), Pair(T,T),
    Opt(T).  Returns the new tags by name and the synthesized constructor
    classes keyed by (type name, constructor name).
    """
    parsed = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        head, sep, fields = line.partition(":")
        if not sep or "." not in head:
            raise ValueError(f"malformed descriptor line {raw!r}")
        tname, _, cname = head.strip().partition(".")
        parsed.append((tname.strip(), cname.strip(), fields.split()))

    tags = {tname: registry.declare(tname) for tname, _, _ in parsed}

    def lookup(name):
        if name in ("Int", "Str", "Bool"):
            return {"Int": INT, "Str": STR, "Bool": BOOL}[name]
        if name in tags:
            return tags[name]
        return registry.tag(name)

    classes = {}
    grouped: dict[str, list] = {}
    for tname, cname, fields in parsed:
        cls = dataclasses.make_dataclass(
            cname, [(f"f{i}", "object") for i in range(len(fields))], frozen=True
        )
        classes[(tname, cname)] = cls
        ftags = tuple(_parse_field_type(f, lookup) for f in fields)
        grouped.setdefault(tname, []).append((cls, ftags))
    for tname, constructors in grouped.items():
        registry.define(tags[tname], constructors)
    return tags, classes
