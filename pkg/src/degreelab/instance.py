"""The instance file format: one textual grammar for every declaration.

A file is a sequence of declarations; every name must be declared before it
is referenced.  Oracle tables are collected first (they fix the structure all
terms are validated against).  Terms use the canonical syntax everywhere.
Line comments start with ``//``.

    oracle #o1 { K -> S, S -> K }
    fuel 10000
    universe U = [K, S, #o1]
    carrier X = [K, S]
    carrier P = product X X
    assembly A { point x names [K] point y names [S, (K K)] }
    morphism f : X -> X realizer ((S K) K) graph { K -> K, S -> S }
    extmorphism m : A -> A realizer ((S K) K) pointmap { (K, x) -> x, ... }
    tracked t over X { K -> K, S -> S }
    family phi over X policy nonempty { K -> [K], S -> [S] }
    family psi over A { (K, x) -> [K], ... }
    predicate F over X index Y { (K, K) -> [S], ... }
    extpredicate e over X { K -> [[K], []], S -> [] }
    dialpredicate d over X { (K; [K, S]) -> [K], ... }
    witness w1 = uniform ((S K) K)
    witness w2 = perpoint { K -> K, (K, S) -> (K K) }
    witness w3 = fwback k = f, h = K
    witness w4 = extfwback k = m, h = K
    witness w5 = bounded 5
    witness w6 = dial { (K; [K]) -> [S] } h = K
    witness w7 = extstrong k = K, choice { (K; [K]) -> [S] }, h = K
    witness w8 = mediate h = f, base = w1
    compobject c1 = forall full T leg f payload t
    claim c : phi <=_M psi by w1
    result c holds

Machine-format reports are a subset of the same grammar (``result`` lines),
so reports re-parse and search output can be fed back to ``check``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .completions import CompletionObject, CompletionWitness
from .doctrines import (
    ALLOW_EMPTY,
    DOCTRINES,
    NONEMPTY,
    AssemblyFamily,
    Bounded,
    DialecticaPredicate,
    DialecticaWitness,
    ExtForwardBackward,
    ExtStrong,
    ExtendedPredicate,
    ForwardBackward,
    MassFamily,
    PerPoint,
    Predicate,
    TrackedFamily,
    Uniform,
)
from .pca import Pca, is_normal
from .spaces import (
    Assembly,
    ExtMorphism,
    FinMap,
    FinSet,
    SpaceError,
    assembly,
    carrier,
    carrier_product,
    ext_product,
)
from .terms import App, Oracle, Term, TermSyntaxError, K, S, to_text


class InstanceError(ValueError):
    """Parse or validation failure, with a line number."""

    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line else ""
        super().__init__(where + message)
        self.line = line


@dataclass
class Claim:
    name: str
    lhs: str
    doc: str
    rhs: str
    witness: str


@dataclass
class ResultLine:
    claim: str
    status: str
    counterexample: tuple = ()
    detail: str = ""


@dataclass
class Instance:
    pca: Pca
    fuel: int = 10_000
    universes: dict = field(default_factory=dict)
    carriers: dict = field(default_factory=dict)
    assemblies: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    extmorphisms: dict = field(default_factory=dict)
    tracked: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    predicates: dict = field(default_factory=dict)
    extpredicates: dict = field(default_factory=dict)
    dialpredicates: dict = field(default_factory=dict)
    compobjects: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    claims: list = field(default_factory=list)
    results: list = field(default_factory=list)
    decls: list = field(default_factory=list)  # (kind, name) in file order

    def element(self, name: str):
        for section in (self.tracked, self.families, self.predicates,
                        self.extpredicates, self.dialpredicates, self.compobjects):
            if name in section:
                return section[name]
        raise InstanceError(f"no family/predicate/object named {name!r}")

    def names(self) -> set:
        out = set()
        for _, name in self.decls:
            out.add(name)
        return out


# ---------------------------------------------------------------------------
# Tokenizer

_PUNCT = ("->", "<=_", "(", ")", "[", "]", "{", "}", ",", ";", ":", "=")


@dataclass
class Tok:
    kind: str  # ident | oracle | int | punct
    text: str
    line: int


def _tokenize(text: str) -> list[Tok]:
    toks: list[Tok] = []
    i, n, line = 0, len(text), 1
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
            continue
        if c.isspace():
            i += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        matched = False
        for p in _PUNCT:
            if text.startswith(p, i):
                toks.append(Tok("punct", p, line))
                i += len(p)
                matched = True
                break
        if matched:
            continue
        if c == "#":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            if j == i + 1:
                raise InstanceError("'#' must start an oracle name", line)
            toks.append(Tok("oracle", text[i + 1 : j], line))
            i = j
        elif c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Tok("int", text[i:j], line))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            toks.append(Tok("ident", text[i:j], line))
            i = j
        else:
            raise InstanceError(f"unexpected character {c!r}", line)
    return toks


class _Parser:
    def __init__(self, toks: list[Tok]):
        self.toks = toks
        self.i = 0

    def done(self) -> bool:
        return self.i >= len(self.toks)

    def peek(self) -> Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def line(self) -> int:
        t = self.peek()
        return t.line if t else (self.toks[-1].line if self.toks else 0)

    def next(self) -> Tok:
        if self.done():
            raise InstanceError("unexpected end of file", self.toks[-1].line if self.toks else 0)
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Tok:
        t = self.next()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            raise InstanceError(f"expected {want!r}, found {t.text!r}", t.line)
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.peek()
        return t is not None and t.kind == kind and (text is None or t.text == text)

    def eat(self, kind: str, text: str | None = None) -> bool:
        if self.at(kind, text):
            self.i += 1
            return True
        return False

    # -- terms ---------------------------------------------------------

    def term(self) -> Term:
        t = self.next()
        if t.kind == "ident" and t.text == "K":
            return K
        if t.kind == "ident" and t.text == "S":
            return S
        if t.kind == "oracle":
            return Oracle(t.text)
        if t.kind == "punct" and t.text == "(":
            fn = self.term()
            arg = self.term()
            self.expect("punct", ")")
            return App(fn, arg)
        raise InstanceError(f"expected a term, found {t.text!r}", t.line)

    def term_list(self) -> tuple[Term, ...]:
        self.expect("punct", "[")
        out = []
        if not self.at("punct", "]"):
            out.append(self.term())
            while self.eat("punct", ","):
                out.append(self.term())
        self.expect("punct", "]")
        return tuple(out)

    def set_list(self) -> tuple[tuple[Term, ...], ...]:
        self.expect("punct", "[")
        out = []
        if not self.at("punct", "]"):
            out.append(self.term_list())
            while self.eat("punct", ","):
                out.append(self.term_list())
        self.expect("punct", "]")
        return tuple(out)

    def ident(self) -> str:
        return self.expect("ident").text

    def integer(self) -> int:
        return int(self.expect("int").text)


# ---------------------------------------------------------------------------
# Keys (context-dependent: carrier points are terms, assembly keys are
# naming pairs "(term, pointid)")


def _parse_key(p: _Parser, base) -> object:
    if isinstance(base, FinSet):
        return p.term()
    if isinstance(base, Assembly):
        p.expect("punct", "(")
        name = p.term()
        p.expect("punct", ",")
        pid = _point_id(p)
        p.expect("punct", ")")
        return (name, pid)
    raise InstanceError("cannot key into this object", p.line())


def _point_id(p: _Parser):
    t = p.next()
    if t.kind != "ident" or t.text in ("K", "S"):
        raise InstanceError("point ids are identifiers other than K and S", t.line)
    return t.text


def _parse_point(p: _Parser, obj):
    """A point of a carrier (term) or of an assembly (id or (x, y) tuple)."""
    if isinstance(obj, FinSet):
        return p.term()
    if p.at("punct", "("):
        p.expect("punct", "(")
        a = _parse_point_id_or_tuple(p)
        p.expect("punct", ",")
        b = _parse_point_id_or_tuple(p)
        p.expect("punct", ")")
        return (a, b)
    return _point_id(p)


def _parse_point_id_or_tuple(p: _Parser):
    if p.at("punct", "("):
        p.expect("punct", "(")
        a = _parse_point_id_or_tuple(p)
        p.expect("punct", ",")
        b = _parse_point_id_or_tuple(p)
        p.expect("punct", ")")
        return (a, b)
    return _point_id(p)


# ---------------------------------------------------------------------------
# Parsing declarations


def parse_instance(text: str) -> Instance:
    toks = _tokenize(text)
    # first pass: oracle tables and fuel, which fix the structure
    pre = _Parser(toks)
    oracles: dict[str, dict] = {}
    fuel = 10_000
    while not pre.done():
        t = pre.next()
        if t.kind == "ident" and t.text == "oracle":
            name_tok = pre.expect("oracle")
            table: dict[Term, Term] = {}
            pre.expect("punct", "{")
            if not pre.at("punct", "}"):
                while True:
                    key = pre.term()
                    pre.expect("punct", "->")
                    val = pre.term()
                    table[key] = val
                    if not pre.eat("punct", ","):
                        break
            pre.expect("punct", "}")
            if name_tok.text in oracles:
                raise InstanceError(f"duplicate oracle #{name_tok.text}", name_tok.line)
            oracles[name_tok.text] = table
        elif t.kind == "ident" and t.text == "fuel":
            fuel = pre.integer()
    try:
        pca = Pca(oracles=oracles, default_fuel=fuel)
    except ValueError as e:
        raise InstanceError(str(e)) from e

    inst = Instance(pca=pca, fuel=fuel)
    p = _Parser(toks)
    while not p.done():
        tok = p.next()
        if tok.kind != "ident":
            raise InstanceError(f"expected a declaration, found {tok.text!r}", tok.line)
        kind = tok.text
        try:
            _DECL_PARSERS[kind](p, inst)
        except KeyError:
            raise InstanceError(f"unknown declaration {kind!r}", tok.line) from None
        except (SpaceError, ValueError) as e:
            if isinstance(e, InstanceError):
                raise
            raise InstanceError(str(e), tok.line) from e
    return inst


def _fresh(inst: Instance, name: str, line: int) -> None:
    if name in inst.names():
        raise InstanceError(f"name {name!r} already declared", line)


def _decl_oracle(p: _Parser, inst: Instance) -> None:
    p.expect("oracle")
    p.expect("punct", "{")
    while not p.eat("punct", "}"):
        p.next()


def _decl_fuel(p: _Parser, inst: Instance) -> None:
    p.integer()


def _decl_universe(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("punct", "=")
    inst.universes[name] = carrier(inst.pca, p.term_list())
    inst.decls.append(("universe", name))


def _decl_carrier(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("punct", "=")
    if p.at("ident", "product"):
        p.next()
        left = _lookup(inst.carriers, p.ident(), "carrier", p.line())
        right = _lookup(inst.carriers, p.ident(), "carrier", p.line())
        prod = carrier_product(inst.pca, left, right)
        inst.carriers[name] = prod.object
        inst.morphisms[name + "_fst"] = prod.fst
        inst.morphisms[name + "_snd"] = prod.snd
        inst.decls.append(("carrier", name))
        inst.decls.append(("morphism", name + "_fst"))
        inst.decls.append(("morphism", name + "_snd"))
        return
    inst.carriers[name] = carrier(inst.pca, p.term_list())
    inst.decls.append(("carrier", name))


def _decl_assembly(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    if p.eat("punct", "="):
        p.expect("ident", "product")
        left = _lookup(inst.assemblies, p.ident(), "assembly", p.line())
        right = _lookup(inst.assemblies, p.ident(), "assembly", p.line())
        prod = ext_product(inst.pca, left, right)
        inst.assemblies[name] = prod.object
        inst.extmorphisms[name + "_fst"] = prod.fst
        inst.extmorphisms[name + "_snd"] = prod.snd
        inst.decls.append(("assembly", name))
        inst.decls.append(("extmorphism", name + "_fst"))
        inst.decls.append(("extmorphism", name + "_snd"))
        return
    p.expect("punct", "{")
    points = []
    naming = []
    while p.at("ident", "point"):
        p.next()
        pid = _point_id(p)
        p.expect("ident", "names")
        for t in p.term_list():
            naming.append((t, pid))
        points.append(pid)
    p.expect("punct", "}")
    inst.assemblies[name] = assembly(inst.pca, points, naming)
    inst.decls.append(("assembly", name))


def _lookup(section: dict, name: str, what: str, line: int):
    if name not in section:
        raise InstanceError(f"unknown {what} {name!r}", line)
    return section[name]


def _object_lookup(inst: Instance, name: str, line: int):
    if name in inst.carriers:
        return inst.carriers[name]
    if name in inst.universes:
        return inst.universes[name]
    if name in inst.assemblies:
        return inst.assemblies[name]
    raise InstanceError(f"unknown carrier/assembly {name!r}", line)


def _decl_morphism(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("punct", ":")
    src = _object_lookup(inst, p.ident(), p.line())
    p.expect("punct", "->")
    tgt = _object_lookup(inst, p.ident(), p.line())
    realizer = None
    if p.at("ident", "realizer"):
        p.next()
        realizer = p.term()
    p.expect("ident", "graph")
    p.expect("punct", "{")
    mapping = {}
    if not p.at("punct", "}"):
        while True:
            key = _parse_point(p, src)
            p.expect("punct", "->")
            val = _parse_point(p, tgt)
            mapping[key] = val
            if not p.eat("punct", ","):
                break
    p.expect("punct", "}")
    m = FinMap(src, tgt, mapping, realizer)
    if realizer is not None:
        m.check_realizer(inst.pca)
    inst.morphisms[name] = m
    inst.decls.append(("morphism", name))


def _decl_extmorphism(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("punct", ":")
    src = _lookup(inst.assemblies, p.ident(), "assembly", p.line())
    p.expect("punct", "->")
    tgt = _lookup(inst.assemblies, p.ident(), "assembly", p.line())
    p.expect("ident", "realizer")
    realizer = p.term()
    p.expect("ident", "pointmap")
    p.expect("punct", "{")
    pointmap = {}
    if not p.at("punct", "}"):
        while True:
            p.expect("punct", "(")
            nm = p.term()
            p.expect("punct", ",")
            pid = _parse_point_id_or_tuple(p)
            p.expect("punct", ")")
            p.expect("punct", "->")
            val = _parse_point_id_or_tuple(p)
            pointmap[(nm, pid)] = val
            if not p.eat("punct", ","):
                break
    p.expect("punct", "}")
    inst.extmorphisms[name] = ExtMorphism(src, tgt, realizer, pointmap)
    inst.decls.append(("extmorphism", name))


def _decl_tracked(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("ident", "over")
    base = _object_lookup(inst, p.ident(), p.line())
    if not isinstance(base, FinSet):
        raise InstanceError("tracked families live over carriers", line)
    p.expect("punct", "{")
    values = {}
    if not p.at("punct", "}"):
        while True:
            key = p.term()
            p.expect("punct", "->")
            values[key] = p.term()
            if not p.eat("punct", ","):
                break
    p.expect("punct", "}")
    inst.tracked[name] = TrackedFamily(base, values)
    inst.decls.append(("tracked", name))


def _parse_policy(p: _Parser) -> str | None:
    if p.at("ident", "policy"):
        p.next()
        word = p.ident()
        if word == "nonempty":
            return NONEMPTY
        if word == "allowempty":
            return ALLOW_EMPTY
        raise InstanceError(f"unknown policy {word!r}", p.line())
    return None


def _decl_family(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("ident", "over")
    base = _object_lookup(inst, p.ident(), p.line())
    policy = _parse_policy(p)
    p.expect("punct", "{")
    values = {}
    if not p.at("punct", "}"):
        while True:
            key = _parse_key(p, base)
            p.expect("punct", "->")
            values[key] = frozenset(p.term_list())
            if not p.eat("punct", ","):
                break
    p.expect("punct", "}")
    if isinstance(base, FinSet):
        inst.families[name] = MassFamily(base, values, policy or ALLOW_EMPTY)
    else:
        inst.families[name] = AssemblyFamily(base, values, policy or ALLOW_EMPTY)
    inst.decls.append(("family", name))


def _decl_predicate(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("ident", "over")
    base = _object_lookup(inst, p.ident(), p.line())
    p.expect("ident", "index")
    index = _object_lookup(inst, p.ident(), p.line())
    policy = _parse_policy(p)
    p.expect("punct", "{")
    table = {}
    if not p.at("punct", "}"):
        while True:
            p.expect("punct", "(")
            bkey = _parse_key(p, base)
            p.expect("punct", ";")
            ikey = _parse_key(p, index)
            p.expect("punct", ")")
            p.expect("punct", "->")
            table[(bkey, ikey)] = frozenset(p.term_list())
            if not p.eat("punct", ","):
                break
    p.expect("punct", "}")
    inst.predicates[name] = Predicate(base, index, table, policy or NONEMPTY)
    inst.decls.append(("predicate", name))


def _decl_extpredicate(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("ident", "over")
    dom = _object_lookup(inst, p.ident(), p.line())
    if not isinstance(dom, FinSet):
        raise InstanceError("extended predicates live over carriers", line)
    p.expect("punct", "{")
    table = {}
    if not p.at("punct", "}"):
        while True:
            key = p.term()
            p.expect("punct", "->")
            table[key] = frozenset(frozenset(ts) for ts in p.set_list())
            if not p.eat("punct", ","):
                break
    p.expect("punct", "}")
    inst.extpredicates[name] = ExtendedPredicate(dom, table)
    inst.decls.append(("extpredicate", name))


def _decl_dialpredicate(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("ident", "over")
    base = _object_lookup(inst, p.ident(), p.line())
    if not isinstance(base, FinSet):
        raise InstanceError("relation predicates live over carriers", line)
    p.expect("punct", "{")
    table = {}
    if not p.at("punct", "}"):
        while True:
            p.expect("punct", "(")
            x = p.term()
            p.expect("punct", ";")
            a = frozenset(p.term_list())
            p.expect("punct", ")")
            p.expect("punct", "->")
            table[(x, a)] = frozenset(p.term_list())
            if not p.eat("punct", ","):
                break
    p.expect("punct", "}")
    inst.dialpredicates[name] = DialecticaPredicate(base, table)
    inst.decls.append(("dialpredicate", name))


def _decl_witness(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("punct", "=")
    head = p.ident()
    if head == "uniform":
        w = Uniform(p.term())
    elif head == "bounded":
        w = Bounded(p.integer())
    elif head == "perpoint":
        p.expect("punct", "{")
        mapping = {}
        if not p.at("punct", "}"):
            while True:
                key = _parse_perpoint_key(p)
                p.expect("punct", "->")
                mapping[key] = p.term()
                if not p.eat("punct", ","):
                    break
        p.expect("punct", "}")
        w = PerPoint(mapping)
    elif head == "fwback":
        p.expect("ident", "k")
        p.expect("punct", "=")
        k = _lookup(inst.morphisms, p.ident(), "morphism", p.line())
        p.expect("punct", ",")
        p.expect("ident", "h")
        p.expect("punct", "=")
        w = ForwardBackward(k, p.term())
    elif head == "extfwback":
        p.expect("ident", "k")
        p.expect("punct", "=")
        k = _lookup(inst.extmorphisms, p.ident(), "ext morphism", p.line())
        p.expect("punct", ",")
        p.expect("ident", "h")
        p.expect("punct", "=")
        w = ExtForwardBackward(k, p.term())
    elif head == "dial":
        p.expect("punct", "{")
        choice = {}
        if not p.at("punct", "}"):
            while True:
                p.expect("punct", "(")
                x = p.term()
                p.expect("punct", ";")
                a = frozenset(p.term_list())
                p.expect("punct", ")")
                p.expect("punct", "->")
                choice[(x, a)] = frozenset(p.term_list())
                if not p.eat("punct", ","):
                    break
        p.expect("punct", "}")
        p.expect("ident", "h")
        p.expect("punct", "=")
        w = DialecticaWitness(choice, p.term())
    elif head == "extstrong":
        p.expect("ident", "k")
        p.expect("punct", "=")
        k = p.term()
        p.expect("punct", ",")
        p.expect("ident", "choice")
        p.expect("punct", "{")
        choice = {}
        if not p.at("punct", "}"):
            while True:
                p.expect("punct", "(")
                x = p.term()
                p.expect("punct", ";")
                a = frozenset(p.term_list())
                p.expect("punct", ")")
                p.expect("punct", "->")
                choice[(x, a)] = frozenset(p.term_list())
                if not p.eat("punct", ","):
                    break
        p.expect("punct", "}")
        p.expect("punct", ",")
        p.expect("ident", "h")
        p.expect("punct", "=")
        w = ExtStrong(k, choice, p.term())
    elif head == "mediate":
        p.expect("ident", "h")
        p.expect("punct", "=")
        mname = p.ident()
        if mname in inst.morphisms:
            med = inst.morphisms[mname]
        elif mname in inst.extmorphisms:
            med = inst.extmorphisms[mname]
        else:
            raise InstanceError(f"unknown morphism {mname!r}", p.line())
        p.expect("punct", ",")
        p.expect("ident", "base")
        p.expect("punct", "=")
        w = CompletionWitness(med, _lookup(inst.witnesses, p.ident(), "witness", p.line()))
    else:
        raise InstanceError(f"unknown witness form {head!r}", line)
    inst.witnesses[name] = w
    inst.decls.append(("witness", name))


def _parse_perpoint_key(p: _Parser):
    """Either a term, or (term, term) for per-solution keys, or
    (term, pointid) for assembly positions."""
    if not p.at("punct", "("):
        return p.term()
    save = p.i
    p.expect("punct", "(")
    first = p.term()
    if p.eat("punct", ","):
        if p.at("ident") and p.peek().text not in ("K", "S"):
            pid = _point_id(p)
            p.expect("punct", ")")
            return (first, pid)
        second = p.term()
        p.expect("punct", ")")
        return (first, second)
    # it was a parenthesized application after all
    p.i = save
    return p.term()


def _decl_compobject(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("punct", "=")
    kind = p.ident()
    klass = p.ident()
    doc = p.ident()
    p.expect("ident", "leg")
    lname = p.ident()
    if lname in inst.morphisms:
        leg = inst.morphisms[lname]
    elif lname in inst.extmorphisms:
        leg = inst.extmorphisms[lname]
    else:
        raise InstanceError(f"unknown morphism {lname!r}", p.line())
    p.expect("ident", "payload")
    pname = p.ident()
    payload = inst.element(pname)
    inst.compobjects[name] = CompletionObject(kind, klass, doc, leg, payload)
    inst.decls.append(("compobject", name))


def _decl_claim(p: _Parser, inst: Instance) -> None:
    line = p.line()
    name = p.ident()
    _fresh(inst, name, line)
    p.expect("punct", ":")
    lhs = p.ident()
    p.expect("punct", "<=_")
    doc = p.ident()
    if doc not in DOCTRINES and doc != "comp":
        raise InstanceError(f"unknown doctrine id {doc!r}", line)
    rhs = p.ident()
    p.expect("ident", "by")
    wname = p.ident()
    inst.element(lhs)
    inst.element(rhs)
    _lookup(inst.witnesses, wname, "witness", line)
    inst.claims.append(Claim(name, lhs, doc, rhs, wname))
    inst.decls.append(("claim", name))


def _decl_result(p: _Parser, inst: Instance) -> None:
    claim = p.ident()
    status = p.ident()
    counterexample = ()
    detail = ""
    if p.at("ident", "counterexample"):
        p.next()
        p.expect("punct", "(")
        items = []
        if not p.at("punct", ")"):
            while True:
                parts = []
                while not (p.at("punct", ",") or p.at("punct", ")")):
                    parts.append(p.next().text)
                items.append(" ".join(parts))
                if not p.eat("punct", ","):
                    break
        p.expect("punct", ")")
        counterexample = tuple(items)
    if p.at("ident", "unknowns"):
        p.next()
        detail = f"unknowns {p.integer()}"
    inst.results.append(ResultLine(claim, status, counterexample, detail))
    inst.decls.append(("result", claim))


_DECL_PARSERS = {
    "oracle": _decl_oracle,
    "fuel": _decl_fuel,
    "universe": _decl_universe,
    "carrier": _decl_carrier,
    "assembly": _decl_assembly,
    "morphism": _decl_morphism,
    "extmorphism": _decl_extmorphism,
    "tracked": _decl_tracked,
    "family": _decl_family,
    "predicate": _decl_predicate,
    "extpredicate": _decl_extpredicate,
    "dialpredicate": _decl_dialpredicate,
    "witness": _decl_witness,
    "compobject": _decl_compobject,
    "claim": _decl_claim,
    "result": _decl_result,
}


# ---------------------------------------------------------------------------
# Printing (canonical form; print . parse is the identity up to layout)


def _fmt_point(pt) -> str:
    if isinstance(pt, Term):
        return to_text(pt)
    if isinstance(pt, tuple):
        return "(" + ", ".join(_fmt_point(q) for q in pt) + ")"
    return str(pt)


def _fmt_terms(ts) -> str:
    from .terms import term_key

    return "[" + ", ".join(to_text(t) for t in sorted(ts, key=term_key)) + "]"


def _fmt_key(key) -> str:
    if isinstance(key, Term):
        return to_text(key)
    name, pid = key
    return f"({to_text(name)}, {_fmt_point(pid)})"


def print_instance(inst: Instance) -> str:
    out = []
    for oname in sorted(inst.pca.oracles):
        entries = inst.pca.oracles[oname]
        body = ", ".join(f"{to_text(k)} -> {to_text(v)}" for k, v in sorted(entries.items(), key=lambda kv: to_text(kv[0])))
        out.append(f"oracle #{oname} {{ {body} }}")
    out.append(f"fuel {inst.fuel}")
    printed_aux = set()
    for kind, name in inst.decls:
        if kind == "universe":
            out.append(f"universe {name} = {_fmt_terms(inst.universes[name].points)}")
        elif kind == "carrier":
            out.append(f"carrier {name} = {_fmt_terms(inst.carriers[name].points)}")
        elif kind == "assembly":
            asm = inst.assemblies[name]
            parts = []
            for pt in asm.points:
                names = [n for n, x in asm.naming if x == pt]
                parts.append(f"point {_fmt_point(pt)} names {_fmt_terms(names)}")
            out.append(f"assembly {name} {{ " + " ".join(parts) + " }")
        elif kind == "morphism":
            m = inst.morphisms[name]
            out.append(_fmt_morphism(inst, name, m))
        elif kind == "extmorphism":
            m = inst.extmorphisms[name]
            body = ", ".join(
                f"({to_text(n)}, {_fmt_point(x)}) -> {_fmt_point(v)}"
                for (n, x), v in sorted(m.pointmap.items(), key=lambda kv: (to_text(kv[0][0]), str(kv[0][1])))
            )
            out.append(
                f"extmorphism {name} : {_obj_name(inst, m.source)} -> {_obj_name(inst, m.target)} "
                f"realizer {to_text(m.realizer)} pointmap {{ {body} }}"
            )
        elif kind == "tracked":
            fam = inst.tracked[name]
            body = ", ".join(f"{_fmt_key(k)} -> {to_text(v)}" for k, v in sorted(fam.values.items(), key=lambda kv: _fmt_key(kv[0])))
            out.append(f"tracked {name} over {_obj_name(inst, fam.base)} {{ {body} }}")
        elif kind == "family":
            fam = inst.families[name]
            pol = " policy nonempty" if fam.policy == NONEMPTY else ""
            body = ", ".join(
                f"{_fmt_key(k)} -> {_fmt_terms(v)}" for k, v in sorted(fam.values.items(), key=lambda kv: _fmt_key(kv[0]))
            )
            out.append(f"family {name} over {_obj_name(inst, fam.base)}{pol} {{ {body} }}")
        elif kind == "predicate":
            pred = inst.predicates[name]
            pol = "" if pred.policy == NONEMPTY else " policy allowempty"
            body = ", ".join(
                f"({_fmt_key(b)}; {_fmt_key(i)}) -> {_fmt_terms(v)}"
                for (b, i), v in sorted(pred.table.items(), key=lambda kv: (_fmt_key(kv[0][0]), _fmt_key(kv[0][1])))
            )
            out.append(
                f"predicate {name} over {_obj_name(inst, pred.base)} index {_obj_name(inst, pred.index)}{pol} {{ {body} }}"
            )
        elif kind == "extpredicate":
            ep = inst.extpredicates[name]
            body = ", ".join(
                f"{to_text(k)} -> [" + ", ".join(_fmt_terms(a) for a in sorted(v, key=lambda s: sorted(map(to_text, s)))) + "]"
                for k, v in sorted(ep.table.items(), key=lambda kv: to_text(kv[0]))
            )
            out.append(f"extpredicate {name} over {_obj_name(inst, ep.dom)} {{ {body} }}")
        elif kind == "dialpredicate":
            dp = inst.dialpredicates[name]
            body = ", ".join(
                f"({_fmt_key(x)}; {_fmt_terms(a)}) -> {_fmt_terms(v)}"
                for (x, a), v in sorted(dp.table.items(), key=lambda kv: (_fmt_key(kv[0][0]), sorted(map(to_text, kv[0][1]))))
            )
            out.append(f"dialpredicate {name} over {_obj_name(inst, dp.base)} {{ {body} }}")
        elif kind == "witness":
            out.append(format_witness(inst, name, inst.witnesses[name]))
        elif kind == "compobject":
            obj = inst.compobjects[name]
            leg_name = _morphism_name(inst, obj.leg)
            payload_name = _payload_name(inst, obj.payload)
            out.append(f"compobject {name} = {obj.kind} {obj.klass} {obj.doc} leg {leg_name} payload {payload_name}")
        elif kind == "claim":
            c = next(c for c in inst.claims if c.name == name)
            out.append(f"claim {c.name} : {c.lhs} <=_{c.doc} {c.rhs} by {c.witness}")
        elif kind == "result":
            r = next(r for r in inst.results if r.claim == name)
            line = f"result {r.claim} {r.status}"
            if r.counterexample:
                line += " counterexample (" + ", ".join(r.counterexample) + ")"
            out.append(line)
    return "\n".join(out) + "\n"


def _fmt_morphism(inst: Instance, name: str, m: FinMap) -> str:
    body = ", ".join(
        f"{_fmt_point(k)} -> {_fmt_point(v)}"
        for k, v in sorted(m.mapping.items(), key=lambda kv: _fmt_point(kv[0]))
    )
    realizer = f" realizer {to_text(m.realizer)}" if m.realizer is not None else ""
    src_name = _obj_name(inst, m.source)
    tgt_name = _obj_name(inst, m.target)
    return f"morphism {name} : {src_name} -> {tgt_name}{realizer} graph {{ {body} }}"


def _obj_name(inst: Instance, obj) -> str:
    for section in (inst.carriers, inst.universes, inst.assemblies):
        for name, val in section.items():
            if val == obj:
                return name
    raise InstanceError("object has no declared name")


def _morphism_name(inst: Instance, m) -> str:
    for name, val in {**inst.morphisms, **inst.extmorphisms}.items():
        if val is m or val == m:
            return name
    raise InstanceError("morphism has no declared name")


def _payload_name(inst: Instance, payload) -> str:
    for section in (inst.tracked, inst.families, inst.predicates, inst.extpredicates, inst.dialpredicates):
        for name, val in section.items():
            if val is payload or val == payload:
                return name
    raise InstanceError("payload has no declared name")


def format_witness(inst: Instance, name: str, w) -> str:
    if isinstance(w, Uniform):
        return f"witness {name} = uniform {to_text(w.term)}"
    if isinstance(w, Bounded):
        return f"witness {name} = bounded {w.bound}"
    if isinstance(w, PerPoint):
        body = ", ".join(
            f"{_fmt_perpoint_key(k)} -> {to_text(v)}"
            for k, v in sorted(w.mapping.items(), key=lambda kv: _fmt_perpoint_key(kv[0]))
        )
        return f"witness {name} = perpoint {{ {body} }}"
    if isinstance(w, ForwardBackward):
        return f"witness {name} = fwback k = {_morphism_name(inst, w.forward)}, h = {to_text(w.backward)}"
    if isinstance(w, ExtForwardBackward):
        return f"witness {name} = extfwback k = {_morphism_name(inst, w.forward)}, h = {to_text(w.backward)}"
    if isinstance(w, DialecticaWitness):
        body = ", ".join(
            f"({_fmt_key(x)}; {_fmt_terms(a)}) -> {_fmt_terms(v)}"
            for (x, a), v in sorted(w.choice.items(), key=lambda kv: (_fmt_key(kv[0][0]), sorted(map(to_text, kv[0][1]))))
        )
        return f"witness {name} = dial {{ {body} }} h = {to_text(w.backward)}"
    if isinstance(w, ExtStrong):
        body = ", ".join(
            f"({to_text(x)}; {_fmt_terms(a)}) -> {_fmt_terms(v)}"
            for (x, a), v in sorted(w.choice.items(), key=lambda kv: (to_text(kv[0][0]), sorted(map(to_text, kv[0][1]))))
        )
        return f"witness {name} = extstrong k = {to_text(w.forward)}, choice {{ {body} }}, h = {to_text(w.backward)}"
    if isinstance(w, CompletionWitness):
        base_name = next((n for n, v in inst.witnesses.items() if v is w.base), None)
        if base_name is None:
            raise InstanceError("completion base witness has no declared name")
        return f"witness {name} = mediate h = {_morphism_name(inst, w.mediator)}, base = {base_name}"
    raise InstanceError(f"cannot format witness {type(w).__name__}")


def _fmt_perpoint_key(k) -> str:
    if isinstance(k, Term):
        return to_text(k)
    a, b = k
    if isinstance(b, Term):
        return f"({_fmt_key(a) if isinstance(a, Term) else _fmt_point(a)}, {to_text(b)})"
    return f"({to_text(a)}, {_fmt_point(b)})"
