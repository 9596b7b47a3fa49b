"""Command-line front end.

Subcommands: check, search, lattice, complete, iso, laws.  Exit status for
claim-running commands: 0 when every claim Holds, 1 when any is Refuted, 2
when any is Unknown, 3 on input errors.  The machine format is a subset of
the instance grammar, so reports and found witnesses re-parse.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import isomorphisms as iso
from .completions import CompletionObject, CompletionWitness, comp_le
from .doctrines import (
    Bounded,
    CheckError,
    DialecticaWitness,
    ExtForwardBackward,
    ExtStrong,
    ForwardBackward,
    MassFamily,
    PerPoint,
    Predicate,
    TrackedFamily,
    Uniform,
    check_le,
)
from .instance import Instance, InstanceError, format_witness, parse_instance, print_instance
from .pca import Pca
from .search import SearchBudget, SearchOutcome, search_witness
from .spaces import FinMap, FinSet, SpaceError, point_text
from .terms import to_text
from .verdicts import Verdict

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (InstanceError, CheckError, SpaceError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="degreelab",
                                description="witness-certified reducibility workbench")
    p.add_argument("--fuel", type=int, default=10_000, help="reduction step budget")
    p.add_argument("--witness-size", type=int, default=7, help="witness term size bound")
    p.add_argument("--time-cap", type=float, default=None, help="wall clock cap for searches (s)")
    p.add_argument("--format", choices=("human", "machine"), default="human")
    p.add_argument("--workers", type=int, default=1)
    sub = p.add_subparsers(required=True)

    c = sub.add_parser("check", help="verify claims in an instance file")
    c.add_argument("file")
    c.add_argument("claims", nargs="*", help="claim names (default: all)")
    c.set_defaults(handler=cmd_check)

    s = sub.add_parser("search", help="search a witness for a claim")
    s.add_argument("file")
    s.add_argument("claim")
    s.set_defaults(handler=cmd_search)

    l = sub.add_parser("lattice", help="materialize lattice operations and laws")
    l.add_argument("file")
    l.add_argument("--doc", choices=("M", "Mw"), default="M")
    l.add_argument("--op", required=True,
                   choices=("bottom", "top", "meet", "join", "subtract", "implies", "law"))
    l.add_argument("--law", help="law id when --op law")
    l.add_argument("--args", dest="operands", nargs="*", default=[],
                   help="family names (or witness names for laws)")
    l.add_argument("--base", help="carrier name for bottom/top")
    l.add_argument("--universe", help="universe name for bottom/subtract")
    l.add_argument("--bound", type=int, default=5, help="inner search bound for implies")
    l.add_argument("--claim", help="claim name a synthesized law witness should certify")
    l.set_defaults(handler=cmd_lattice)

    m = sub.add_parser("complete", help="materialize a completion fiber and its order")
    m.add_argument("file")
    m.add_argument("--object", required=True, help="carrier the fiber sits over")
    m.add_argument("--doc", default="T")
    m.add_argument("--kind", choices=("exists", "forall"), default="forall")
    m.add_argument("--klass", choices=("full", "pure"), default="full")
    m.add_argument("--universe", help="universe for payload values (default: the object)")
    m.add_argument("--index-bound", type=int, default=1, help="max index carrier size")
    m.set_defaults(handler=cmd_complete)

    i = sub.add_parser("iso", help="apply an isomorphism map and transport a witness")
    i.add_argument("file")
    i.add_argument("--map", required=True, dest="mapname",
                   choices=("medvedev", "muchnik", "weihrauch", "strong", "realizer",
                            "extended", "dialectica", "extpred", "extsw_d"))
    i.add_argument("--direction", choices=("forward", "backward"), default="forward")
    i.add_argument("--claim", help="claim to transport")
    i.add_argument("--object", help="object name for object-map-only commands")
    i.set_defaults(handler=cmd_iso)

    w = sub.add_parser("laws", help="run the built-in property suites")
    w.add_argument("suites", nargs="*", help="suite names (default: all)")
    w.set_defaults(handler=cmd_laws)
    return p


def _load(args) -> Instance:
    with open(args.file) as fh:
        text = fh.read()
    inst = parse_instance(text)
    if args.fuel and args.fuel != inst.fuel:
        inst.pca = Pca(oracles=inst.pca.oracles, default_fuel=args.fuel)
        inst.fuel = args.fuel
    return inst


def _run_claim(inst: Instance, claim, fuel: int) -> Verdict:
    lhs = inst.element(claim.lhs)
    rhs = inst.element(claim.rhs)
    w = inst.witnesses[claim.witness]
    if claim.doc == "comp":
        if not isinstance(lhs, CompletionObject) or not isinstance(rhs, CompletionObject):
            raise CheckError(f"claim {claim.name}: <=_comp relates completion objects")
        if not isinstance(w, CompletionWitness):
            raise CheckError(f"claim {claim.name}: completion claims need a mediated witness")
        return comp_le(inst.pca, lhs, rhs, w, fuel)
    return check_le(inst.pca, claim.doc, lhs, rhs, w, fuel)


def _emit_verdicts(args, named_verdicts, elapsed) -> int:
    worst = EXIT_OK
    lines = []
    for name, v in named_verdicts:
        if v.refuted:
            worst = max(worst, EXIT_REFUTED)
        elif v.unknown:
            worst = max(worst, EXIT_UNKNOWN)
        if args.format == "machine":
            line = f"result {name} {v.status}"
            if v.counterexample:
                line += " counterexample (" + ", ".join(str(c) for c in v.counterexample) + ")"
            if v.unknowns:
                line += f" unknowns {len(v.unknowns)}"
            lines.append(line)
        else:
            line = f"claim {name}: {v.status.upper()}"
            if v.counterexample:
                line += f"  counterexample {v.counterexample}"
            if v.unknowns:
                line += f"  timeouts at {list(v.unknowns)[:3]}"
            if v.notes:
                line += "  [" + "; ".join(v.notes) + "]"
            lines.append(line)
    if args.format == "human":
        lines.append(f"checked {len(named_verdicts)} claim(s) in {elapsed:.3f}s")
    print("\n".join(lines))
    return worst


def cmd_check(args) -> int:
    inst = _load(args)
    picked = inst.claims
    if args.claims:
        by_name = {c.name: c for c in inst.claims}
        missing = [n for n in args.claims if n not in by_name]
        if missing:
            raise InstanceError(f"unknown claims: {missing}")
        picked = [by_name[n] for n in args.claims]
    start = time.monotonic()
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            verdicts = list(pool.map(lambda c: _run_claim(inst, c, args.fuel), picked))
    else:
        verdicts = [_run_claim(inst, c, args.fuel) for c in picked]
    elapsed = time.monotonic() - start
    return _emit_verdicts(args, list(zip((c.name for c in picked), verdicts)), elapsed)


def cmd_search(args) -> int:
    inst = _load(args)
    by_name = {c.name: c for c in inst.claims}
    if args.claim not in by_name:
        raise InstanceError(f"unknown claim {args.claim!r}")
    claim = by_name[args.claim]
    if claim.doc == "comp":
        raise InstanceError("search over completion claims is not supported here")
    lhs = inst.element(claim.lhs)
    rhs = inst.element(claim.rhs)
    budget = SearchBudget(args.witness_size, args.fuel, args.time_cap)
    start = time.monotonic()
    outcome = search_witness(inst.pca, claim.doc, lhs, rhs, budget)
    elapsed = time.monotonic() - start
    print(_render_search(args, inst, claim, outcome, elapsed))
    if outcome.found:
        return EXIT_OK
    return EXIT_UNKNOWN if outcome.status == "unknown" else EXIT_REFUTED


def _render_search(args, inst, claim, outcome: SearchOutcome, elapsed) -> str:
    lines = []
    if outcome.found:
        lines.extend(_declare_witness(inst, f"{claim.name}_found", outcome.witness))
        lines.append(f"claim {claim.name}_check : {claim.lhs} <=_{claim.doc} {claim.rhs} by {claim.name}_found")
        lines.append(f"result {claim.name} found")
    elif outcome.status == "exhausted":
        lines.append(f"result {claim.name} exhausted")
        lines.append(f"// no witness up to size {outcome.bound}; "
                     f"{outcome.failures} candidates failed")
    else:
        lines.append(f"result {claim.name} unknown")
        lines.append(f"// {outcome.timeouts} candidates timed out within the budget")
    if args.format == "human":
        lines.append(f"// budget size {outcome.bound}, fuel {args.fuel}, {elapsed:.3f}s")
    return "\n".join(lines)


def _declare_witness(inst: Instance, name: str, w) -> list[str]:
    """Witness as grammar declarations, including any needed morphisms."""
    lines = []
    scratch = Instance(pca=inst.pca, fuel=inst.fuel)
    scratch.carriers.update(inst.carriers)
    scratch.universes.update(inst.universes)
    scratch.assemblies.update(inst.assemblies)
    scratch.morphisms.update(inst.morphisms)
    scratch.extmorphisms.update(inst.extmorphisms)
    scratch.witnesses.update(inst.witnesses)
    if isinstance(w, (ForwardBackward, ExtForwardBackward)):
        target_section = scratch.morphisms if isinstance(w, ForwardBackward) else scratch.extmorphisms
        kname = f"{name}_k"
        src_name = _name_object(scratch, lines, w.forward.source, f"{name}_src")
        tgt_name = _name_object(scratch, lines, w.forward.target, f"{name}_tgt")
        if isinstance(w, ForwardBackward):
            graph = ", ".join(
                f"{point_text(k)} -> {point_text(v)}"
                for k, v in sorted(w.forward.mapping.items(), key=lambda kv: point_text(kv[0]))
            )
            realizer = f" realizer {to_text(w.forward.realizer)}" if w.forward.realizer is not None else ""
            lines.append(f"morphism {kname} : {src_name} -> {tgt_name}{realizer} graph {{ {graph} }}")
        else:
            body = ", ".join(
                f"({to_text(n)}, {point_text(x)}) -> {point_text(v)}"
                for (n, x), v in sorted(w.forward.pointmap.items(), key=lambda kv: (to_text(kv[0][0]), point_text(kv[0][1])))
            )
            lines.append(
                f"extmorphism {kname} : {src_name} -> {tgt_name} realizer {to_text(w.forward.realizer)} pointmap {{ {body} }}"
            )
        target_section[kname] = w.forward
        head = "fwback" if isinstance(w, ForwardBackward) else "extfwback"
        lines.append(f"witness {name} = {head} k = {kname}, h = {to_text(w.backward)}")
        return lines
    scratch.witnesses[name] = w
    lines.append(format_witness(scratch, name, w))
    return lines


def _name_object(scratch: Instance, lines: list[str], obj, fallback: str) -> str:
    for section in (scratch.carriers, scratch.universes, scratch.assemblies):
        for n, v in section.items():
            if v == obj:
                return n
    if isinstance(obj, FinSet):
        from .instance import _fmt_terms

        lines.append(f"carrier {fallback} = {_fmt_terms(obj.points)}")
        scratch.carriers[fallback] = obj
        return fallback
    parts = []
    for pt in obj.points:
        names = [n for n, x in obj.naming if x == pt]
        from .instance import _fmt_terms

        parts.append(f"point {point_text(pt)} names {_fmt_terms(names)}")
    lines.append(f"assembly {fallback} {{ " + " ".join(parts) + " }")
    scratch.assemblies[fallback] = obj
    return fallback


def cmd_lattice(args) -> int:
    from .doctrines import lattice_element, lattice_law_witness

    inst = _load(args)
    if args.op == "law":
        if not args.law:
            raise InstanceError("--op law needs --law")
        kwargs = {}
        names = list(args.operands)
        if args.law in ("meet_intro", "join_intro"):
            if len(names) != 2:
                raise InstanceError(f"law {args.law} takes two prerequisite witness names")
            kwargs["w_left"] = inst.witnesses[names[0]]
            kwargs["w_right"] = inst.witnesses[names[1]]
        elif args.law in ("subtract_elim", "subtract_intro"):
            if len(names) != 1:
                raise InstanceError(f"law {args.law} takes one prerequisite witness name")
            kwargs["w"] = inst.witnesses[names[0]]
        w = lattice_law_witness(inst.pca, args.law, **kwargs)
        lines = _declare_witness(inst, f"{args.law}_witness", w)
        verdict = None
        if args.claim:
            by_name = {c.name: c for c in inst.claims}
            if args.claim not in by_name:
                raise InstanceError(f"unknown claim {args.claim!r}")
            claim = by_name[args.claim]
            verdict = check_le(inst.pca, claim.doc, inst.element(claim.lhs),
                               inst.element(claim.rhs), w, args.fuel)
            lines.append(f"result {args.claim} {verdict.status}")
        print("\n".join(lines))
        if verdict is None or verdict.holds:
            return EXIT_OK
        return EXIT_REFUTED if verdict.refuted else EXIT_UNKNOWN
    universe = inst.universes.get(args.universe) if args.universe else None
    base = inst.carriers.get(args.base) if args.base else None
    fams = [inst.families[n] for n in args.operands]
    out = lattice_element(inst.pca, args.op, args.doc, *fams,
                          universe=universe, bound=args.bound, base=base, fuel=args.fuel)
    body = ", ".join(
        f"{point_text(k)} -> [" + ", ".join(to_text(x) for x in sorted(v, key=lambda t: (t.size, to_text(t)))) + "]"
        for k, v in sorted(out.values.items(), key=lambda kv: point_text(kv[0]))
    )
    base_name = args.base or _find_name(inst, out.base)
    print(f"family {args.op}_result over {base_name} {{ {body} }}")
    for note in out.notes:
        print(f"// {note}")
    return EXIT_OK


def _find_name(inst: Instance, obj) -> str:
    for section in (inst.carriers, inst.universes, inst.assemblies):
        for n, v in section.items():
            if v == obj:
                return n
    return "anonymous"


def cmd_complete(args) -> int:
    from itertools import product as iproduct

    inst = _load(args)
    if args.object not in inst.carriers:
        raise InstanceError(f"unknown carrier {args.object!r}")
    A = inst.carriers[args.object]
    uni = inst.universes.get(args.universe) if args.universe else A
    if uni is None:
        raise InstanceError(f"unknown universe {args.universe!r}")
    if args.doc not in ("T", "M", "dW"):
        raise InstanceError("complete supports payload doctrines T, M and dW")
    legs = []
    if args.klass == "full":
        for name, Y in inst.carriers.items():
            if len(Y) <= args.index_bound:
                pts = list(Y.points)
                for values in iproduct(sorted(A.points, key=point_text), repeat=len(pts)):
                    legs.append((name, FinMap(Y, A, dict(zip(pts, values)))))
    else:
        from .spaces import carrier_product

        for name, Y in inst.carriers.items():
            if 0 < len(Y) <= args.index_bound:
                prod = carrier_product(inst.pca, A, Y)
                legs.append((name, prod.fst))
    objects = []
    for name, leg in legs:
        src = leg.source
        pts = list(src.points)
        if args.doc == "T":
            for values in iproduct(sorted(uni.points, key=point_text), repeat=len(pts)):
                payload = TrackedFamily(src, dict(zip(pts, values)))
                objects.append(CompletionObject(args.kind, args.klass, args.doc, leg, payload))
        else:
            opts = [frozenset(), *[frozenset([u]) for u in uni.points]]
            for values in iproduct(range(len(opts)), repeat=len(pts)):
                payload = MassFamily(src, {p: opts[i] for p, i in zip(pts, values)},
                                     "nonempty" if args.doc == "dW" else "allow-empty")
                objects.append(CompletionObject(args.kind, args.klass, args.doc, leg, payload))
        if len(objects) > 400:
            raise InstanceError("completion fiber too large; lower --index-bound or shrink the universe")
    from .search import search_completion_witness

    budget = SearchBudget(args.witness_size, args.fuel, args.time_cap)
    n = len(objects)
    order = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                order[i][j] = True
                continue
            out = search_completion_witness(inst.pca, objects[i], objects[j], budget)
            order[i][j] = out.found
    lines = [f"// completion fiber over {args.object}: {n} objects"]
    for i, obj in enumerate(objects):
        payload = obj.payload
        if isinstance(payload, TrackedFamily):
            desc = ", ".join(f"{point_text(k)} -> {to_text(v)}" for k, v in sorted(payload.values.items(), key=lambda kv: point_text(kv[0])))
        else:
            desc = ", ".join(
                f"{point_text(k)} -> [" + ", ".join(map(to_text, sorted(v, key=lambda t: (t.size, to_text(t))))) + "]"
                for k, v in sorted(payload.values.items(), key=lambda kv: point_text(kv[0]))
            )
        leg_desc = ", ".join(f"{point_text(k)} -> {point_text(v)}" for k, v in sorted(obj.leg.mapping.items(), key=lambda kv: point_text(kv[0])))
        lines.append(f"// object {i}: leg {{ {leg_desc} }} payload {{ {desc} }}")
    for i in range(n):
        for j in range(n):
            if i != j and order[i][j]:
                # Hasse: drop edges implied by transitivity through a third object
                direct = True
                for k in range(n):
                    if k in (i, j):
                        continue
                    if order[i][k] and order[k][j] and not (order[k][i] or order[j][k]):
                        direct = False
                        break
                if direct:
                    lines.append(f"hasse {i} <= {j}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_iso(args) -> int:
    inst = _load(args)
    handler = _ISO_COMMANDS.get(args.mapname)
    if handler is None:
        raise InstanceError(f"unknown map {args.mapname!r}")
    return handler(args, inst)


def _claim_of(args, inst) -> object:
    if not args.claim:
        raise InstanceError("this direction needs --claim")
    by_name = {c.name: c for c in inst.claims}
    if args.claim not in by_name:
        raise InstanceError(f"unknown claim {args.claim!r}")
    return by_name[args.claim]


def _iso_universal(args, inst, docs, from_map, to_map, fwd, bwd, concrete_doc) -> int:
    claim = _claim_of(args, inst)
    lines = []
    if args.direction == "forward":
        lhs, rhs = inst.element(claim.lhs), inst.element(claim.rhs)
        if claim.doc != "comp":
            raise InstanceError("forward transport starts from a completion claim")
        w = inst.witnesses[claim.witness]
        gate = comp_le(inst.pca, lhs, rhs, w, args.fuel)
        if not gate.holds:
            raise InstanceError(f"input witness does not hold ({gate.status})")
        phi1, phi2 = from_map(inst.pca, lhs), from_map(inst.pca, rhs)
        new_w = fwd(inst.pca, lhs, rhs, w, args.fuel)
        v = check_le(inst.pca, concrete_doc, phi1, phi2, new_w, args.fuel)
        lines.extend(_declare_witness(inst, f"{claim.name}_transported", new_w))
        lines.append(f"result {claim.name} {v.status}")
    else:
        lhs, rhs = inst.element(claim.lhs), inst.element(claim.rhs)
        w = inst.witnesses[claim.witness]
        gate = check_le(inst.pca, concrete_doc, lhs, rhs, w, args.fuel)
        if not gate.holds:
            raise InstanceError(f"input witness does not hold ({gate.status})")
        o1, o2 = to_map(inst.pca, lhs), to_map(inst.pca, rhs)
        cw = bwd(inst.pca, o1, o2, w, args.fuel)
        v = comp_le(inst.pca, o1, o2, cw, args.fuel)
        lines.append(f"// canonical completion objects built from {claim.lhs} and {claim.rhs}")
        lines.append(f"result {claim.name} {v.status}")
    print("\n".join(lines))
    return EXIT_OK if v.holds else (EXIT_REFUTED if v.refuted else EXIT_UNKNOWN)


def _cmd_iso_medvedev(args, inst) -> int:
    return _iso_universal(
        args, inst, ("T",), iso.medvedev_from_completion,
        lambda pca, fam: iso.medvedev_to_completion(pca, fam),
        lambda pca, l, r, w, fuel: iso.medvedev_transport_forward(pca, w),
        iso.medvedev_transport_backward, "M",
    )


def _cmd_iso_muchnik(args, inst) -> int:
    return _iso_universal(
        args, inst, ("Tw",), iso.muchnik_from_completion,
        lambda pca, fam: iso.muchnik_to_completion(pca, fam),
        iso.muchnik_transport_forward,
        iso.muchnik_transport_backward, "Mw",
    )


def _iso_existential(args, inst, doc, edoc, from_map, to_map, fwd, bwd) -> int:
    claim = _claim_of(args, inst)
    lines = []
    if args.direction == "forward":
        if claim.doc != "comp":
            raise InstanceError("forward transport starts from a completion claim")
        lhs, rhs = inst.element(claim.lhs), inst.element(claim.rhs)
        w = inst.witnesses[claim.witness]
        gate = comp_le(inst.pca, lhs, rhs, w, args.fuel)
        if not gate.holds:
            raise InstanceError(f"input witness does not hold ({gate.status})")
        F, G = from_map(inst.pca, lhs), from_map(inst.pca, rhs)
        new_w = fwd(inst.pca, w, args.fuel)
        v = check_le(inst.pca, doc, F, G, new_w, args.fuel)
        lines.extend(_declare_witness(inst, f"{claim.name}_transported", new_w))
    else:
        lhs, rhs = inst.element(claim.lhs), inst.element(claim.rhs)
        w = inst.witnesses[claim.witness]
        gate = check_le(inst.pca, doc, lhs, rhs, w, args.fuel)
        if not gate.holds:
            raise InstanceError(f"input witness does not hold ({gate.status})")
        o1 = to_map(inst.pca, lhs, edoc)
        o2 = to_map(inst.pca, rhs, edoc)
        cw = bwd(inst.pca, w, args.fuel) if args.mapname != "realizer" and args.mapname != "extended" \
            else bwd(inst.pca, w, lhs.base, args.fuel)
        v = comp_le(inst.pca, o1, o2, cw, args.fuel)
        lines.append(f"// canonical completion objects built from {claim.lhs} and {claim.rhs}")
    lines.append(f"result {claim.name} {v.status}")
    print("\n".join(lines))
    return EXIT_OK if v.holds else (EXIT_REFUTED if v.refuted else EXIT_UNKNOWN)


def _cmd_iso_weihrauch(args, inst) -> int:
    return _iso_existential(args, inst, "W", "dW", iso.weihrauch_from_completion,
                            iso.weihrauch_to_completion, iso.weihrauch_transport_forward,
                            iso.weihrauch_transport_backward)


def _cmd_iso_strong(args, inst) -> int:
    return _iso_existential(args, inst, "SW", "dsW", iso.weihrauch_from_completion,
                            iso.weihrauch_to_completion, iso.weihrauch_transport_forward,
                            iso.weihrauch_transport_backward)


def _cmd_iso_realizer(args, inst) -> int:
    return _iso_existential(args, inst, "rW", "drW", iso.realizer_from_completion,
                            iso.realizer_to_completion, iso.realizer_transport_forward,
                            iso.realizer_transport_backward)


def _cmd_iso_extended(args, inst) -> int:
    return _iso_existential(args, inst, "tW", "dextW", iso.realizer_from_completion,
                            iso.realizer_to_completion, iso.realizer_transport_forward,
                            iso.realizer_transport_backward)


def _cmd_iso_dialectica(args, inst) -> int:
    return _iso_universal(
        args, inst, ("M",), iso.dialectica_from_completion,
        lambda pca, F: iso.dialectica_to_completion(pca, F),
        iso.dialectica_transport_forward,
        iso.dialectica_transport_backward, "D",
    )


def _cmd_iso_extpred(args, inst) -> int:
    if not args.object:
        raise InstanceError("--map extpred needs --object (an extended predicate)")
    if args.object not in inst.extpredicates:
        raise InstanceError(f"unknown extended predicate {args.object!r}")
    f = inst.extpredicates[args.object]
    asm, fam = iso.ext_pred_to_assembly(inst.pca, f)
    parts = []
    for pt in asm.points:
        names = [n for n, x in asm.naming if x == pt]
        from .instance import _fmt_terms

        parts.append(f"point {point_text(pt)} names {_fmt_terms(names)}")
    print(f"assembly {args.object}_assembly {{ " + " ".join(parts) + " }")
    body = ", ".join(
        f"({to_text(n)}, {point_text(x)}) -> [" + ", ".join(map(to_text, sorted(v, key=lambda t: (t.size, to_text(t))))) + "]"
        for (n, x), v in sorted(fam.values.items(), key=lambda kv: (to_text(kv[0][0]), point_text(kv[0][1])))
    )
    print(f"family {args.object}_family over {args.object}_assembly {{ {body} }}")
    return EXIT_OK


def _cmd_iso_extsw_d(args, inst) -> int:
    claim = _claim_of(args, inst)
    if claim.doc != "extsW":
        raise InstanceError("extsw_d transports extsW claims")
    f = inst.extpredicates[claim.lhs]
    g = inst.extpredicates[claim.rhs]
    w = inst.witnesses[claim.witness]
    if not isinstance(w, ExtStrong):
        raise InstanceError("extsW claims carry extstrong witnesses")
    gate = check_le(inst.pca, "extsW", f, g, w, args.fuel)
    F = iso.extended_to_dialectica(f)
    G = iso.extended_to_dialectica(g)
    Gk = iso.dialectica_shift(inst.pca, G, w.forward, F.base, args.fuel)
    dwit = DialecticaWitness(dict(w.choice), w.backward)
    v = check_le(inst.pca, "D", F, Gk, dwit, args.fuel)
    agree = gate.status == v.status
    print(f"result {claim.name}_extsw {gate.status}")
    print(f"result {claim.name}_pointwise {v.status}")
    print(f"result {claim.name}_agreement {'holds' if agree else 'refuted'}")
    if not agree:
        return EXIT_REFUTED
    return EXIT_OK if gate.holds else (EXIT_REFUTED if gate.refuted else EXIT_UNKNOWN)


_ISO_COMMANDS = {
    "medvedev": _cmd_iso_medvedev,
    "muchnik": _cmd_iso_muchnik,
    "weihrauch": _cmd_iso_weihrauch,
    "strong": _cmd_iso_strong,
    "realizer": _cmd_iso_realizer,
    "extended": _cmd_iso_extended,
    "dialectica": _cmd_iso_dialectica,
    "extpred": _cmd_iso_extpred,
    "extsw_d": _cmd_iso_extsw_d,
}


def cmd_laws(args) -> int:
    from .laws import machine_format, run_suites

    reports = run_suites(args.suites or None, fuel=None, workers=args.workers)
    if args.format == "machine":
        sys.stdout.write(machine_format(reports))
    else:
        for rep in reports:
            print(f"suite {rep.suite}: checked {rep.checked}, "
                  f"violations {rep.violations}, unknowns {rep.unknowns}")
            for rec in rep.records:
                print("  " + rec.machine_line())
    return EXIT_OK if all(r.violations == 0 for r in reports) else EXIT_REFUTED


if __name__ == "__main__":
    sys.exit(main())
