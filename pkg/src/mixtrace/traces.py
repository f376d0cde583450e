"""Trace machinery: the total trace of compact models, the staircase
("provisional") trace, the free and induced mixed traces, hidden traces,
and the randomized axiom suite.

The staircase works on the pairing form of a loop carrier: the same
entries rearranged into a map out of the tensor of hidden evaluation pairs
(U1(x)U1*)(x)...(x)(Uk(x)Uk*).  Each stage divides the whole matrix by the
mix scalar and then contracts the leading pair; a stage whose division
leaves the ring makes the trace undefined.  The induced trace instead
contracts everything first and divides once by m^k over the rationals, so
it is defined at least as often as the free one, and strictly more often
in general.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import prod
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .category import (Mor, Model, Obj, canonical_map, compose, contract_hidden,
                       dual_mor, factor_permutation, identity, mor_scale,
                       obj_tensor, random_mor, tensor_mor, uncurry)
from .errors import InputError, ModelNotCompactifiableError, ResourceLimitError
from .loops import (Loop, Permutation, all_permutations, hidden_symmetry,
                    loop_dual, morphism_loop, morphism_tensor_loop,
                    post_compose, pre_compose, yanking_loop)
from .rings import Number, ring_contains

DEFINED = "defined"
UNDEFINED = "undefined"
AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class StaircaseWitness:
    """The solved staircase: the final map psi out of the unit, plus the
    stage fillers, one per hidden object."""

    psi: Mor
    fillers: Tuple[Mor, ...]


@dataclass(frozen=True)
class TraceResult:
    status: str
    value: Optional[Mor] = None
    alpha: Optional[Permutation] = None
    witness: Optional[StaircaseWitness] = None

    @property
    def is_defined(self) -> bool:
        return self.status == DEFINED


def defined(value: Mor, alpha: Optional[Permutation] = None,
            witness: Optional[StaircaseWitness] = None) -> TraceResult:
    return TraceResult(DEFINED, value, alpha, witness)


def undefined() -> TraceResult:
    return TraceResult(UNDEFINED)


def ambiguous() -> TraceResult:
    return TraceResult(AMBIGUOUS)


def _flat(multi: Sequence[int], dims: Sequence[int]) -> int:
    idx = 0
    for x, d in zip(multi, dims):
        idx = idx * d + x
    return idx


def pairing_form(p: Loop) -> Mor:
    """The carrier rearranged as (U1(x)U1*)(x)...(x)(Uk(x)Uk*) -> B par A*.

    Pure reindexing: in each pair the first index is the domain-side copy
    of U_i and the second the codomain-side one, and the endpoints flatten
    with B outermost.
    """
    bdim, adim = p.cod.rank, p.dom.rank
    dims = [u.rank for u in p.hidden]
    h = prod(dims)
    pair_dims: List[int] = []
    for d in dims:
        pair_dims += [d, d]
    cols = h * h
    rows = [[0] * cols for _ in range(bdim * adim)]
    ent = p.carrier.entries
    for multi in itertools.product(*(range(d) for d in pair_dims)):
        us = multi[0::2]
        ws = multi[1::2]
        col = _flat(multi, pair_dims)
        uflat = _flat(us, dims)
        wflat = _flat(ws, dims)
        for bi in range(bdim):
            src = ent[bi * h + wflat]
            for ai in range(adim):
                v = src[ai * h + uflat]
                if v:
                    rows[bi * adim + ai][col] = v
    return Mor(p.model, Obj(cols), Obj(bdim * adim),
               tuple(tuple(r) for r in rows))


def pairing_form_by_currying(p: Loop) -> Mor:
    """The same map computed the slow way: peel the hidden factors off the
    codomain through the closure bijection, reorder the domain so each
    hidden object sits next to its dual with the endpoint last, and curry
    once more.  Used to cross-check the direct reindexing."""
    model = p.model
    dims = [u.rank for u in p.hidden]
    k = p.k
    ba = p.cod.rank * p.dom.rank
    if any(d == 0 for d in dims):
        return Mor(model, Obj(0), Obj(ba), tuple(() for _ in range(ba)))
    cur = p.carrier
    cod_rank = p.carrier.cod.rank
    for i in reversed(range(k)):
        d = dims[i]
        cod_rank //= d
        cur = uncurry(cur, cur.dom, Obj(d), Obj(cod_rank))
    # reorder (A, U1..Uk, Uk*..U1*) into pairs-first layout with A last
    pair_dims: List[int] = []
    for d in dims:
        pair_dims += [d, d]
    pair_dims.append(p.dom.rank)
    pos_map = [2 * k]
    for i in range(k):
        pos_map.append(2 * i)
    for t in range(k):
        pos_map.append(2 * (k - 1 - t) + 1)
    perm = factor_permutation(model, pair_dims, pos_map)
    reordered = compose(cur, perm)
    hh = prod(d * d for d in dims)
    from .category import curry

    return curry(reordered, Obj(hh), p.dom, p.cod)


def _exact_div(v: Number, m: Number, ring) -> Optional[Number]:
    if isinstance(v, int) and isinstance(m, int):
        q, r = divmod(v, m)
        if r == 0:
            return q
        val = Fraction(v, m)
    else:
        val = Fraction(v) / Fraction(m)
    if ring_contains(ring, val):
        return int(val) if val.denominator == 1 else val
    return None


def _value_from_column(p: Loop, column: Sequence[Sequence[Number]]) -> Mor:
    adim = p.dom.rank
    rows = tuple(tuple(column[bi * adim + ai][0] for ai in range(adim))
                 for bi in range(p.cod.rank))
    return Mor(p.model, p.dom, p.cod, rows)


def provisional_trace(p: Loop, want_witness: bool = False) -> TraceResult:
    """Solve the staircase for the hidden part in its given order.

    Stage i requires dividing the current matrix exactly by the mix scalar
    (the unique solution against Mix (x) Id when m is nonzero) and then
    contracts the leading evaluation pair.  With m = 0 a stage equation
    becomes 0 = goal: solvable only for the zero matrix and then wildly
    under-determined, which surfaces as Ambiguous.
    """
    model = p.model
    m = model.mix
    dims = [u.rank for u in p.hidden]
    k = p.k
    pf = pairing_form(p)
    if k == 0:
        res = defined(_value_from_column(p, pf.entries))
        if want_witness:
            res = replace(res, witness=StaircaseWitness(pf, ()))
        return res

    ba = p.cod.rank * p.dom.rank
    if m == 0:
        if any(v for row in pf.entries for v in row):
            return undefined()
        if ba == 0 or dims[-1] == 0:
            zero = Mor(model, p.dom, p.cod,
                       tuple((0,) * p.dom.rank for _ in range(p.cod.rank)))
            return defined(zero)
        return ambiguous()

    g_rows: List[List[Number]] = [list(r) for r in pf.entries]
    fillers: List[Mor] = []
    for i, d in enumerate(dims):
        divided: List[List[Number]] = []
        for row in g_rows:
            out = []
            for v in row:
                q = _exact_div(v, m, model.ring)
                if q is None:
                    return undefined()
                out.append(q)
            divided.append(out)
        tail = prod(x * x for x in dims[i + 1:])
        if want_witness:
            fillers.append(Mor(model, Obj(d * d * tail), Obj(ba),
                               tuple(tuple(r) for r in divided)))
        g_rows = [
            [sum(row[(u * d + u) * tail + t] for u in range(d))
             for t in range(tail)]
            for row in divided]
    psi_rows = tuple(tuple(r) for r in g_rows)
    value = _value_from_column(p, psi_rows)
    witness = None
    if want_witness:
        witness = StaircaseWitness(Mor(model, Obj(1), Obj(ba), psi_rows),
                                   tuple(fillers))
    return defined(value, witness=witness)


def provisional_trace_dual(p: Loop) -> TraceResult:
    """The staircase run through the dualized ladder (evaluation maps on
    the cotensor side); must agree with provisional_trace."""
    model = p.model
    m = model.mix
    dims = [u.rank for u in p.hidden]
    k = p.k
    pf_t = dual_mor(pairing_form(p))  # rows pair-flat, cols (b,a)-flat
    adim = p.dom.rank
    if k == 0:
        rows = tuple(tuple(pf_t.entries[0][bi * adim + ai]
                           for ai in range(adim))
                     for bi in range(p.cod.rank))
        return defined(Mor(model, p.dom, p.cod, rows))

    ba = p.cod.rank * p.dom.rank
    if m == 0:
        if any(v for row in pf_t.entries for v in row):
            return undefined()
        if ba == 0 or dims[-1] == 0:
            zero = Mor(model, p.dom, p.cod,
                       tuple((0,) * adim for _ in range(p.cod.rank)))
            return defined(zero)
        return ambiguous()

    rows_now: List[List[Number]] = [list(r) for r in pf_t.entries]
    for i, d in enumerate(dims):
        divided = []
        for row in rows_now:
            out = []
            for v in row:
                q = _exact_div(v, m, model.ring)
                if q is None:
                    return undefined()
                out.append(q)
            divided.append(out)
        tail = prod(x * x for x in dims[i + 1:])
        rows_now = [
            [sum(divided[(u * d + u) * tail + t][col] for u in range(d))
             for col in range(ba)]
            for t in range(tail)]
    final = rows_now[0] if rows_now else [0] * ba
    rows = tuple(tuple(final[bi * adim + ai] for ai in range(adim))
                 for bi in range(p.cod.rank))
    return defined(Mor(model, p.dom, p.cod, rows))


def free_mixed_trace(p: Loop, perm_bound: int = 6,
                     require_agreement: bool = False,
                     want_witness: bool = False) -> TraceResult:
    """Search the hidden-part orderings in lexicographic order and return
    the first solvable staircase.

    With ``require_agreement`` every solvable ordering is computed and
    checked to give the same value (they must, for a nonzero mix scalar).
    """
    if p.k > perm_bound:
        raise ResourceLimitError(
            f"hidden part of length {p.k} exceeds the permutation bound "
            f"{perm_bound}")
    found: Optional[TraceResult] = None
    saw_ambiguous = False
    for alpha in all_permutations(p.k):
        r = provisional_trace(hidden_symmetry(p, alpha),
                              want_witness=want_witness)
        if r.status == AMBIGUOUS:
            saw_ambiguous = True
        elif r.is_defined:
            if found is None:
                found = replace(r, alpha=alpha)
                if not require_agreement:
                    return found
            elif require_agreement and r.value != found.value:
                raise RuntimeError(
                    "solvable orderings disagree; the model violates trace "
                    "unambiguity")
    if found is not None:
        return found
    return ambiguous() if saw_ambiguous else undefined()


def induced_mixed_trace(p: Loop) -> TraceResult:
    """The trace induced by localizing the mix scalar: contract the hidden
    indices over the rationals, divide by m^k, and keep the result iff
    every entry lies back in the base ring."""
    m = p.model.mix
    if m == 0:
        raise ModelNotCompactifiableError(
            "the induced trace needs a nonzero mix scalar")
    contracted = contract_hidden(p.carrier, p.dom, p.cod, p.hidden)
    scale = Fraction(1) / Fraction(m) ** p.k
    rows = []
    for row in contracted.entries:
        out = []
        for v in row:
            val = v * scale
            if not ring_contains(p.model.ring, val):
                return undefined()
            out.append(val)
        rows.append(tuple(out))
    return defined(Mor(p.model, p.dom, p.cod, tuple(rows)))


def hidden_trace(p: Loop, tail_len: int) -> Optional[Loop]:
    """Trace out the last ``tail_len`` hidden objects and hide the rest
    back; None when the free trace of the re-viewed loop is unsolvable."""
    if not 0 <= tail_len <= p.k:
        raise InputError(f"tail length {tail_len} out of range 0..{p.k}")
    head = p.hidden[:p.k - tail_len]
    tail = p.hidden[p.k - tail_len:]
    q = Loop(p.model, obj_tensor(p.dom, *head), obj_tensor(p.cod, *head),
             tail, p.carrier)
    r = free_mixed_trace(q)
    if not r.is_defined:
        return None
    return Loop(p.model, p.dom, p.cod, head, r.value)


def total_trace(f: Mor, a: Obj, b: Obj, u: Obj) -> Mor:
    """The total trace of a compact model, computed as the canonical
    composite through coevaluation and the inverse mix map; equals the
    entrywise partial trace over U."""
    model = f.model
    if not model.is_compact:
        raise InputError(
            f"total trace needs a compact model; {model} is not")
    if f.dom.rank != a.rank * u.rank or f.cod.rank != b.rank * u.rank:
        raise InputError("total_trace: declared ranks do not match the matrix")
    recast = compose(canonical_map(model, "mix_map", [b, u]), f)
    peeled = uncurry(recast, obj_tensor(a, u), u, b)
    mix_inv = mor_scale(identity(model, Obj(u.rank * u.rank)),
                        Fraction(1) / Fraction(model.mix))
    feed = compose(mix_inv, canonical_map(model, "coev", [u]))
    return compose(peeled, tensor_mor(identity(model, a), feed))


# ---------------------------------------------------------------------------
# The randomized axiom suite.

AXIOMS = ("naturality", "dinaturality", "strength", "vanishing",
          "adjointability", "yanking")


@dataclass
class AxiomStats:
    checked: int = 0
    skipped_undefined: int = 0
    one_sided: int = 0
    failures: List[dict] = field(default_factory=list)

    def to_dict(self):
        return {
            "checked": self.checked,
            "skippedUndefined": self.skipped_undefined,
            "oneSidedDefinedness": self.one_sided,
            "failures": self.failures,
        }


@dataclass
class SuiteReport:
    model: Model
    seed: int
    cases: int
    max_rank: int
    max_hidden: int
    stats: Dict[str, Dict[str, AxiomStats]] = field(default_factory=dict)
    defined_cases: Dict[str, int] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def total_failures(self) -> int:
        return sum(len(ax.failures) for kind in self.stats.values()
                   for ax in kind.values())

    def definedness_ratio(self, kind: str) -> Fraction:
        if self.cases == 0:
            return Fraction(0)
        return Fraction(self.defined_cases.get(kind, 0), self.cases)

    def to_dict(self):
        return {
            "model": str(self.model),
            "seed": self.seed,
            "cases": self.cases,
            "maxRank": self.max_rank,
            "maxHidden": self.max_hidden,
            "definedCases": dict(sorted(self.defined_cases.items())),
            "notes": list(self.notes),
            "axioms": {
                kind: {name: st.to_dict() for name, st in sorted(axs.items())}
                for kind, axs in sorted(self.stats.items())
            },
            "totalFailures": self.total_failures,
        }


def _weighted_rank(rng: random.Random, max_rank: int) -> int:
    ranks = list(range(0, max_rank + 1))
    weights = [1] + [4] * max_rank
    return rng.choices(ranks, weights=weights)[0]


def random_loop(rng: random.Random, model: Model, max_rank: int,
                max_hidden: int, bound: int = 4) -> Loop:
    """A seeded random loop.  About half the carriers are pre-multiplied
    by m^k so the staircase divides cleanly, which keeps the defined
    branch of the trace well exercised."""
    k = rng.choices(range(0, max_hidden + 1),
                    weights=[2] + [3] * max_hidden)[0]
    a = Obj(_weighted_rank(rng, max_rank))
    b = Obj(_weighted_rank(rng, max_rank))
    hidden = tuple(Obj(_weighted_rank(rng, max_rank)) for _ in range(k))
    h = prod(u.rank for u in hidden)
    carrier = random_mor(model, rng, Obj(a.rank * h), Obj(b.rank * h), bound)
    style = rng.random()
    if style < 0.5:
        carrier = mor_scale(carrier, model.mix ** k if k else 1)
    elif style < 0.65 and k > 1:
        carrier = mor_scale(carrier, model.mix ** (k - 1))
    return Loop(model, a, b, hidden, carrier)


def _side_repr(side) -> str:
    if isinstance(side, Mor):
        return "[" + "; ".join(" ".join(str(v) for v in row)
                               for row in side.entries) + "]"
    if isinstance(side, TraceResult):
        return _side_repr(side.value) if side.is_defined else side.status
    return str(side)


def _record_failure(st: AxiomStats, seed, case: int, detail: str,
                    lhs=None, rhs=None, cap: int = 10) -> None:
    entry = {"seed": seed, "case": case, "detail": detail}
    if lhs is not None:
        entry["lhs"] = _side_repr(lhs)
    if rhs is not None:
        entry["rhs"] = _side_repr(rhs)
    if len(st.failures) >= cap:
        entry = {"seed": seed, "case": case, "detail": "..."}
    st.failures.append(entry)


def run_axiom_suite(model: Model, seed: int = 0, cases: int = 1000,
                    max_rank: int = 3, max_hidden: int = 2) -> SuiteReport:
    """Check the mixed-trace axioms on seeded random loops, for both the
    free and the induced trace, in their whenever-defined readings.

    A comparison is skipped when its governing side is undefined; for
    Vanishing the two outer traces may genuinely differ in definedness
    (the staircase is order-sensitive before the permutation search), so
    one-sided cases are tallied separately rather than failed.
    """
    report = SuiteReport(model, seed, cases, max_rank, max_hidden)
    kinds: List[Tuple[str, Callable[[Loop], TraceResult]]] = [
        ("free", free_mixed_trace)]
    if model.mix != 0:
        kinds.append(("induced", induced_mixed_trace))
    else:
        report.notes.append(
            "induced trace skipped: mix scalar is zero, no localization")
    for kind, _ in kinds:
        report.stats[kind] = {name: AxiomStats() for name in AXIOMS}
        report.defined_cases[kind] = 0

    for case in range(cases):
        rng = random.Random(f"axioms:{seed}:{case}")
        p = random_loop(rng, model, max_rank, max_hidden)
        x = Obj(_weighted_rank(rng, max_rank))
        y = Obj(_weighted_rank(rng, max_rank))
        f_in = random_mor(model, rng, x, p.dom)
        g_out = random_mor(model, rng, p.cod, y)
        f_str = random_mor(model, rng, x, y)
        split = rng.randint(0, p.k)
        alpha_images = list(range(p.k))
        rng.shuffle(alpha_images)
        alpha = Permutation(tuple(alpha_images))
        yank_rank = Obj(rng.randint(0, max_rank))

        for kind, trace_of in kinds:
            stats = report.stats[kind]
            tr = trace_of(p)
            if tr.is_defined:
                report.defined_cases[kind] += 1

            st = stats["naturality"]
            if not tr.is_defined:
                st.skipped_undefined += 1
            else:
                st.checked += 1
                lhs = compose(g_out, compose(tr.value, f_in))
                rhs = trace_of(post_compose(g_out, pre_compose(p, f_in)))
                if not rhs.is_defined or rhs.value != lhs:
                    _record_failure(st, seed, case, "naturality mismatch",
                                    lhs, rhs)

            st = stats["dinaturality"]
            other = trace_of(hidden_symmetry(p, alpha))
            if tr.is_defined or other.is_defined:
                st.checked += 1
                if not (tr.is_defined and other.is_defined
                        and tr.value == other.value):
                    _record_failure(st, seed, case, "dinaturality mismatch",
                                    tr, other)
            else:
                st.skipped_undefined += 1

            st = stats["strength"]
            if not tr.is_defined:
                st.skipped_undefined += 1
            else:
                st.checked += 1
                lhs = tensor_mor(f_str, tr.value)
                rhs = trace_of(morphism_tensor_loop(f_str, p))
                if not rhs.is_defined or rhs.value != lhs:
                    _record_failure(st, seed, case, "strength mismatch",
                                    lhs, rhs)

            st = stats["vanishing"]
            head = p.hidden[:split]
            tail = p.hidden[split:]
            q = Loop(model, obj_tensor(p.dom, *head),
                     obj_tensor(p.cod, *head), tail, p.carrier)
            tq = trace_of(q)
            if not tq.is_defined:
                st.skipped_undefined += 1
            else:
                outer = trace_of(Loop(model, p.dom, p.cod, head, tq.value))
                if tr.is_defined and outer.is_defined:
                    st.checked += 1
                    if tr.value != outer.value:
                        _record_failure(st, seed, case, "vanishing mismatch",
                                        tr, outer)
                elif tr.is_defined != outer.is_defined:
                    st.one_sided += 1
                else:
                    st.skipped_undefined += 1

            st = stats["adjointability"]
            dual_tr = trace_of(loop_dual(p))
            if tr.is_defined or dual_tr.is_defined:
                st.checked += 1
                if not (tr.is_defined and dual_tr.is_defined
                        and dual_tr.value == dual_mor(tr.value)):
                    _record_failure(st, seed, case, "adjointability mismatch",
                                    tr, dual_tr)
            else:
                st.skipped_undefined += 1

            st = stats["yanking"]
            st.checked += 1
            yl = yanking_loop(model, yank_rank)
            ty = trace_of(yl)
            if not ty.is_defined or ty.value != identity(model, yank_rank):
                _record_failure(
                    st, seed, case,
                    f"yanking fails at rank {yank_rank.rank}", ty,
                    identity(model, yank_rank))
    return report
