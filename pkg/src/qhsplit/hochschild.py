"""Hochschild chains and cochains of flat categories, with exact homology.

The categories handled here are block-diagonal: a finite list of objects,
each carrying its own flat algebra, with zero morphisms between distinct
objects.  Chains are cyclic words of endomorphism generators of a single
object; the boundary sums two families of contractions:

* interior contractions, where a composition eats a consecutive block that
  avoids the final slot, with sign the sum of reduced degrees in front;
* wraparound contractions, where the block contains the final slot (possibly
  wrapping past it), the composed value landing in the final slot, with sign
  exponent ``M(1,p) * (1 + M(p+1,d)) + M(p+1,d-1) + 1`` where ``M(i,k)`` sums
  reduced degrees of slots ``i..k`` and ``p`` counts wrapped-in front slots.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .ainfty import AInftyAlgebra, Vector, _vec_add, _vec_clean
from .novikov import DEFAULT_CUTOFF, NovikovElement


@dataclass(frozen=True)
class FlatCategory:
    """Objects with endomorphism algebras and zero cross-object morphisms."""

    objects: tuple
    algebras: tuple

    def __post_init__(self):
        if len(self.objects) != len(self.algebras):
            raise ValueError("need one algebra per object")
        for alg in self.algebras:
            if alg.tensors.get(0):
                raise ValueError("Hochschild theory here needs flat algebras (m_0 = 0)")

    @classmethod
    def single(cls, algebra: AInftyAlgebra, name="obj") -> "FlatCategory":
        return cls((name,), (algebra,))

    def algebra(self, obj_index: int) -> AInftyAlgebra:
        return self.algebras[obj_index]


# chains: {(obj_index, word): scalar}, word a tuple of generator indices
Chain = dict[tuple, NovikovElement]


def chain_parity(cat: FlatCategory, key) -> int:
    obj, word = key
    alg = cat.algebra(obj)
    return (sum(alg.degrees[i] for i in word) + len(word) - 1) % 2


def chain_basis(cat: FlatCategory, length: int) -> list:
    out = []
    for obj, alg in enumerate(cat.algebras):
        for word in itertools.product(range(alg.rank), repeat=length):
            out.append((obj, word))
    return out


def _maltese(alg: AInftyAlgebra, word, i, k) -> int:
    """Sum of reduced degrees of slots i..k (1-based, inclusive), mod 2."""
    return sum(alg.reduced(word[j - 1]) for j in range(i, k + 1)) % 2


def hochschild_boundary_basis(cat: FlatCategory, key) -> Chain:
    """Boundary of one basis chain."""
    obj, word = key
    alg = cat.algebra(obj)
    d = len(word)
    acc: Chain = {}

    def add(new_word, scalar):
        k = (obj, new_word)
        if k in acc:
            acc[k] = acc[k] + scalar
        else:
            acc[k] = scalar

    # interior contractions (block avoids the final slot)
    for arity in alg.tensors:
        if arity == 0 or arity > d:
            continue
        for start in range(0, d - arity):
            inner = alg.m_basis(word[start:start + arity])
            if not inner:
                continue
            sign = _maltese(alg, word, 1, start) if start else 0
            for o, val in inner.items():
                scalar = -val if sign else val
                add(word[:start] + (o,) + word[start + arity:], scalar)
        # the block may also be the whole word minus nothing: start == d - arity
        # only when it still avoids slot d, i.e. arity < d handled above

    # wraparound contractions (block contains the final slot)
    for p in range(0, d):
        for t in range(0, d - p):
            arity = t + 1 + p
            if arity not in alg.tensors:
                continue
            block = word[d - 1 - t:] + word[:p]
            inner = alg.m_basis(block)
            if not inner:
                continue
            kept = word[p:d - 1 - t]
            section = (_maltese(alg, word, 1, p) * (1 + _maltese(alg, word, p + 1, d))
                       + _maltese(alg, word, p + 1, d - 1) + 1) % 2
            for o, val in inner.items():
                scalar = -val if section else val
                add(kept + (o,), scalar)

    return {k: v for k, v in acc.items() if not v.is_zero()}


def hochschild_boundary(cat: FlatCategory, chain: Chain) -> Chain:
    acc: Chain = {}
    for key, scalar in chain.items():
        for k, v in hochschild_boundary_basis(cat, key).items():
            val = v * scalar
            if k in acc:
                acc[k] = acc[k] + val
            else:
                acc[k] = val
    return {k: v for k, v in acc.items() if not v.is_zero()}


def is_length_graded(cat: FlatCategory) -> bool:
    """True when the boundary strictly lowers word length (only m_2 active)."""
    for alg in cat.algebras:
        for d in alg.tensors:
            if d != 2:
                return False
    return True


@dataclass
class HomologyReport:
    dims: dict
    stable: bool
    per_length: dict = field(default_factory=dict)
    cutoff_limited: bool = False
    graded: bool = True
    max_length: int = 0

    def total(self) -> int:
        return sum(self.dims.values())


def hochschild_homology_dims(cat: FlatCategory, max_length: int = 6,
                             cutoff: Fraction | None = None) -> HomologyReport:
    """Homology dimensions by parity, with a two-length stabilization flag.

    For a length-graded boundary (compositions of arity two only) the
    homology in word length ``l`` is exact once the boundary from length
    ``l + 1`` is known, so the report covers lengths up to ``max_length - 1``
    and is flagged stable when dropping the top computed length changes
    nothing.  Otherwise the truncated subcomplex is used and the result is
    flagged as an unstable truncation.
    """
    if cutoff is None:
        cutoff = DEFAULT_CUTOFF
    graded = is_length_graded(cat)
    # per (length, parity): basis and boundary matrix ranks
    bases = {length: chain_basis(cat, length) for length in range(1, max_length + 1)}
    by_parity: dict[tuple, list] = {}
    for length, basis in bases.items():
        for key in basis:
            by_parity.setdefault((length, chain_parity(cat, key)), []).append(key)

    cutoff_limited = False
    ranks: dict[tuple, int] = {}

    def boundary_rank(length: int, parity: int) -> int:
        nonlocal cutoff_limited
        key = (length, parity)
        if key in ranks:
            return ranks[key]
        rows = []
        for basis_key in by_parity.get((length, parity), []):
            image = hochschild_boundary_basis(cat, basis_key)
            rows.append({_stable_index(k): v for k, v in image.items()})
        rk, _, limited = linalg.row_reduce(rows, cutoff)
        cutoff_limited = cutoff_limited or limited
        ranks[key] = rk
        return rk

    index_cache: dict[tuple, int] = {}

    def _stable_index(key) -> int:
        if key not in index_cache:
            length = len(key[1])
            basis = bases.get(length)
            if basis is None:
                raise KeyError("boundary left the truncation window")
            index_cache[key] = basis.index(key) + 10 ** 9 * length
        return index_cache[key]

    def dims_up_to(top: int) -> dict:
        out = {0: 0, 1: 0}
        if graded:
            for length in range(1, top):
                for parity in (0, 1):
                    total = len(by_parity.get((length, parity), []))
                    rk_here = boundary_rank(length, parity)
                    rk_above = boundary_rank(length + 1, (parity + 1) % 2)
                    out[parity] += total - rk_here - rk_above
        else:
            # homology of the truncated subcomplex, spurious top classes and all
            for parity in (0, 1):
                total = sum(len(by_parity.get((length, parity), []))
                            for length in range(1, top + 1))
                rk_here = sum(boundary_rank(length, parity)
                              for length in range(1, top + 1))
                rk_other = sum(boundary_rank(length, (parity + 1) % 2)
                               for length in range(1, top + 1))
                out[parity] += total - rk_here - rk_other
        return out

    dims_full = dims_up_to(max_length)
    dims_prev = dims_up_to(max_length - 1) if max_length >= 2 else dims_full
    stable = graded and dims_full == dims_prev
    per_length = {}
    if graded:
        for length in range(1, max_length):
            per_length[length] = {
                parity: (len(by_parity.get((length, parity), []))
                         - boundary_rank(length, parity)
                         - boundary_rank(length + 1, (parity + 1) % 2))
                for parity in (0, 1)
            }
    return HomologyReport(dims=dims_full, stable=stable, per_length=per_length,
                          cutoff_limited=cutoff_limited, graded=graded,
                          max_length=max_length)


# ---------------------------------------------------------------------------
# Hochschild cochains


@dataclass
class Cochain:
    """A natural-transformation-style cochain on a block-diagonal category.

    ``components`` maps ``(obj, input_word)`` to an output vector; ``degree``
    is the parity of the cochain.
    """

    category: FlatCategory
    degree: int
    components: dict = field(default_factory=dict)

    def component(self, obj: int, word: tuple) -> Vector:
        entry = self.components.get((obj, tuple(word)))
        return dict(entry) if entry else {}

    def cleaned(self) -> "Cochain":
        comps = {}
        for key, vec in self.components.items():
            vec = _vec_clean(dict(vec))
            if vec:
                comps[key] = vec
        return Cochain(self.category, self.degree, comps)

    def is_zero(self) -> bool:
        return not self.cleaned().components

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree:
            raise ValueError("cochain degrees differ")
        comps = {k: dict(v) for k, v in self.components.items()}
        for key, vec in other.components.items():
            target = comps.setdefault(key, {})
            for o, val in vec.items():
                _vec_add(target, o, val)
        return Cochain(self.category, self.degree, comps).cleaned()

    def __neg__(self) -> "Cochain":
        return Cochain(self.category, self.degree,
                       {k: {o: -v for o, v in vec.items()}
                        for k, vec in self.components.items()})

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)


def unit_cochain(cat: FlatCategory) -> Cochain:
    """The identity transformation: length zero, value the strict unit."""
    comps = {}
    for obj, alg in enumerate(cat.algebras):
        if alg.unit is None:
            raise ValueError("unit cochain needs strict units everywhere")
        comps[(obj, ())] = {alg.unit: NovikovElement.one(alg.cutoff)}
    return Cochain(cat, 0, comps)


def constant_cochain(cat: FlatCategory, scalars) -> Cochain:
    comps = {}
    for obj, alg in enumerate(cat.algebras):
        comps[(obj, ())] = {alg.unit: scalars[obj]}
    return Cochain(cat, 0, comps)


def cc_differential(tau: Cochain, max_length: int = 4) -> Cochain:
    """The cochain differential, both insertion families with their signs."""
    cat = tau.category
    comps: dict = {}

    def add(obj, word, vec, sign):
        target = comps.setdefault((obj, word), {})
        for o, val in vec.items():
            _vec_add(target, o, -val if sign else val)

    for obj, alg in enumerate(cat.algebras):
        red_tau = (tau.degree + 1) % 2
        for d in range(0, max_length + 1):
            for word in itertools.product(range(alg.rank), repeat=d):
                # family one: a composition eats tau's value
                for j in range(0, d + 1):
                    for i in range(0, d - j + 1):
                        tv = tau.component(obj, word[i:i + j])
                        if not tv:
                            continue
                        outer_arity = d - j + 1
                        if outer_arity not in alg.tensors:
                            continue
                        dagger = (red_tau * _maltese(alg, word, 1, i)) % 2
                        for mid, coeff in tv.items():
                            outer = alg.m_basis(word[:i] + (mid,) + word[i + j:])
                            for o, val in outer.items():
                                add(obj, word, {o: val * coeff}, dagger)
                # family two: tau eats a composition
                for j in alg.tensors:
                    if j == 0 or j > d:
                        continue
                    for i in range(0, d - j + 1):
                        inner = alg.m_basis(word[i:i + j])
                        if not inner:
                            continue
                        club = (i + sum(alg.degrees[x] for x in word[:i])
                                + tau.degree - 1) % 2
                        for mid, coeff in inner.items():
                            tv = tau.component(obj, word[:i] + (mid,) + word[i + j:])
                            for o, val in tv.items():
                                add(obj, word, {o: -(val * coeff)}, club)

    return Cochain(cat, (tau.degree + 1) % 2, comps).cleaned()


def cc_product(taus: list[Cochain], max_length: int = 4) -> Cochain:
    """Insertion product of two or more cochains."""
    if len(taus) < 2:
        raise ValueError("the insertion product needs at least two cochains")
    cat = taus[0].category
    degree = (sum(t.degree for t in taus) + (2 - len(taus))) % 2
    comps: dict = {}
    e = len(taus)

    for obj, alg in enumerate(cat.algebras):
        for d in range(0, max_length + 1):
            for word in itertools.product(range(alg.rank), repeat=d):
                # choose disjoint consecutive windows for the insertions
                for windows in _windows(d, e):
                    values = []
                    ok = True
                    for (start, j), tau in zip(windows, taus):
                        tv = tau.component(obj, word[start:start + j])
                        if not tv:
                            ok = False
                            break
                        values.append(tv)
                    if not ok:
                        continue
                    outer_arity = d - sum(j for _, j in windows) + e
                    if outer_arity not in alg.tensors:
                        continue
                    circ = 0
                    for (start, _), tau in zip(windows, taus):
                        red_t = (tau.degree + 1) % 2
                        circ += red_t * sum((alg.degrees[x] + 1) % 2
                                            for x in word[:start])
                    circ %= 2
                    for mids in itertools.product(*[sorted(v) for v in values]):
                        coeff = NovikovElement.one(alg.cutoff)
                        for v, mid in zip(values, mids):
                            coeff = coeff * v[mid]
                        outer_word = []
                        pos = 0
                        for (start, j), mid in zip(windows, mids):
                            outer_word.extend(word[pos:start])
                            outer_word.append(mid)
                            pos = start + j
                        outer_word.extend(word[pos:])
                        outer = alg.m_basis(tuple(outer_word))
                        target = comps.setdefault((obj, word), {})
                        for o, val in outer.items():
                            _vec_add(target, o,
                                     -(val * coeff) if circ else val * coeff)

    return Cochain(cat, degree, comps).cleaned()


def _windows(d: int, e: int):
    """Ordered choices of e disjoint consecutive (start, length) windows."""
    def rec(pos, remaining):
        if remaining == 0:
            yield ()
            return
        for start in range(pos, d + 1):
            for j in range(0, d - start + 1):
                for rest in rec(start + j, remaining - 1):
                    yield ((start, j),) + rest
    return rec(0, e)


def restrict_to_object(tau: Cochain, obj: int) -> Vector:
    """The length-zero component at one object."""
    return tau.component(obj, ())
