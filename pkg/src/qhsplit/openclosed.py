"""Closed-form open-closed and closed-open data for the torus brane families.

The open-closed matrix of the projective family is a quantized discrete
Fourier transform: entry ``(b, a) = q^{b/(n+1)} zeta^{ab}`` with ``zeta`` a
primitive ``(n+1)``-st root of unity, rows indexed by the cycle basis
``Z_0 .. Z_n`` and columns by the branes.  The exceptional family gives
``(b, a) = q^{b eps} sigma^{ab}`` with ``sigma`` of order ``n - 1`` and rows
``Z_1 .. Z_{n-1}``.  Specializing ``q -> 1`` recovers the classical DFT.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, toric
from .novikov import CyclotomicNumber, NovikovElement

PROJECTIVE = "projective"
EXCEPTIONAL = "exceptional"

SURJECTIVE = "surjective"
CUTOFF_LIMITED = "cutoff-limited"
DEFICIENT = "deficient"


@dataclass(frozen=True)
class OCMatrix:
    n: int
    kind: str
    rows: tuple          # quantum basis labels
    cols: tuple          # brane labels
    entries: tuple       # tuple of row tuples of NovikovElement
    eps: Fraction | None = None

    def entry(self, b: int, a: int) -> NovikovElement:
        return self.entries[b][a]

    def column(self, a: int) -> dict:
        return {self.rows[b]: self.entries[b][a] for b in range(len(self.rows))
                if not self.entries[b][a].is_zero()}

    def as_lists(self) -> list[list[NovikovElement]]:
        return [list(row) for row in self.entries]

    def q_to_one(self) -> list[list[CyclotomicNumber]]:
        return [[entry.specialize_q_to_one() for entry in row] for row in self.entries]


@dataclass(frozen=True)
class PairingForm:
    labels: tuple
    matrix: tuple  # tuple of row tuples of NovikovElement

    def pair(self, i: int, j: int) -> NovikovElement:
        return self.matrix[i][j]

    def pair_labels(self, a, b) -> NovikovElement:
        return self.matrix[self.labels.index(a)][self.labels.index(b)]


def oc_matrix(n: int, kind: str, eps=None) -> OCMatrix:
    """The open-closed matrix in the cycle and brane bases."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if kind == PROJECTIVE:
        order = n + 1
        root = CyclotomicNumber.root_of_unity(order)
        rows = tuple(f"Z{b}" for b in range(n + 1))
        cols = tuple(f"pt{a}" for a in range(n + 1))
        entries = tuple(
            tuple(NovikovElement.monomial(Fraction(b, n + 1), root ** (a * b))
                  for a in range(n + 1))
            for b in range(n + 1))
        return OCMatrix(n, kind, rows, cols, entries)
    if kind == EXCEPTIONAL:
        if n < 2:
            raise ValueError("the exceptional family needs n >= 2")
        if eps is None:
            raise ValueError("the exceptional family needs the size parameter eps")
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        order = n - 1
        root = CyclotomicNumber.root_of_unity(order) if order > 1 \
            else CyclotomicNumber.one()
        rows = tuple(f"Z{b}" for b in range(1, n))
        cols = tuple(f"pt{a}" for a in range(1, n))
        entries = tuple(
            tuple(NovikovElement.monomial(b * eps, root ** (a * b))
                  for a in range(1, n))
            for b in range(1, n))
        return OCMatrix(n, kind, rows, cols, entries, eps=eps)
    raise ValueError(f"unknown kind {kind}")


def co_value(n: int, k: int, ell: int) -> NovikovElement:
    """Closed-open image of the codimension-graded cycle class on brane ``k``.

    The class of an ``ell``-plane maps to ``y_k^{n - ell} q^{(n-ell)/(n+1)}``
    times the unit of the brane's endomorphism algebra; the scalar is
    returned.
    """
    if not (0 <= ell <= n and 0 <= k <= n):
        raise ValueError("need 0 <= k, ell <= n")
    root = CyclotomicNumber.root_of_unity(n + 1)
    return NovikovElement.monomial(Fraction(n - ell, n + 1), root ** (k * (n - ell)))


def ring_hom_check(n: int, k: int) -> bool:
    """Quantum relation through the brane algebra: the hyperplane image to
    the power ``n + 1`` must equal ``q`` times the unit, multiplied out in
    the Clifford endomorphism algebra."""
    potential = toric.PotentialFunction.clifford_torus(n)
    y = toric.critical_points(potential)[k]
    algebra = toric.brane_algebra(potential, y)
    scalar = co_value(n, k, n - 1)
    element = {algebra.unit: scalar}
    power = {algebra.unit: NovikovElement.one()}
    for _ in range(n + 1):
        power = algebra.m([power, element])
    expected = {algebra.unit: NovikovElement.q_power(1)}
    diff = dict(power)
    for o, v in expected.items():
        diff[o] = diff.get(o, NovikovElement.zero()) - v
    return all(v.is_zero() for v in diff.values())


def pairing_form(n: int) -> PairingForm:
    """Intersection pairing on the cycle basis: ``<Z_a, Z_b> = 1`` iff
    ``a + b = n``."""
    labels = tuple(f"Z{b}" for b in range(n + 1))
    matrix = tuple(
        tuple(NovikovElement.one() if a + b == n else NovikovElement.zero()
              for b in range(n + 1))
        for a in range(n + 1))
    return PairingForm(labels, matrix)


def frobenius_orthogonality(n: int) -> list[list[NovikovElement]]:
    """Gram matrix of the open-closed columns under the intersection pairing."""
    matrix = oc_matrix(n, PROJECTIVE)
    gram = []
    for j in range(n + 1):
        row = []
        for k in range(n + 1):
            acc = NovikovElement.zero()
            for a in range(n + 1):
                b = n - a
                acc = acc + matrix.entry(a, j) * matrix.entry(b, k)
            row.append(acc)
        gram.append(row)
    return gram


def surjectivity_test(matrix, cutoff_e, normalize_rows: bool = False) -> str:
    """Determinant-based surjectivity check with a valuation split.

    Splits the determinant at ``cutoff_e``: surjective iff the part below the
    split is nonzero.  With ``normalize_rows`` each row is first divided by
    its minimal q-power - an invertible row operation that leaves
    surjectivity unchanged and keeps the split meaningful for matrices whose
    rows carry large uniform q-factors.
    """
    if isinstance(matrix, OCMatrix):
        matrix = matrix.as_lists()
    cutoff_e = Fraction(cutoff_e)
    n = len(matrix)
    if n == 0 or any(len(row) != n for row in matrix):
        raise ValueError("need a nonempty square matrix")
    entry_vals = [e.val_q() for row in matrix for e in row if not e.is_zero()]
    if not entry_vals:
        return DEFICIENT
    if normalize_rows:
        scaled = []
        for row in matrix:
            vals = [e.val_q() for e in row if not e.is_zero()]
            if not vals:
                scaled.append(list(row))
                continue
            shift = NovikovElement.q_power(-min(vals))
            scaled.append([e * shift for e in row])
        matrix = scaled
    det = linalg.determinant(matrix)
    if not det.below(cutoff_e).is_zero():
        return SURJECTIVE
    truncated = any(e.truncated for row in matrix for e in row)
    if min(entry_vals) >= cutoff_e or not det.is_zero() or truncated:
        return CUTOFF_LIMITED
    return DEFICIENT


def bulk_shift_perturbation(n: int, eps) -> tuple[OCMatrix, Fraction]:
    """Leading open-closed matrix under a point bulk shift of weight ``-eps``.

    The leading part is the projective matrix; corrections come from disks
    forced through the shifted point, whose minimal extra valuation is found
    by enumerating degree vectors with the point constraint (one insertion;
    the point sits at a toric fixed point and forces ``n`` additional roots).
    Returns the leading matrix and the exact minimal correction valuation.
    """
    if n < 2:
        raise ValueError("the bulk shift needs ambient dimension greater than 1")
    eps = Fraction(eps)
    if eps >= 1:
        raise ValueError("shift too large")
    if eps <= 0:
        raise ValueError("eps must be positive")
    leading = oc_matrix(n, PROJECTIVE)
    areas = [Fraction(1, n + 1)] * (n + 1)
    point_constraint = frozenset(range(n))  # all but the last coordinate
    best: Fraction | None = None
    for b in range(1, n + 1):
        row_constraint = frozenset(range(n + 1 - b, n + 1))
        classes = toric.blaschke_enumerate(
            n, areas, index_cap=2 * (n + b + 1),
            constraints=[row_constraint, point_constraint])
        if not classes:
            continue
        min_area = min(c.area for c in classes)
        val = min_area - eps
        if best is None or val < best:
            best = val
    if best is None:
        raise AssertionError("no constrained disks found")
    return leading, best
