"""Graded dimension counts on the coherent side of the correspondence.

Equivariant Hom spaces between twisted structure sheaves of the total
space and of the unstable loci are free modules over symmetric algebras
on weighted generators (polynomial generators in degree 0, exterior
ones in degree 1).  Everything here is monomial counting inside finite
exponent boxes, split by cohomological degree, plus the bookkeeping for
Koszul weight ranges and the semi-orthogonal decomposition shapes.

Counts may be genuinely infinite; every table is box-truncated and the
box is echoed in the reports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .lattice import WeightAction, Window, indices_of, mu_lift
from .sheafcalc import GradedDimTable


@dataclass(frozen=True)
class GradedSpace:
    """Symmetric algebra descriptor: named polynomial generators (degree
    0) and exterior generators (degree 1), each with an integer weight."""

    poly: tuple[tuple[str, int], ...]
    ext: tuple[tuple[str, int], ...]


def total_space_functions(action: WeightAction) -> GradedSpace:
    """Functions on the full linear space: one polynomial generator of
    weight -a_i per coordinate."""
    return GradedSpace(
        poly=tuple((f"z{i}", -action.weights[i]) for i in range(action.n)),
        ext=(),
    )


def unstable_end_space(action: WeightAction, locus: str) -> GradedSpace:
    """Endomorphism algebra of the structure sheaf of an unstable locus.

    For the locus cut out by the negative coordinates ('+'): polynomial
    generators dual to the positive coordinates (weights -a_i < 0) and
    exterior generators from the negative coordinates shifted into
    degree 1 (weights a_i < 0).  The '-' locus mirrors the signs.
    """
    if locus == "+":
        poly_idx, ext_idx = indices_of(action.pos_mask), indices_of(action.neg_mask)
    elif locus == "-":
        poly_idx, ext_idx = indices_of(action.neg_mask), indices_of(action.pos_mask)
    else:
        raise ValueError("locus must be '+' or '-'")
    return GradedSpace(
        poly=tuple((f"z{i}", -action.weights[i]) for i in poly_idx),
        ext=tuple((f"t{i}", action.weights[i]) for i in ext_idx),
    )


def restriction_space(action: WeightAction, locus: str) -> GradedSpace:
    """Hom from the total space sheaf to an unstable-locus sheaf: the
    polynomial part of the endomorphism algebra only."""
    return GradedSpace(poly=unstable_end_space(action, locus).poly, ext=())


def sym_graded_dim(space: GradedSpace, target_weight: int,
                   degree_box: int) -> GradedDimTable:
    """Monomial count at a fixed weight, split by cohomological degree.

    Polynomial exponents range over 0..degree_box (axis-aligned box);
    exterior generators are square-free and add one degree each.
    """
    if degree_box < 0:
        raise ValueError("degree box must be nonnegative")
    dims: dict[int, int] = {}
    poly_w = [w for _, w in space.poly]
    ext_w = [w for _, w in space.ext]
    for exps in itertools.product(range(degree_box + 1), repeat=len(poly_w)):
        base = sum(e * w for e, w in zip(exps, poly_w))
        for flags in itertools.product((0, 1), repeat=len(ext_w)):
            if base + sum(f * w for f, w in zip(flags, ext_w)) == target_weight:
                d = sum(flags)
                dims[d] = dims.get(d, 0) + 1
    return GradedDimTable.of(dims)


@dataclass(frozen=True)
class BundleTag:
    """Label of a twisted sheaf: the total space 'V' or an unstable
    locus 'V+'/'V-', twisted by an integer character."""

    kind: str
    twist: int

    def __post_init__(self):
        if self.kind not in ("V", "V+", "V-"):
            raise ValueError(f"unknown bundle kind {self.kind!r}")

    def label(self) -> str:
        return f"O_{{{self.kind}}}({self.twist})"


_PAIR_SPACES = {
    ("V", "V"): total_space_functions,
    ("V", "V+"): lambda a: restriction_space(a, "+"),
    ("V+", "V+"): lambda a: unstable_end_space(a, "+"),
    ("V", "V-"): lambda a: restriction_space(a, "-"),
    ("V-", "V-"): lambda a: unstable_end_space(a, "-"),
}


def hom_equivariant(action: WeightAction, src: BundleTag, dst: BundleTag,
                    degree_box: int) -> GradedDimTable:
    """Equivariant Hom between twisted sheaves as a graded monomial
    count: the weight-(src.twist - dst.twist) part of the pair's
    symmetric algebra."""
    factory = _PAIR_SPACES.get((src.kind, dst.kind))
    if factory is None:
        raise ValueError(f"unsupported pair {src.kind} -> {dst.kind}")
    return sym_graded_dim(factory(action), src.twist - dst.twist, degree_box)


@dataclass(frozen=True)
class KoszulRange:
    lo: int
    hi: int
    ranks: tuple[int, ...]


def koszul_weight_range(action: WeightAction, locus: str) -> KoszulRange:
    """Character range swept by the Koszul resolution of an unstable
    locus sheaf: [0, eta_minus] for the '+' locus (each exterior step
    raises the weight), mirrored for '-'; ranks are binomial."""
    if locus == "+":
        m = action.neg_mask.bit_count()
        top = action.eta_minus
    elif locus == "-":
        m = action.pos_mask.bit_count()
        top = action.eta_plus
    else:
        raise ValueError("locus must be '+' or '-'")
    return KoszulRange(lo=0, hi=top, ranks=tuple(comb(m, k) for k in range(m + 1)))


@dataclass(frozen=True)
class SodVariant:
    name: str
    exceptional: tuple[BundleTag, ...]
    window_part: tuple[BundleTag, ...]
    vanishing_ok: bool
    failures: tuple[str, ...]


@dataclass(frozen=True)
class SodReport:
    """Semi-orthogonal decomposition shapes supported by a window.

    The stored interval {lo..hi} is read as the twist interval of the
    defining line bundles.  ``eta_count`` is the number of exceptional
    twisted unstable-locus sheaves in the '+'-locus variant, which
    matches eta when the window size equals eta_plus.
    """

    window: Window
    variants: tuple[SodVariant, ...]
    eta_count: int

    def variant(self, name: str) -> SodVariant:
        for v in self.variants:
            if v.name == name:
                return v
        raise KeyError(name)


def _check_sod_vanishing(action: WeightAction, ordered: tuple[BundleTag, ...],
                         window_part: tuple[BundleTag, ...],
                         degree_box: int) -> tuple[bool, tuple[str, ...]]:
    failures = []
    one = GradedDimTable.of({0: 1})
    # no homs from later members back to earlier ones, and simple Ends
    for k, src in enumerate(ordered):
        end = hom_equivariant(action, src, src, degree_box)
        if end != one:
            failures.append(f"End({src.label()}) = {end.as_dict()}")
        for dst in ordered[:k]:
            t = hom_equivariant(action, src, dst, degree_box)
            if not t.is_zero:
                failures.append(f"Hom({src.label()},{dst.label()}) nonzero")
    for src in window_part:
        for dst in ordered:
            t = hom_equivariant(action, src, dst, degree_box)
            if not t.is_zero:
                failures.append(f"Hom({src.label()},{dst.label()}) nonzero")
    return not failures, tuple(failures)


def sod_report(action: WeightAction, window: Window,
               degree_box: int = 8) -> SodReport:
    """Decomposition shapes for a window of twists {lo..hi}.

    Variant 'plus_locus' (needs size >= eta_minus): exceptional twisted
    '+'-locus sheaves at lo..hi-eta_minus followed by the embedded
    window of total-space twists.  Variant 'minus_locus' (needs size >=
    eta_plus) mirrors it with descending '-'-locus twists.  All required
    Hom-vanishing entries are verified by monomial counting in the box.
    """
    a, b = window.lo, window.hi
    variants = []
    if window.size >= action.eta_minus:
        exceptional = tuple(BundleTag("V+", k) for k in range(a, b - action.eta_minus + 1))
        wpart = tuple(BundleTag("V", k) for k in range(b - action.eta_minus + 1, b + 1))
        ok, failures = _check_sod_vanishing(action, exceptional, wpart, degree_box)
        variants.append(SodVariant("plus_locus", exceptional, wpart, ok, failures))
    if window.size >= action.eta_plus:
        exceptional = tuple(BundleTag("V-", k)
                            for k in range(b, a + action.eta_plus - 1, -1))
        wpart = tuple(BundleTag("V", k) for k in range(a, a + action.eta_plus))
        ok, failures = _check_sod_vanishing(action, exceptional, wpart, degree_box)
        variants.append(SodVariant("minus_locus", exceptional, wpart, ok, failures))
    if not variants:
        raise ValueError(
            f"window size {window.size} below eta_minus={action.eta_minus}; "
            "no decomposition variant applies")
    # the '+'-locus variant exists whenever any does (eta_minus <= eta_plus)
    eta_count = len(variants[0].exceptional)
    return SodReport(window=window, variants=tuple(variants), eta_count=eta_count)


@dataclass(frozen=True)
class CccMatchReport:
    """Two independent counts of one equivariant Hom dimension.

    The monomial side counts exponent vectors c >= 0 of weight-level
    difference d inside the box; the lattice side counts kernel-lattice
    translations linking two fixed lifts, mapped through the bijection
    c = u - w - m.  The counts agree exactly at any box.
    """

    difference: int
    box_radius: int
    monomial_count: int
    lattice_count: int

    @property
    def passed(self) -> bool:
        return self.monomial_count == self.lattice_count


def ccc_match(action: WeightAction, i: int, j: int,
              box_radius: int = 8) -> CccMatchReport:
    d = i - j
    n = action.n
    monomials = 0
    for c in itertools.product(range(box_radius + 1), repeat=n):
        if sum(x * a for x, a in zip(c, action.weights)) == d:
            monomials += 1
    u = mu_lift(action, d)
    lattice = 0
    for x in itertools.product(*[range(ui - box_radius, ui + 1) for ui in u]):
        if sum(xi * a for xi, a in zip(x, action.weights)) == 0:
            lattice += 1
    return CccMatchReport(difference=d, box_radius=box_radius,
                          monomial_count=monomials, lattice_count=lattice)
