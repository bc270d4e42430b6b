"""Exact encodings of the rectilinear conical Lagrangians and their slices.

Every Lagrangian handled here is a union of pieces ``F x (-sigma_I)``
where F is an open face of the unit-cube stratification of R^N and
``sigma_I`` is the coordinate cone spanned by the covectors indexed by
``I``.  Equality questions therefore reduce to finite comparisons of
face -> cone-set tables, and every predicate below is decided by exact
integer arithmetic (gcd congruences and numerical-semigroup membership
for the reachability questions, nothing else).

Two independent routes are kept for the central appearance predicate:
the arithmetic `appears` and the brute-force `appears_oracle`; tests
assert their agreement everywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, gcd
from typing import Iterator, Sequence

from .lattice import (
    MLattice,
    WeightAction,
    Window,
    indices_of,
    m_basis,
    mu_lift,
    mu_of,
    submasks,
)

DEFAULT_FACE_CAP = 4_000_000


class SkeletonBuildError(ValueError):
    pass


class CoverageError(ValueError):
    pass


class IndexType(Enum):
    EMPTY = "empty"
    MIXED = "mixed"
    PURE_POS = "pure_pos"
    PURE_NEG = "pure_neg"


def classify_index_set(action: WeightAction, imask: int) -> IndexType:
    if imask & ~action.full_mask():
        raise ValueError("index set out of range")
    if imask == 0:
        return IndexType.EMPTY
    has_pos = bool(imask & action.pos_mask)
    has_neg = bool(imask & action.neg_mask)
    if has_pos and has_neg:
        return IndexType.MIXED
    return IndexType.PURE_POS if has_pos else IndexType.PURE_NEG


def semigroup_member(gens: Sequence[int], target: int) -> bool:
    """Membership of `target` in the semigroup of nonnegative combinations.

    Generators must be positive.  Decided by dynamic programming over
    the values 0..target; negative targets are not members.
    """
    gs = sorted(set(int(g) for g in gens))
    if not gs or any(g <= 0 for g in gs):
        raise ValueError("generators must be positive integers")
    if target < 0:
        return False
    reachable = bytearray(target + 1)
    reachable[0] = 1
    for g in gs:
        for t in range(g, target + 1):
            if reachable[t - g]:
                reachable[t] = 1
    return bool(reachable[target])


@lru_cache(maxsize=None)
def _nonneg_reach(action: WeightAction, window: Window, value: int, kmask: int) -> bool:
    """Is some element of the window reachable from `value` by subtracting
    a nonnegative combination of the weights indexed by `kmask`?

    The reachable set of shifts is, by sign type of `kmask`: {0} (empty),
    the full subgroup g.Z (mixed; mixed-sign nonnegative combinations
    form a group), or the numerical semigroup of the absolute weights
    (pure, on the matching side of `value`).
    """
    kind = classify_index_set(action, kmask)
    weights = [action.weights[i] for i in indices_of(kmask)]
    if kind is IndexType.EMPTY:
        return window.minus_w(value)
    if kind is IndexType.MIXED:
        g = gcd(*[abs(w) for w in weights]) if len(weights) > 1 else abs(weights[0])
        return any((value - m) % g == 0 for m in range(window.lo, window.hi + 1))
    if kind is IndexType.PURE_POS:
        return any(
            semigroup_member(weights, value - m)
            for m in range(window.lo, window.hi + 1)
        )
    abs_weights = [-w for w in weights]
    return any(
        semigroup_member(abs_weights, m - value)
        for m in range(window.lo, window.hi + 1)
    )


def appears_at_level(action: WeightAction, window: Window, mu_value: int,
                     imask: int) -> bool:
    """Appearance of the wedge stratum for `imask` at a lattice point of
    the given mu-level (the predicate only depends on the level).

    True iff some window lattice point w satisfies w_i < v_i for i in
    `imask` and w_i = v_i otherwise, i.e. the window is reachable from
    ``mu(v) - alpha_I`` by nonnegative combinations of the I-weights,
    where ``alpha_I`` is the plain sum of those weights.
    """
    alpha = sum(action.weights[i] for i in indices_of(imask))
    return _nonneg_reach(action, window, mu_value - alpha, imask)


def appears(action: WeightAction, window: Window, v: Sequence[int],
            imask: int) -> bool:
    return appears_at_level(action, window, mu_of(action, v), imask)


def default_oracle_bound(action: WeightAction, window: Window) -> int:
    return window.size + action.abs_sum() + max(abs(window.lo), abs(window.hi))


def appears_oracle(action: WeightAction, window: Window, v: Sequence[int],
                   imask: int, bound: int | None = None) -> bool:
    """Brute-force version of `appears`: search coefficients 1..bound."""
    if bound is None:
        bound = default_oracle_bound(action, window)
    if bound < 1:
        raise ValueError("bound must be >= 1")
    mu_v = mu_of(action, v)
    idx = indices_of(imask)
    if not idx:
        return window.minus_w(mu_v)
    for cs in itertools.product(range(1, bound + 1), repeat=len(idx)):
        shift = sum(c * action.weights[i] for c, i in zip(cs, idx))
        if window.minus_w(mu_v - shift):
            return True
    return False


@dataclass(frozen=True)
class FaceId:
    """An open cubical face: anchor v plus the set of open unit directions."""

    anchor: tuple[int, ...]
    dirs_mask: int

    @property
    def n(self) -> int:
        return len(self.anchor)


def face_mu_closure(action: WeightAction, level: int, dirs_mask: int) -> tuple[int, int]:
    """Closed mu-image [lo, hi] of a face at anchor level `level`."""
    lo = level + sum(action.weights[i] for i in indices_of(dirs_mask)
                     if action.weights[i] < 0)
    hi = level + sum(action.weights[i] for i in indices_of(dirs_mask)
                     if action.weights[i] > 0)
    return lo, hi


def face_cone_in_quadrant_ss(face: FaceId, imask: int, w: Sequence[int]) -> bool:
    """Does the open face, paired with the cone for `imask`, lie in the
    conical support of the shifted open-quadrant sheaf at w?

    Requires w_i = anchor_i on `imask` and anchor_j >= w_j off it; the
    test is exact because anchors and w are integral while face points
    in open directions live in open unit intervals.
    """
    if imask & face.dirs_mask:
        raise ValueError("cone indices must avoid the open face directions")
    if len(w) != face.n:
        raise ValueError("dimension mismatch")
    for i in range(face.n):
        if imask >> i & 1:
            if w[i] != face.anchor[i]:
                return False
        elif face.anchor[i] < w[i]:
            return False
    return True


def _entry_present(action: WeightAction, window: Window | None, kind: str,
                   level: int, dirs_mask: int, imask: int) -> bool:
    """Membership of (face at `level` with `dirs_mask`, cone `imask`)."""
    if imask & dirs_mask:
        return False
    if kind == "full":
        return True
    if kind == "git_plus":
        return (imask & action.pos_mask) != action.pos_mask
    if kind == "git_minus":
        return (imask & action.neg_mask) != action.neg_mask
    if kind == "window":
        # some window point w with w = anchor on I and w <= anchor elsewhere
        assert window is not None
        kmask = action.full_mask() & ~imask
        return _nonneg_reach(action, window, level, kmask)
    raise ValueError(f"unknown kind {kind!r}")


class SkeletonEncoding:
    """Face -> cone-set table of a rectilinear conical Lagrangian.

    Entries only depend on the mu-level of a face anchor (faces in one
    kernel-lattice orbit carry identical entries), so the table is
    stored per (level, dirs) pair covering a finite band of levels.
    When `periodic` the encoding is read as the quotient by M, with one
    canonical anchor per level; otherwise as the band of the universal
    cover it covers.
    """

    def __init__(self, action: WeightAction, kind: str, mu_lo: int, mu_hi: int,
                 periodic: bool, window: Window | None,
                 table: dict[tuple[int, int], tuple[int, ...]]):
        self.action = action
        self.kind = kind
        self.mu_lo = mu_lo
        self.mu_hi = mu_hi
        self.periodic = periodic
        self.window = window
        self._table = table

    def covers_level(self, level: int) -> bool:
        return self.mu_lo <= level <= self.mu_hi

    def entries_at(self, level: int, dirs_mask: int) -> tuple[int, ...]:
        if not self.covers_level(level):
            raise CoverageError(f"level {level} outside covered band "
                                f"[{self.mu_lo}, {self.mu_hi}]")
        return self._table[(level, dirs_mask)]

    def entries(self, face: FaceId) -> tuple[int, ...]:
        return self.entries_at(mu_of(self.action, face.anchor), face.dirs_mask)

    def faces(self) -> Iterator[FaceId]:
        """Canonical fundamental-domain faces, one anchor per level."""
        for level in range(self.mu_lo, self.mu_hi + 1):
            anchor = mu_lift(self.action, level)
            for dirs_mask in range(1 << self.action.n):
                yield FaceId(anchor=anchor, dirs_mask=dirs_mask)

    def vertex_classes(self) -> tuple[int, ...]:
        """Levels whose vertex carries the full coordinate cone."""
        full = self.action.full_mask()
        return tuple(level for level in range(self.mu_lo, self.mu_hi + 1)
                     if full in self._table[(level, 0)])

    def hair_items(self) -> list[tuple[int, int, int]]:
        """(level, dirs, cone) triples with a nonzero cone, one per orbit."""
        out = []
        for (level, dirs_mask), cones in sorted(self._table.items()):
            for imask in cones:
                if imask:
                    out.append((level, dirs_mask, imask))
        return out

    def to_json_obj(self) -> list[dict]:
        out = []
        for level in range(self.mu_lo, self.mu_hi + 1):
            anchor = list(mu_lift(self.action, level))
            for dirs_mask in range(1 << self.action.n):
                cones = self._table[(level, dirs_mask)]
                if not cones:
                    continue
                out.append({
                    "anchor": anchor,
                    "dirs": list(indices_of(dirs_mask)),
                    "cones": [list(indices_of(c)) for c in cones],
                })
        return out


def build_skeleton(action: WeightAction, kind: str, mu_range: tuple[int, int],
                   periodic: bool = True, window: Window | None = None,
                   face_cap: int = DEFAULT_FACE_CAP) -> SkeletonEncoding:
    """Tabulate a skeleton encoding over a band of anchor levels.

    `kind` is one of "full", "git_plus", "git_minus", "window"; the
    window kind requires `window`.
    """
    mu_lo, mu_hi = mu_range
    if mu_lo > mu_hi:
        raise SkeletonBuildError("empty mu range")
    if kind == "window" and window is None:
        raise SkeletonBuildError("window kind needs a window")
    if kind != "window" and window is not None:
        raise SkeletonBuildError(f"{kind} kind takes no window")
    n = action.n
    n_faces = (mu_hi - mu_lo + 1) * (1 << n) * (1 << n)
    if n_faces > face_cap:
        raise SkeletonBuildError(
            f"requested table of {n_faces} face-cone pairs exceeds cap {face_cap}")
    table: dict[tuple[int, int], tuple[int, ...]] = {}
    for level in range(mu_lo, mu_hi + 1):
        for dirs_mask in range(1 << n):
            cones = tuple(
                imask for imask in submasks(action.full_mask() & ~dirs_mask)
                if _entry_present(action, window, kind, level, dirs_mask, imask)
            )
            table[(level, dirs_mask)] = cones
    return SkeletonEncoding(action, kind, mu_lo, mu_hi, periodic, window, table)


def restrict_equal(enc1: SkeletonEncoding, enc2: SkeletonEncoding,
                   interval: tuple[Fraction | int, Fraction | int]) -> bool:
    """Exact equality of two encodings over an open mu-interval.

    Compares cone sets on every face whose closed mu-image meets the
    interval; raises CoverageError if either encoding does not cover
    all such faces.
    """
    alpha, beta = Fraction(interval[0]), Fraction(interval[1])
    if alpha >= beta:
        raise ValueError("empty interval")
    action = enc1.action
    if enc2.action != action:
        raise ValueError("encodings belong to different actions")
    # faces at level k with directions D meet (alpha, beta) iff
    # k + posspan(D) > alpha and k - negspan(D) < beta
    lo_needed = floor(alpha - action.eta_plus) + 1
    hi_needed = ceil(beta + action.eta_minus) - 1
    for enc in (enc1, enc2):
        if enc.mu_lo > lo_needed or enc.mu_hi < hi_needed:
            raise CoverageError(
                f"{enc.kind} encoding band [{enc.mu_lo}, {enc.mu_hi}] does not "
                f"cover levels [{lo_needed}, {hi_needed}] needed for "
                f"({alpha}, {beta})")
    for level in range(lo_needed, hi_needed + 1):
        for dirs_mask in range(1 << action.n):
            closure_lo, closure_hi = face_mu_closure(action, level, dirs_mask)
            if not (closure_hi > alpha and closure_lo < beta):
                continue
            if enc1.entries_at(level, dirs_mask) != enc2.entries_at(level, dirs_mask):
                return False
    return True


@dataclass(frozen=True)
class SliceEncoding:
    """Face-cone pairs of an encoding crossing a generic level mu = t."""

    action: WeightAction
    t: Fraction
    items: frozenset[tuple[int, int, int]]  # (level, dirs_mask, imask)

    def ray_family_count(self) -> int:
        return sum(1 for (_, _, imask) in self.items if imask)

    def signature(self) -> tuple:
        """Translation-invariant combinatorial type of the slice.

        Each crossing pair contributes its in-slice dimension together
        with the projection of its cone to the kernel-lattice dual, as
        a canonical set of primitive generators.  Anchored levels drop
        out, so slices at different heights are comparable.
        """
        sig = []
        for (_level, dirs_mask, imask) in self.items:
            cone = _projected_cone(self.action, imask)
            sig.append((dirs_mask.bit_count() - 1, cone))
        return tuple(sorted(sig))

    def same_class(self, other: "SliceEncoding") -> bool:
        return self.signature() == other.signature()


def _primitive(vec: tuple[int, ...]) -> tuple[int, ...]:
    g = gcd(*[abs(x) for x in vec]) if len(vec) > 1 else abs(vec[0])
    return tuple(x // g for x in vec)


@lru_cache(maxsize=None)
def _projected_cone(action: WeightAction, imask: int) -> tuple[tuple[int, ...], ...]:
    """Cone for `imask` projected to the dual of M: primitive generators."""
    if imask == 0:
        return ()
    basis = m_basis(action).basis
    gens = set()
    for i in indices_of(imask):
        vec = tuple(-row[i] for row in basis)
        gens.add(_primitive(vec))
    return tuple(sorted(gens))


def slice_encoding(enc: SkeletonEncoding, t: Fraction | float | int) -> SliceEncoding:
    """Restrict an encoding to the faces crossing the level mu = t.

    Only generic (non-integer) t is allowed: every positive-dimensional
    face has a nonconstant mu and every vertex sits at an integer.
    """
    t = Fraction(t)
    if t.denominator == 1:
        raise ValueError("slice level must not be an integer")
    action = enc.action
    lo_needed = floor(t - action.eta_plus) + 1
    hi_needed = ceil(t + action.eta_minus) - 1
    if enc.mu_lo > lo_needed or enc.mu_hi < hi_needed:
        raise CoverageError(
            f"encoding band [{enc.mu_lo}, {enc.mu_hi}] too narrow to slice at {t}")
    items = set()
    for level in range(enc.mu_lo, enc.mu_hi + 1):
        for dirs_mask in range(1, 1 << action.n):
            closure_lo, closure_hi = face_mu_closure(action, level, dirs_mask)
            if not (closure_lo < t < closure_hi):
                continue
            for imask in enc.entries_at(level, dirs_mask):
                items.add((level, dirs_mask, imask))
    return SliceEncoding(action=action, t=t, items=frozenset(items))


@dataclass(frozen=True)
class JumpReport:
    """Levels where restriction across mu = t fails to be an equivalence.

    `plus` lists the lattice classes (one per level) carrying the
    forward jump covector, characterized exactly: the level and the
    level shifted up by eta_minus both lie in the window.  `minus`
    entries satisfy only a necessary condition and are reported as
    candidates, never asserted.
    """

    plus: tuple[tuple[int, tuple[int, ...]], ...]
    minus_candidates: tuple[tuple[int, tuple[int, ...]], ...]
    jump_mu: tuple[int, ...]

    def to_json_obj(self) -> dict:
        return {
            "plus": [{"mu": k, "class": list(v)} for k, v in self.plus],
            "minus_candidates": [{"mu": k, "class": list(v)}
                                 for k, v in self.minus_candidates],
            "jump_mu": list(self.jump_mu),
        }


def jump_covectors(action: WeightAction, window: Window,
                   mu_box: int) -> JumpReport:
    """Scan a level box for jump covectors of the window skeleton."""
    if not (-mu_box <= window.lo and window.hi <= mu_box):
        raise ValueError("mu box must contain the window")
    plus = []
    minus = []
    for k in range(-mu_box, mu_box + 1):
        if window.minus_w(k) and window.minus_w(k + action.eta_minus):
            plus.append((k, mu_lift(action, k)))
        if window.minus_w(k) and window.minus_w(k - action.eta_plus):
            minus.append((k, mu_lift(action, k)))
    return JumpReport(
        plus=tuple(plus),
        minus_candidates=tuple(minus),
        jump_mu=tuple(k for k, _ in plus),
    )


def default_mu_range(action: WeightAction, window: Window) -> tuple[int, int]:
    """Band wide enough for all checks around the window."""
    pad = action.abs_sum()
    return (window.lo - action.eta_minus - pad, window.hi + action.eta_plus + pad)
