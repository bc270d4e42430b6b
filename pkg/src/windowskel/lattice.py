"""Weight actions, the kernel lattice M, and the two GIT fans.

A rank-1 torus acts on N coordinates through a weight vector
``a = (a_1, ..., a_N)`` of nonzero integers with gcd 1 and both signs
present.  This module keeps the integer bookkeeping exact: the weight
functional ``mu(v) = sum(v_i * a_i)``, a canonical Hermite-reduced basis
of the kernel lattice ``M = ker(mu)``, canonical coset representatives
of ``Z^N / M``, and the two sub-fans of the orthant fan selected by the
sign pattern of the weights.

Index subsets of ``range(n)`` are passed around as int bitmasks
(bit ``i`` set means coordinate ``i`` is in the subset).  Everything is
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

MAX_COORDS = 16


def mask_of(indices: Iterable[int]) -> int:
    """Bitmask for a collection of 0-based coordinate indices."""
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    """Sorted tuple of 0-based indices encoded in a bitmask."""
    out = []
    i = 0
    m = mask
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def submasks(mask: int) -> list[int]:
    """All submasks of `mask`, sorted ascending (so `0` comes first)."""
    subs = [0]
    for i in indices_of(mask):
        subs += [s | (1 << i) for s in subs]
    return sorted(subs)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (x, y, g) with x*a + y*b = g >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


@dataclass(frozen=True)
class WeightAction:
    """A normalized weight vector with its sign partition.

    ``pos_mask``/``neg_mask`` are bitmasks of the coordinates with
    positive/negative weight; ``eta_plus``/``eta_minus`` the sums of
    absolute weights on each side, and ``eta = eta_plus - eta_minus``
    is nonnegative after normalization.  ``flipped`` records whether
    all signs were flipped to achieve that.
    """

    weights: tuple[int, ...]
    pos_mask: int
    neg_mask: int
    eta_plus: int
    eta_minus: int
    eta: int
    flipped: bool

    @property
    def n(self) -> int:
        return len(self.weights)

    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def abs_sum(self) -> int:
        return self.eta_plus + self.eta_minus

    def to_json_obj(self) -> dict:
        return {
            "weights": list(self.weights),
            "eta_plus": self.eta_plus,
            "eta_minus": self.eta_minus,
            "eta": self.eta,
        }


def normalize_action(raw_weights: Sequence[int]) -> WeightAction:
    """Validate a raw weight vector and normalize its overall sign.

    Rejects zero weights, a common factor, and all-same-sign vectors.
    If the negative side dominates, every sign is flipped (recorded in
    ``flipped``) so that ``eta >= 0`` always holds.
    """
    w = tuple(int(x) for x in raw_weights)
    if len(w) < 2:
        raise ValueError("need at least 2 weights")
    if len(w) > MAX_COORDS:
        raise ValueError(f"at most {MAX_COORDS} coordinates supported")
    if any(x == 0 for x in w):
        raise ValueError("zero weights are not allowed")
    g = math.gcd(*[abs(x) for x in w])
    if g != 1:
        raise ValueError(f"weights must have gcd 1 (got gcd {g})")
    if all(x > 0 for x in w) or all(x < 0 for x in w):
        raise ValueError("weights must take both signs")
    eta_plus = sum(x for x in w if x > 0)
    eta_minus = sum(-x for x in w if x < 0)
    flipped = eta_plus < eta_minus
    if flipped:
        w = tuple(-x for x in w)
        eta_plus, eta_minus = eta_minus, eta_plus
    pos_mask = mask_of(i for i, x in enumerate(w) if x > 0)
    neg_mask = mask_of(i for i, x in enumerate(w) if x < 0)
    return WeightAction(
        weights=w,
        pos_mask=pos_mask,
        neg_mask=neg_mask,
        eta_plus=eta_plus,
        eta_minus=eta_minus,
        eta=eta_plus - eta_minus,
        flipped=flipped,
    )


def mu_of(action: WeightAction, v: Sequence[int]) -> int:
    """The weight functional mu(v) = sum(v_i * a_i)."""
    if len(v) != action.n:
        raise ValueError(f"vector length {len(v)} != {action.n}")
    return sum(int(x) * a for x, a in zip(v, action.weights))


@dataclass(frozen=True)
class Window:
    """A consecutive integer interval ``{lo..hi}`` of selected weights.

    Convention used throughout: the stored interval is the lattice-side
    set, i.e. lattice points v participate in the window skeleton iff
    ``lo <= mu(v) <= hi``.
    """

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window {self.lo}..{self.hi}")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def minus_w(self, k: int) -> bool:
        return self.lo <= k <= self.hi

    def to_json_obj(self) -> dict:
        return {"window_lo": self.lo, "window_hi": self.hi}


@dataclass(frozen=True)
class MLattice:
    """A basis of the kernel lattice M = ker(mu), in row-HNF form."""

    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    def pivots(self) -> tuple[int, ...]:
        return tuple(_leading_col(row) for row in self.basis)


def _leading_col(row: Sequence[int]) -> int:
    for j, x in enumerate(row):
        if x != 0:
            return j
    raise ValueError("zero row has no pivot")


def _hnf_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form over Z.

    Positive staircase pivots, entries above each pivot reduced into
    ``[0, pivot)``.  Deterministic; zero rows are dropped.
    """
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    r = 0
    for c in range(ncols):
        # gcd out column c below row r
        for i in range(r + 1, nrows):
            while mat[i][c] != 0:
                if mat[r][c] == 0:
                    mat[r], mat[i] = mat[i], mat[r]
                    continue
                q = mat[i][c] // mat[r][c]
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
                if mat[i][c] != 0:
                    mat[r], mat[i] = mat[i], mat[r]
        if mat[r][c] != 0:
            if mat[r][c] < 0:
                mat[r] = [-x for x in mat[r]]
            for i in range(r):
                q = mat[i][c] // mat[r][c]
                if q:
                    mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
            r += 1
            if r == nrows:
                break
    return [row for row in mat[:r] if any(row)]


@lru_cache(maxsize=None)
def _unimodular_transform(weights: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Unimodular T with T @ a = (1, 0, ..., 0) for a primitive a.

    Row 0 pairs to 1 with the weight vector; rows 1..N-1 span ker(mu).
    """
    n = len(weights)
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    g = weights[0]
    for i in range(1, n):
        x, y, g2 = xgcd(g, weights[i])
        r0 = [x * u + y * v for u, v in zip(rows[0], rows[i])]
        ri = [
            (-weights[i] // g2) * u + (g // g2) * v
            for u, v in zip(rows[0], rows[i])
        ]
        rows[0], rows[i] = r0, ri
        g = g2
    if g == -1:
        rows[0] = [-x for x in rows[0]]
        g = 1
    assert g == 1, "weights are validated primitive"
    return tuple(tuple(r) for r in rows)


@lru_cache(maxsize=None)
def m_basis(action: WeightAction) -> MLattice:
    """Canonical Hermite-reduced basis of M = ker(mu), rank N-1."""
    t = _unimodular_transform(action.weights)
    kernel_rows = [list(r) for r in t[1:]]
    return MLattice(basis=tuple(tuple(r) for r in _hnf_rows(kernel_rows)))


def reduce_mod_m(action: WeightAction, v: Sequence[int]) -> tuple[int, ...]:
    """Canonical representative of ``v + M``; idempotent, preserves mu."""
    lat = m_basis(action)
    r = [int(x) for x in v]
    if len(r) != action.n:
        raise ValueError(f"vector length {len(r)} != {action.n}")
    for row in lat.basis:
        p = _leading_col(row)
        q = r[p] // row[p]
        if q:
            r = [x - q * y for x, y in zip(r, row)]
    return tuple(r)


@lru_cache(maxsize=None)
def mu_unit(action: WeightAction) -> tuple[int, ...]:
    """A fixed integer vector with mu = 1 (row 0 of the gcd transform)."""
    return _unimodular_transform(action.weights)[0]


def mu_lift(action: WeightAction, k: int) -> tuple[int, ...]:
    """Canonical lattice point with mu = k (the reduced multiple of mu_unit)."""
    u = mu_unit(action)
    return reduce_mod_m(action, tuple(k * x for x in u))


def _int_det(rows: list[list[int]]) -> int:
    """Determinant of a small square integer matrix, exactly."""
    n = len(rows)
    mat = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if mat[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            det = -det
        det *= mat[c][c]
        inv = 1 / mat[c][c]
        for i in range(c + 1, n):
            f = mat[i][c] * inv
            if f:
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
    assert det.denominator == 1
    return int(det)


@dataclass(frozen=True)
class StackyFanPair:
    """The two GIT sub-fans of the orthant fan, in quotient coordinates.

    ``ray_images[i]`` is the image of the i-th coordinate covector in
    the quotient lattice (rank N-1) under a fixed unimodular basis.
    ``sigma_plus``/``sigma_minus`` list the cones of each sub-fan as
    index bitmasks: a cone survives on the +/- side iff it does not
    contain the full positive/negative index set.
    """

    ray_images: tuple[tuple[int, ...], ...]
    sigma_plus: tuple[int, ...]
    sigma_minus: tuple[int, ...]

    def rays(self, side: str) -> tuple[int, ...]:
        cones = self.sigma_plus if side == "+" else self.sigma_minus
        return tuple(m for m in cones if m.bit_count() == 1)

    def max_cones(self, side: str) -> tuple[int, ...]:
        cones = set(self.sigma_plus if side == "+" else self.sigma_minus)
        out = [m for m in cones if not any(m != c and m & c == m for c in cones)]
        return tuple(sorted(out))

    def cone_index(self, mask: int) -> int:
        """Lattice index of a full-dimensional simplicial cone (1 = smooth)."""
        rows = [list(self.ray_images[i]) for i in indices_of(mask)]
        rank = len(self.ray_images[0]) if self.ray_images else 0
        if len(rows) != rank:
            raise ValueError("cone_index needs a full-dimensional cone")
        return abs(_int_det(rows))

    def summary(self) -> dict:
        out = {}
        for side in ("+", "-"):
            maxes = self.max_cones(side)
            out[side] = {
                "rays": len(self.rays(side)),
                "max_cones": len(maxes),
                "max_cone_indices": [self.cone_index(m) for m in maxes
                                     if m.bit_count() == len(self.ray_images[0])],
            }
        return out


def quotient_fans(action: WeightAction) -> StackyFanPair:
    """Images of the orthant sub-fans in the quotient of Z^N by the weight ray."""
    t = _unimodular_transform(action.weights)
    n = action.n
    ray_images = tuple(tuple(t[r][i] for r in range(1, n)) for i in range(n))
    sigma_plus = tuple(
        m for m in range(1 << n) if (m & action.pos_mask) != action.pos_mask
    )
    sigma_minus = tuple(
        m for m in range(1 << n) if (m & action.neg_mask) != action.neg_mask
    )
    return StackyFanPair(ray_images=ray_images, sigma_plus=sigma_plus,
                         sigma_minus=sigma_minus)
