"""Bigraded spaces, finite complexes over them, homology, truncation.

A complex here is a finite family of based terms, one per non-negative
degree, whose basis slots are labelled with a weight and optionally a
bracket length. Every differential the engine builds is homogeneous in
weight and shifts length by a fixed declared amount (0 or 1), so homology
splits into independent blocks; the block key pairs the weight with the
quantity length + shift*degree (chain) or length - shift*degree (cochain),
which the differential preserves. Construction validates d(d(x)) = 0 and
blockwise homogeneity, so a malformed differential fails loudly instead of
producing a wrong dimension somewhere downstream.
"""

from dataclasses import dataclass

from .linalg import Echelon, Matrix


@dataclass(frozen=True)
class Multidegree:
    degree: int
    weight: int
    filtration: int = None
    length: int = None

    def __post_init__(self):
        if self.filtration is not None and self.filtration < 0:
            raise ValueError("filtration index must be non-negative")
        if self.length is not None and self.length < 1:
            raise ValueError("bracket length must be positive")


class GradedSpace:
    """Dimensions and basis labels indexed by Multidegree."""

    def __init__(self, labels):
        # labels: map Multidegree -> list of label strings
        self.labels = {k: list(v) for k, v in labels.items() if v}
        self.dims = {k: len(v) for k, v in self.labels.items()}

    def dim(self, key):
        return self.dims.get(key, 0)

    def total_dim(self):
        return sum(self.dims.values())


class Slot:
    """One basis vector of a complex term: a label plus its gradings."""

    __slots__ = ("label", "weight", "length")

    def __init__(self, label, weight, length=None):
        self.label = label
        self.weight = weight
        self.length = length

    def __repr__(self):
        return f"Slot({self.label!r}, w={self.weight}, l={self.length})"


class FiniteComplex:
    """A finite complex of based bigraded spaces.

    slots: {degree: [Slot, ...]} with all degrees >= 0.
    diffs: {source degree: Matrix}; chain convention maps degree n to n-1,
    cochain maps n to n+1. Missing matrices are zero maps. length_shift is
    how much the differential adds to the bracket length (0 or 1); it is
    ignored when slots carry no lengths. Either every slot has a length or
    none does.
    """

    def __init__(self, convention, slots, diffs, length_shift=0):
        if convention not in ("chain", "cochain"):
            raise ValueError(f"unknown convention {convention!r}")
        if length_shift not in (0, 1):
            raise ValueError("length_shift must be 0 or 1")
        self.convention = convention
        self.length_shift = length_shift
        self.slots = {n: list(v) for n, v in slots.items() if v}
        if any(n < 0 for n in self.slots):
            raise ValueError("complex terms must sit in non-negative degrees")
        lengths = [s.length is not None
                   for v in self.slots.values() for s in v]
        if lengths and any(lengths) and not all(lengths):
            raise ValueError("either all slots carry lengths or none does")
        self.has_lengths = bool(lengths) and all(lengths)
        self.diffs = {}
        for n, mat in diffs.items():
            if mat is None or mat.is_zero():
                continue
            target = n - 1 if convention == "chain" else n + 1
            rows = len(self.slots.get(target, ()))
            cols = len(self.slots.get(n, ()))
            if (mat.rows, mat.cols) != (rows, cols):
                raise ValueError(
                    f"differential at degree {n} has shape "
                    f"{(mat.rows, mat.cols)}, expected {(rows, cols)}")
            self.diffs[n] = mat
        self._validate_homogeneous()
        self._validate_square_zero()

    def degrees(self):
        return sorted(self.slots)

    def dim(self, n):
        return len(self.slots.get(n, ()))

    def diff(self, n):
        """The differential out of degree n (zero matrix if absent)."""
        mat = self.diffs.get(n)
        if mat is not None:
            return mat
        target = n - 1 if self.convention == "chain" else n + 1
        return Matrix.zero(self.dim(target), self.dim(n))

    def block_key(self, n, slot):
        """(weight, invariant) preserved by the differential."""
        if not self.has_lengths:
            return (slot.weight, None)
        if self.convention == "chain":
            return (slot.weight, slot.length + self.length_shift * n)
        return (slot.weight, slot.length - self.length_shift * n)

    def _validate_homogeneous(self):
        for n, mat in self.diffs.items():
            target = n - 1 if self.convention == "chain" else n + 1
            src = self.slots.get(n, ())
            dst = self.slots.get(target, ())
            for (i, j), _ in mat.entries.items():
                if self.block_key(target, dst[i]) != self.block_key(n, src[j]):
                    raise ValueError(
                        f"differential at degree {n} mixes blocks: "
                        f"{src[j]!r} -> {dst[i]!r}")

    def _validate_square_zero(self):
        step = -1 if self.convention == "chain" else 1
        for n in self.diffs:
            nxt = self.diffs.get(n + step)
            if nxt is not None:
                comp = nxt @ self.diffs[n]
                if not comp.is_zero():
                    raise ValueError(
                        f"d(d(x)) != 0 between degrees {n} and {n + 2 * step}")

    def space(self, n):
        labels = {}
        for slot in self.slots.get(n, ()):
            key = Multidegree(degree=n, weight=slot.weight, length=slot.length)
            labels.setdefault(key, []).append(slot.label)
        return GradedSpace(labels)

    def _block_columns(self, n, key):
        """Column indices of degree n lying in the given block."""
        return [j for j, s in enumerate(self.slots.get(n, ()))
                if self.block_key(n, s) == key]

    def _block_rank(self, n, key):
        """Rank of the differential out of degree n restricted to a block."""
        mat = self.diffs.get(n)
        if mat is None:
            return 0
        cols = self._block_columns(n, key)
        ech = Echelon()
        for j in cols:
            ech.add(mat.column(j))
        return ech.rank()


def homology_dims(c, n):
    """Homology dimensions of c at degree n, per (weight, length) block.

    Works for both conventions: the two differentials touching degree n are
    the one out of n and the one out of the neighbour that maps into n.
    """
    into = n + 1 if c.convention == "chain" else n - 1
    keys = {c.block_key(n, s) for s in c.slots.get(n, ())}
    out = {}
    for key in sorted(keys, key=lambda k: (k[0], k[1] if k[1] is not None else 0)):
        total = len(c._block_columns(n, key))
        dim = total - c._block_rank(n, key) - c._block_rank(into, key)
        assert dim >= 0, (n, key)
        if dim:
            weight, inv = key
            if c.has_lengths:
                if c.convention == "chain":
                    length = inv - c.length_shift * n
                else:
                    length = inv + c.length_shift * n
            else:
                length = None
            out[(weight, length)] = dim
    return out


def total_homology(c):
    """{degree: {(weight, length): dim}} over the support of c."""
    if not c.slots:
        return {}
    lo, hi = min(c.slots), max(c.slots)
    out = {}
    for n in range(lo, hi + 1):
        dims = homology_dims(c, n)
        if dims:
            out[n] = dims
    return out


def good_truncation(c, m):
    """Keep degrees < m, replace degree m by ker(d^m), kill degrees > m.

    Cochain only. Cohomology agrees with c in degrees <= m and vanishes
    above. The kernel is computed blockwise so the new slots keep honest
    weights and lengths, and the incoming differential is re-expressed in
    the kernel basis.
    """
    if c.convention != "cochain":
        raise ValueError("good truncation is a cochain operation")
    slots = {n: list(v) for n, v in c.slots.items() if n < m}
    diffs = {n: mat for n, mat in c.diffs.items() if n < m - 1}

    dm = c.diff(m)
    old_m = c.slots.get(m, ())
    kernel_slots = []
    kernel_columns = []      # vectors in the old degree-m coordinates
    keys = sorted({c.block_key(m, s) for s in old_m},
                  key=lambda k: (k[0], k[1] if k[1] is not None else 0))
    for key in keys:
        cols = c._block_columns(m, key)
        sub = Matrix.from_columns(dm.rows, [dm.column(j) for j in cols])
        ker = sub.kernel_basis()
        for b in range(ker.cols):
            vec = {cols[i]: v for i, v in ker.column(b).items()}
            weight, inv = key
            length = None
            if c.has_lengths:
                length = inv + c.length_shift * m
            kernel_slots.append(
                Slot(f"ker{m}_{len(kernel_slots)}", weight, length))
            kernel_columns.append(vec)
    if kernel_slots:
        slots[m] = kernel_slots

    prev = c.diffs.get(m - 1)
    if prev is not None and kernel_slots:
        ech = Echelon(track=True)
        for vec in kernel_columns:
            res = ech.add(dict(vec))
            assert res is None, "kernel basis must be independent"
        entries = {}
        for j in range(prev.cols):
            image = prev.column(j)
            coords = ech.coordinates(image)
            assert coords is not None, \
                "image of d must lie in ker(d) (d(d(x)) = 0)"
            for i, v in coords.items():
                entries[(i, j)] = v
        diffs[m - 1] = Matrix(len(kernel_slots), prev.cols, entries)
    return FiniteComplex("cochain", slots, diffs, length_shift=c.length_shift)
