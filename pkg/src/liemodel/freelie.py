"""Free graded Lie algebras on weighted generators.

Generators carry a homological degree (parity is degree mod 2), an integer
weight and a non-negative filtration level. Elements are formal sums of
bracket monomials; every question that needs linear algebra (independence,
coordinates, ranks of differentials) is answered on the expansion in the
tensor algebra, where

    [x, y]  =  x (x) y  -  (-1)^{|x||y|}  y (x) x

with the Koszul sign taken on parities. Words of the tensor algebra are
tuples of generator ids and double as sparse row keys, so no ambient word
space is ever enumerated.

Basis enumeration works blockwise per (degree, weight, bracket length).
For blocks whose letters are all of even parity the candidates are the
Lyndon words of the block with their standard factorization bracketing,
which is the classical basis; for blocks involving odd letters the
candidates are left-normed bracketings of every word of the block, which
is a spanning set in any characteristic-zero graded setting. Either way
independence is certified by exact rank over the rationals, never assumed,
and the surviving monomials are the block's ordered basis.
"""

import threading
from dataclasses import dataclass
from fractions import Fraction

from .linalg import Echelon, ONE


class UnboundedEnumerationError(ValueError):
    """A basis request whose bracket length cannot be bounded."""


class ResourceBoundExceeded(RuntimeError):
    """A block needed more candidate monomials than the configured cap."""


@dataclass(frozen=True)
class Generator:
    gid: str
    degree: int
    weight: int
    filtration: int = 0

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"generator {self.gid}: negative degree")
        if self.filtration < 0:
            raise ValueError(f"generator {self.gid}: negative filtration")

    @property
    def parity(self):
        return self.degree % 2


class GeneratorSet:
    """An immutable family of generators plus per-family caches.

    Caches (tree expansions, certified basis blocks) are keyed by tree or
    block and guarded by a lock with a single-writer-per-key contract:
    concurrent readers may race to compute the same value, but only one
    result is ever stored and all results are equal, so duplicated work is
    the only cost.
    """

    def __init__(self, generators):
        gens = {}
        for g in generators:
            if g.gid in gens:
                raise ValueError(f"duplicate generator id {g.gid!r}")
            gens[g.gid] = g
        self.gens = gens
        self.order = sorted(gens)
        self.fingerprint = tuple(
            (g.gid, g.degree, g.weight, g.filtration)
            for g in (gens[i] for i in self.order))
        self._tree_cache = {}
        self._block_cache = {}
        self._lock = threading.Lock()

    def __contains__(self, gid):
        return gid in self.gens

    def __getitem__(self, gid):
        return self.gens[gid]

    def tree_data(self, tree):
        """(degree, weight, length, filtration) of a bracket monomial."""
        hit = self._tree_cache.get(tree)
        if hit is not None:
            return hit
        if isinstance(tree, str):
            g = self.gens[tree]
            data = (g.degree, g.weight, 1, g.filtration)
        else:
            left, right = tree
            dl, wl, ll, fl = self.tree_data(left)
            dr, wr, lr, fr = self.tree_data(right)
            data = (dl + dr, wl + wr, ll + lr, fl + fr)
        with self._lock:
            self._tree_cache.setdefault(tree, data)
        return data

    def tree_parity(self, tree):
        return self.tree_data(tree)[0] % 2

    def expand_tree(self, tree):
        """Tensor expansion {word: coeff} of one bracket monomial."""
        key = ("exp", tree)
        hit = self._tree_cache.get(key)
        if hit is not None:
            return hit
        if isinstance(tree, str):
            out = {(tree,): ONE}
        else:
            left, right = tree
            el = self.expand_tree(left)
            er = self.expand_tree(right)
            sign = -ONE if (self.tree_parity(left) * self.tree_parity(right)) % 2 else ONE
            out = {}
            for wl, cl in el.items():
                for wr, cr in er.items():
                    c = cl * cr
                    k = wl + wr
                    v = out.get(k, 0) + c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
                    k = wr + wl
                    v = out.get(k, 0) - sign * c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        with self._lock:
            self._tree_cache.setdefault(key, out)
        return out


def tree_str(tree):
    if isinstance(tree, str):
        return tree
    return f"[{tree_str(tree[0])},{tree_str(tree[1])}]"


class LieElement:
    """A formal rational combination of bracket monomials.

    Monomials are nested 2-tuples over generator ids; no rewriting is done
    at the formal level. Equality, zero-ness and coordinates all go through
    the cached tensor expansion, which is exact.
    """

    __slots__ = ("gset", "terms", "_expansion")

    def __init__(self, gset, terms):
        self.gset = gset
        self.terms = {t: c for t, c in terms.items() if c}
        self._expansion = None

    @classmethod
    def zero(cls, gset):
        return cls(gset, {})

    @classmethod
    def generator(cls, gset, gid):
        if gid not in gset:
            raise KeyError(gid)
        return cls(gset, {gid: ONE})

    @classmethod
    def monomial(cls, gset, tree, coeff=ONE):
        return cls(gset, {tree: Fraction(coeff)})

    def is_formally_zero(self):
        return not self.terms

    def is_zero(self):
        return not self.expansion()

    def expansion(self):
        if self._expansion is None:
            out = {}
            for tree, coeff in self.terms.items():
                for word, c in self.gset.expand_tree(tree).items():
                    v = out.get(word, 0) + coeff * c
                    if v:
                        out[word] = v
                    else:
                        out.pop(word, None)
            self._expansion = out
        return self._expansion

    def __add__(self, other):
        assert self.gset is other.gset
        terms = dict(self.terms)
        for t, c in other.terms.items():
            v = terms.get(t, 0) + c
            if v:
                terms[t] = v
            else:
                terms.pop(t, None)
        return LieElement(self.gset, terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, coeff):
        coeff = Fraction(coeff)
        if not coeff:
            return LieElement.zero(self.gset)
        return LieElement(self.gset, {t: c * coeff for t, c in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, LieElement) and self.gset is other.gset
                and self.expansion() == other.expansion())

    def __hash__(self):
        return hash(frozenset(self.expansion().items()))

    def components(self):
        """Split into homogeneous parts, keyed (degree, weight, length)."""
        parts = {}
        for tree, coeff in self.terms.items():
            d, w, l, _ = self.gset.tree_data(tree)
            parts.setdefault((d, w, l), {})[tree] = coeff
        return {k: LieElement(self.gset, v) for k, v in sorted(parts.items())}

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for tree in sorted(self.terms, key=tree_str):
            c = self.terms[tree]
            bits.append(f"({c})*{tree_str(tree)}")
        return " + ".join(bits)


def bracket(x, y):
    """Graded bracket of two elements (formal pairing of monomials)."""
    assert x.gset is y.gset
    terms = {}
    for tx, cx in x.terms.items():
        for ty, cy in y.terms.items():
            tree = (tx, ty)
            v = terms.get(tree, 0) + cx * cy
            if v:
                terms[tree] = v
            else:
                terms.pop(tree, None)
    return LieElement(x.gset, terms)


def derivation_apply(gset, images, elt):
    """Extend a degree -1 map on generators to a graded derivation.

    images maps generator id -> LieElement (one degree lower, may be zero);
    on a bracket, d[x, y] = [dx, y] + (-1)^{|x|} [x, dy].
    """
    def on_tree(tree):
        if isinstance(tree, str):
            return images.get(tree) or LieElement.zero(gset)
        left, right = tree
        dl = on_tree(left)
        dr = on_tree(right)
        out = LieElement.zero(gset)
        if dl.terms:
            out = out + bracket(dl, LieElement(gset, {right: ONE}))
        if dr.terms:
            sign = -1 if gset.tree_parity(left) else 1
            out = out + bracket(LieElement(gset, {left: ONE}), dr).scale(sign)
        return out

    total = LieElement.zero(gset)
    for tree, coeff in elt.terms.items():
        total = total + on_tree(tree).scale(coeff)
    return total


def _is_lyndon(word):
    n = len(word)
    if n == 1:
        return True
    for i in range(1, n):
        if word >= word[i:] + word[:i]:
            return False
    return True


def _standard_bracketing(word):
    """Standard factorization bracketing of a Lyndon word."""
    if len(word) == 1:
        return word[0]
    # split before the longest proper suffix that is Lyndon
    for i in range(1, len(word)):
        if _is_lyndon(word[i:]):
            return (_standard_bracketing(word[:i]), _standard_bracketing(word[i:]))
    raise AssertionError(f"not a Lyndon word: {word}")


def _left_normed(word):
    tree = word[0]
    for gid in word[1:]:
        tree = (tree, gid)
    return tree


def _block_words(gset, degree, weight, length):
    """All words (tuples of gids, lex order) with the given exact sums.

    weight=None disables the weight constraint.
    """
    gids = gset.order
    if not gids or length < 1:
        return []
    degs = [gset[g].degree for g in gids]
    wts = [gset[g].weight for g in gids]
    dmin, dmax = min(degs), max(degs)
    wmin, wmax = min(wts), max(wts)
    out = []
    word = []

    def rec(k, dleft, wleft):
        if k == 0:
            if dleft == 0 and (wleft is None or wleft == 0):
                out.append(tuple(word))
            return
        if dleft < k * dmin or dleft > k * dmax:
            return
        if wleft is not None and (wleft < k * wmin or wleft > k * wmax):
            return
        for gid, d, w in zip(gids, degs, wts):
            word.append(gid)
            rec(k - 1, dleft - d, None if wleft is None else wleft - w)
            word.pop()

    rec(length, degree, weight)
    return out


class LieBasisBlock:
    """Certified ordered basis of one (degree, weight, length) component.

    monomials[i] is a bracket monomial tree; the expansions were fed to a
    tracking echelon in order, so coordinates() can express any element of
    the component in this basis.
    """

    def __init__(self, gset, key, monomials, echelon):
        self.gset = gset
        self.key = key
        self.monomials = monomials
        self._echelon = echelon

    @property
    def dim(self):
        return len(self.monomials)

    def elements(self):
        return [LieElement.monomial(self.gset, t) for t in self.monomials]

    def coordinates(self, elt):
        """Coordinates of a LieElement in this basis, or None if outside."""
        combo = self._echelon.coordinates(elt.expansion())
        if combo is None:
            return None
        coords = [Fraction(0)] * self.dim
        for idx, c in combo.items():
            coords[idx] = c
        return coords


def basis_block(gset, degree, weight, length, max_candidates=None):
    """Certified basis of the (degree, weight, length) component (memoized)."""
    key = (degree, weight, length)
    hit = gset._block_cache.get(key)
    if hit is not None:
        return hit
    words = _block_words(gset, degree, weight, length)
    if max_candidates is not None and len(words) > max_candidates:
        raise ResourceBoundExceeded(
            f"block {key}: {len(words)} candidate words exceed the cap "
            f"of {max_candidates}")
    letters = {g for w in words for g in w}
    all_even = all(gset[g].parity == 0 for g in letters)
    if all_even:
        candidates = [_standard_bracketing(w) for w in words if _is_lyndon(w)]
    else:
        candidates = [_left_normed(w) for w in words]
    ech = Echelon(track=True)
    monomials = []
    for tree in candidates:
        exp = gset.expand_tree(tree)
        if not exp:
            continue
        if ech.add(dict(exp)) is None:
            monomials.append(tree)
        else:
            # a dependent candidate: impossible for Lyndon bracketings on an
            # even alphabet, expected for the left-normed spanning set
            assert not all_even, f"Lyndon candidates dependent in block {key}"
    # rebuild the echelon over surviving monomials only, so coordinates are
    # indexed by basis position
    ech2 = Echelon(track=True)
    for tree in monomials:
        res = ech2.add(dict(gset.expand_tree(tree)))
        assert res is None
    block = LieBasisBlock(gset, key, monomials, ech2)
    with gset._lock:
        gset._block_cache.setdefault(key, block)
    return gset._block_cache[key]


def length_bound(gset, weight=None, degree=None, max_length=None):
    """A finite bracket-length bound for the requested component.

    Lengths are bounded by the degree when every generator has degree >= 1,
    and by |weight| when every generator has weight <= -1. If neither bound
    applies and no explicit max_length is given the request is unbounded.
    """
    bounds = []
    if max_length is not None:
        bounds.append(max_length)
    if degree is not None and all(g.degree >= 1 for g in gset.gens.values()):
        bounds.append(degree)
    if weight is not None and all(g.weight <= -1 for g in gset.gens.values()):
        bounds.append(-weight)
    if not bounds:
        raise UnboundedEnumerationError(
            "bracket length is unbounded here (degree-0 generators present "
            "and no length cap): pass an explicit max_length")
    return min(bounds)


def enumerate_basis(gset, degree, weight=None, max_length=None,
                    max_candidates=None):
    """Ordered basis of the degree component, optionally weight-restricted.

    Returns a list of LieElement monomials, grouped by increasing bracket
    length and deterministic within each block. Raises
    UnboundedEnumerationError when no finite length bound exists.
    """
    bound = length_bound(gset, weight=weight, degree=degree,
                         max_length=max_length)
    out = []
    for length in range(1, bound + 1):
        block = basis_block(gset, degree, weight, length,
                            max_candidates=max_candidates)
        out.extend(block.elements())
    return out
