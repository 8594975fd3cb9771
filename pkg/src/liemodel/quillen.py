"""Koszul-dual Lie model, homotopy ranks, cochain functor, round trip.

From a validated input (weight-graded algebra, or first page with its
differential) this module builds a differential graded Lie algebra that is
free on one generator per positive-degree class: a class of total degree
k >= 1 contributes a generator of homological degree k - 1, weight minus
the class weight, and filtration index q (0 in the formal case). The
differential has a linear part dual to the page differential and a
quadratic part dual to the product:

    d(v_t)  +=  c * v_x                    for each delta(x) = ... + c t + ...
    d(v_z)  +=  (1/2) (-1)^{|v_x|} c * [v_x, v_y]   for each x*y = ... + c z + ...

The overall signs of the two parts are conventions (each flips freely
without breaking d(d(v)) = 0, because the two parts shift bracket length
by 0 and +1 and their squares and cross terms vanish separately); the
quadratic sign above is fixed so that d(d(v)) = 0 holds, which the
constructor asserts exactly on every generator. That assertion is
equivalent to associativity plus graded commutativity of the input (plus
the Leibniz and square-zero axioms of the page differential), so it doubles
as an end-to-end consistency check.

Homotopy ranks: the rank of the degree-n homotopy group (n >= 2) per
weight is the homology of this Lie algebra in degree n - 1, computed in
independent (weight, length) blocks when the differential is purely
quadratic and in whole weight blocks otherwise. Degree 0 is reported as
lower-central-series ranks per bracket length: length truncation at L is
exact for every grade <= L because the length filtration is by ideals the
differential never lowers.

The cochain functor goes the other way: the free graded-commutative
algebra on dual cogenerators, one per Lie basis element, with the square
of its differential asserted to vanish. Running it on the Lie model of an
algebra and comparing cohomology dimensions against the input is the
round-trip self-test.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .freelie import (
    Generator, GeneratorSet, LieElement, bracket, derivation_apply,
    basis_block, tree_str, _block_words, ResourceBoundExceeded,
)
from .graded import FiniteComplex, Slot, homology_dims
from .inputs import InputError
from .linalg import Echelon, Matrix, ONE

DEFAULT_MAX_DEGREE = 6
DEFAULT_MAX_LENGTH = 8
DEFAULT_BLOCK_CAP = 200_000


class ConstructionError(ValueError):
    """An internal consistency assertion failed (d squared, filtration)."""


class DGLieAlgebra:
    """A free graded Lie algebra with a differential given on generators.

    The constructor validates, exactly and without truncation:
      - each image is homogeneous of degree one less and the same weight;
      - length-1 image terms raise the generator filtration index by
        exactly 1, longer terms preserve the summed filtration (the dual
        form of "d drops the level filtration by exactly one step");
      - d(d(v)) = 0 for every generator v, which extends to everything
        because the square of an odd derivation is a derivation.
    """

    def __init__(self, generators, images, max_degree, max_length,
                 source="anonymous", block_cap=DEFAULT_BLOCK_CAP):
        # accept a prebuilt GeneratorSet so the images (whose elements hold a
        # reference to it) and its basis caches stay attached
        if isinstance(generators, GeneratorSet):
            self.gset = generators
        else:
            self.gset = GeneratorSet(generators)
        self.images = {gid: img for gid, img in images.items()
                       if img is not None and img.terms}
        self.max_degree = max_degree
        self.max_length = max_length
        self.source = source
        self.block_cap = block_cap
        for gid in self.images:
            if gid not in self.gset:
                raise ConstructionError(f"differential on unknown generator {gid}")
        self._validate_shapes()
        self._validate_square_zero()
        self.is_quadratic = all(
            self.gset.tree_data(t)[2] == 2
            for img in self.images.values() for t in img.terms)

    def _validate_shapes(self):
        for gid, img in self.images.items():
            g = self.gset[gid]
            for tree, _ in img.terms.items():
                deg, wgt, length, filt = self.gset.tree_data(tree)
                if deg != g.degree - 1:
                    raise ConstructionError(
                        f"d({gid}) has a degree-{deg} term, want {g.degree - 1}")
                if wgt != g.weight:
                    raise ConstructionError(
                        f"d({gid}) has a weight-{wgt} term, want {g.weight}")
                if length == 1 and filt != g.filtration + 1:
                    raise ConstructionError(
                        f"d({gid}): linear term at filtration {filt}, "
                        f"want {g.filtration + 1}")
                if length >= 2 and filt != g.filtration:
                    raise ConstructionError(
                        f"d({gid}): bracket term at filtration {filt}, "
                        f"want {g.filtration}")

    def _validate_square_zero(self):
        for gid in sorted(self.gset.order):
            img = self.images.get(gid)
            if img is None:
                continue
            dd = derivation_apply(self.gset, self.images, img)
            if not dd.is_zero():
                raise ConstructionError(
                    f"d(d({gid})) != 0: {dd!r} (sign convention bug or "
                    f"inconsistent input)")

    def differential(self, elt):
        return derivation_apply(self.gset, self.images, elt)

    def image_of(self, gid):
        return self.images.get(gid) or LieElement.zero(self.gset)

    def generator(self, gid):
        return LieElement.generator(self.gset, gid)

    def block(self, degree, weight, length):
        return basis_block(self.gset, degree, weight, length,
                           max_candidates=self.block_cap)

    def has_degree_zero_generators(self):
        return any(g.degree == 0 for g in self.gset.gens.values())


def _facets(obj):
    """Uniform view of the two input kinds for the Lie construction."""
    if obj.kind == "algebra":
        return {
            "degree": lambda cid: obj.degree[cid],
            "filtration": lambda cid: 0,
            "delta": lambda cid: {},
        }
    return {
        "degree": obj.degree_of,
        "filtration": lambda cid: obj.bidegree[cid][1],
        "delta": obj.delta_of,
    }


# Deliberate fault injection for the selftest's negative control: with
# "cobar-sign" set, the quadratic term of the lexicographically first
# product entry gets the wrong sign, the kind of single-structure-constant
# slip the d(d(x)) = 0 assertion exists to catch.
FAULT_HOOKS = {}


def _cobar(obj, max_degree, max_length, require_simply_connected, block_cap):
    facets = _facets(obj)
    gens = []
    for cid in obj.positive_ids():
        k = facets["degree"](cid)
        if k == 1 and require_simply_connected:
            raise InputError(
                f"simply-connected-only mode: class {cid} has total degree 1")
        gens.append(Generator(cid, degree=k - 1, weight=-obj.weight[cid],
                              filtration=facets["filtration"](cid)))
    gset = GeneratorSet(gens)
    images = {cid: LieElement.zero(gset) for cid in obj.positive_ids()}
    # linear part: dual of the page differential
    for cid in obj.positive_ids():
        for target, c in facets["delta"](cid).items():
            images[target] = (images[target]
                              + LieElement.generator(gset, cid).scale(c))
    # quadratic part: dual of the product
    fault_key = None
    if FAULT_HOOKS.get("cobar-sign") and obj._products.table:
        fault_key = min(obj._products.table)
    for (x, y), entry in obj._products.table.items():
        vx = LieElement.generator(gset, x)
        vy = LieElement.generator(gset, y)
        sign = -1 if (facets["degree"](x) - 1) % 2 else 1
        if (x, y) == fault_key:
            sign = -sign
        for z, c in entry.items():
            images[z] = images[z] + bracket(vx, vy).scale(
                Fraction(sign * c, 2))
    return DGLieAlgebra(gset, images, max_degree, max_length,
                        source=obj.name, block_cap=block_cap)


def cobar_dgla(algebra, max_degree=DEFAULT_MAX_DEGREE,
               max_length=DEFAULT_MAX_LENGTH,
               require_simply_connected=False,
               block_cap=DEFAULT_BLOCK_CAP):
    """The Lie model of a weight-graded algebra (purely quadratic d)."""
    if algebra.kind != "algebra":
        raise InputError("cobar_dgla wants an algebra; use cobar_dgla_e1")
    return _cobar(algebra, max_degree, max_length,
                  require_simply_connected, block_cap)


def cobar_dgla_e1(page, max_degree=DEFAULT_MAX_DEGREE,
                  max_length=DEFAULT_MAX_LENGTH,
                  require_simply_connected=False,
                  block_cap=DEFAULT_BLOCK_CAP):
    """The Lie model of a first page (linear + quadratic d)."""
    if page.kind != "e1":
        raise InputError("cobar_dgla_e1 wants a first page")
    return _cobar(page, max_degree, max_length,
                  require_simply_connected, block_cap)


@dataclass
class HomotopyReport:
    """Homotopy ranks per weight, with truncation provenance.

    pi[n][weight] is the rank of the degree-n group (n >= 2) in that
    weight; pi_detail[n][(weight, length)] refines it by bracket length
    when the differential is purely quadratic (length is None otherwise).
    pi1[length][weight] is the rank of the length-graded piece of the
    degree-1 group's associated graded Lie algebra.
    """

    source: str
    kind: str
    max_degree: int
    max_length: int
    pi: dict = field(default_factory=dict)
    pi_detail: dict = field(default_factory=dict)
    pi1: dict = field(default_factory=dict)
    simply_connected: bool = True
    mixedness: object = None
    # (degree, weight) pairs whose ranks the truncation could not certify
    # and which are therefore withheld from pi (mixed-length differentials
    # only; they may well be zero)
    uncertified: list = field(default_factory=list)

    def rank(self, n):
        return sum(self.pi.get(n, {}).values())

    def pi1_rank(self, length):
        return sum(self.pi1.get(length, {}).values())

    def to_document(self):
        doc = {
            "source": self.source, "kind": self.kind,
            "max_degree": self.max_degree, "max_length": self.max_length,
            "simply_connected": self.simply_connected,
            "pi": {str(n): {str(w): r for w, r in sorted(ws.items())}
                   for n, ws in sorted(self.pi.items())},
            "pi1": {str(l): {str(w): r for w, r in sorted(ws.items())}
                    for l, ws in sorted(self.pi1.items())},
            "uncertified": [list(t) for t in sorted(self.uncertified)],
        }
        if self.mixedness is not None:
            doc["mixed"] = self.mixedness.mixed
            doc["violations"] = [list(v) for v in self.mixedness.violations]
        return doc


def _discover_blocks(dgla):
    """{weight: {(degree, length): basis block}} within the truncation."""
    gset = dgla.gset
    all_positive = all(g.degree >= 1 for g in gset.gens.values())
    out = {}
    for m in range(0, dgla.max_degree + 1):
        if m == 0 and all_positive:
            continue
        cap = min(dgla.max_length, m) if all_positive else dgla.max_length
        for length in range(1, cap + 1):
            words = _block_words(gset, m, None, length)
            if dgla.block_cap is not None and len(words) > dgla.block_cap:
                raise ResourceBoundExceeded(
                    f"degree {m} length {length}: {len(words)} words exceed "
                    f"the block cap {dgla.block_cap}")
            weights = sorted({sum(gset[g].weight for g in w) for w in words})
            for w in weights:
                block = dgla.block(m, w, length)
                if block.dim:
                    out.setdefault(w, {})[(m, length)] = block
    return out


def _weight_complex(dgla, weight, blocks):
    """The chain complex of one weight block, truncated in length at L.

    Returns (complex, cut_degrees). cut_degrees collects the degrees
    whose elements lost differential components beyond the length cap:
    elements there can masquerade as cycles, so their homology cannot
    be certified at this truncation.
    """
    has_lengths = dgla.is_quadratic
    slots = {}
    layout = {}
    for (m, length), block in sorted(blocks.items()):
        for j, tree in enumerate(block.monomials):
            layout[(m, length, j)] = len(slots.setdefault(m, []))
            slots[m].append(Slot(tree_str(tree), weight,
                                 length if has_lengths else None))
    diffs = {}
    cut_degrees = set()
    for (m, length), block in sorted(blocks.items()):
        if m == 0:
            continue
        entries = diffs.setdefault(m, {})
        for j, elt in enumerate(block.elements()):
            col = layout[(m, length, j)]
            img = dgla.differential(elt)
            for (dd, ww, ll), comp in img.components().items():
                if comp.is_zero():
                    # formally present trees can expand to zero (their
                    # block may well have dimension 0 and no slots)
                    continue
                assert dd == m - 1 and ww == weight, (dd, ww, m, weight)
                target = blocks.get((m - 1, ll))
                if target is None:
                    # only the length cap may truncate a nonzero component
                    assert ll > dgla.max_length, (m - 1, weight, ll)
                    cut_degrees.add(m)
                    continue
                coords = target.coordinates(comp)
                assert coords is not None, "component outside its block"
                for i, v in enumerate(coords):
                    if v:
                        entries[(layout[(m - 1, ll, i)], col)] = v
    matrices = {}
    for m, entries in diffs.items():
        if entries:
            matrices[m] = Matrix(len(slots.get(m - 1, ())),
                                 len(slots.get(m, ())), entries)
    return (FiniteComplex("chain", slots, matrices,
                          length_shift=1 if has_lengths else 0),
            cut_degrees)


def _pi1_grades(dgla, weight, blocks):
    """Length-graded ranks of H_0 in one weight, exact for lengths <= L.

    H_0 is the degree-0 part modulo the image of d, which is an ideal
    because everything in degree 0 is a cycle. The associated graded of
    the lower central series has gr_l = (F_l + I)/(F_{l+1} + I) with F the
    bracket-length filtration, so one echelon fed the image first and then
    the degree-0 monomials by decreasing length reads off every grade.
    """
    ech = Echelon()
    for (m, length), block in sorted(blocks.items()):
        if m != 1:
            continue
        for elt in block.elements():
            img = dgla.differential(elt)
            vec = {}
            for (dd, ww, ll), comp in img.components().items():
                if ll > dgla.max_length:
                    continue
                for word, c in comp.expansion().items():
                    vec[word] = vec.get(word, 0) + c
            if vec:
                ech.add(vec)
    grades = {}
    prev = ech.rank()
    zero_lengths = sorted((l for (m, l) in blocks if m == 0), reverse=True)
    for length in zero_lengths:
        for elt in blocks[(0, length)].elements():
            ech.add(dict(elt.expansion()))
        grades[length] = ech.rank() - prev
        prev = ech.rank()
    return {l: g for l, g in grades.items() if g}


def dgla_homotopy_report(dgla, kind="algebra"):
    """Assemble the homotopy report of a constructed Lie model.

    Everything reported is exact at the stated truncation. The length
    cap can cut the differential out of a block (its image would need
    words longer than L), and elements there can masquerade as cycles.
    Each weight complex tracks exactly which degrees were cut. With a
    purely quadratic differential the homology is graded by bracket
    length and only the top-length classes of a cut degree are affected,
    so exactly those are dropped; all other (length, degree) blocks see
    their full differential and are certified. When the differential
    mixes lengths the grading is unavailable, so the whole (degree,
    weight) entry is withheld and recorded in report.uncertified
    instead of risking an over-report.
    """
    report = HomotopyReport(
        source=dgla.source, kind=kind,
        max_degree=dgla.max_degree, max_length=dgla.max_length,
        simply_connected=not dgla.has_degree_zero_generators())
    by_weight = _discover_blocks(dgla)
    for weight, blocks in sorted(by_weight.items()):
        if any(m >= 1 for (m, _) in blocks):
            c, cut_degrees = _weight_complex(dgla, weight, blocks)
            for n in range(2, dgla.max_degree + 1):
                if not dgla.is_quadratic and (n - 1) in cut_degrees:
                    report.uncertified.append((n, weight))
                    continue
                for (w, length), dim in homology_dims(c, n - 1).items():
                    assert w == weight
                    if length == dgla.max_length and (n - 1) in cut_degrees:
                        continue
                    ranks = report.pi.setdefault(n, {})
                    ranks[w] = ranks.get(w, 0) + dim
                    detail = report.pi_detail.setdefault(n, {})
                    key = (w, length)
                    detail[key] = detail.get(key, 0) + dim
        if any(m == 0 for (m, _) in blocks):
            for length, rank in _pi1_grades(dgla, weight, blocks).items():
                report.pi1.setdefault(length, {})[weight] = rank
    for n in range(2, dgla.max_degree + 1):
        report.pi.setdefault(n, {})
    report.uncertified.sort()
    return report


def homotopy_groups(input_obj, max_degree=DEFAULT_MAX_DEGREE,
                    max_length=DEFAULT_MAX_LENGTH,
                    require_simply_connected=False,
                    block_cap=DEFAULT_BLOCK_CAP):
    """Homotopy ranks per weight for either input kind."""
    if input_obj.kind == "algebra":
        dgla = cobar_dgla(input_obj, max_degree, max_length,
                          require_simply_connected, block_cap)
    else:
        dgla = cobar_dgla_e1(input_obj, max_degree, max_length,
                             require_simply_connected, block_cap)
    return dgla_homotopy_report(dgla, kind=input_obj.kind)


# ---------------------------------------------------------------------------
# the cochain functor and the round trip

@dataclass(frozen=True)
class CESigns:
    """Sign convention for the cochain differential, as parity exponents.

    linear term on a cogenerator dual to f:   (-1)^(a |f| + b)
    quadratic term dual to [f, g]:            (-1)^(p |f| + q |g| + r |f||g| + s)

    with |f| the homological degree of the Lie basis element. The defaults
    below were found by exhaustive search over all 64 parity patterns,
    requiring the squared differential to vanish on a battery of models
    with odd and even generators and with and without linear terms; the
    battery is re-asserted by the construction itself on every run.
    """
    a: int
    b: int
    p: int
    q: int
    r: int
    s: int

    def linear(self, fdeg):
        return -1 if (self.a * fdeg + self.b) % 2 else 1

    def quadratic(self, fdeg, gdeg):
        e = self.p * fdeg + self.q * gdeg + self.r * fdeg * gdeg + self.s
        return -1 if e % 2 else 1


# derived by tools/derive_ce_signs.py: of the 64 parity patterns exactly
# eight pass the battery, the orbit of two genuine conventions under the
# two unconstrained global flips; this is the lexicographically first
DEFAULT_CE_SIGNS = CESigns(a=0, b=0, p=1, q=0, r=0, s=0)


class CEComplex:
    """The cochain algebra of a Lie model, as a validated finite complex.

    xi[i] is the i-th cogenerator: a dict with the Lie basis monomial, its
    cohomological degree (Lie degree + 1) and weight (minus the Lie
    weight). Monomials are sorted tuples of cogenerator indices; slots of
    the underlying complex are labelled by them. Cohomology dimensions per
    (degree, weight) come from graded.homology_dims.
    """

    def __init__(self, complex_, xi, monomials):
        self.complex = complex_
        self.xi = xi
        self.monomials = monomials

    def cohomology(self, n):
        return homology_dims(self.complex, n)


def _xi_parity(xi_entry):
    return xi_entry["ce_degree"] % 2


def _normalize_monomial(xi, indices):
    """Sort cogenerator indices, tracking the Koszul sign; 0 on odd squares."""
    seq = list(indices)
    sign = 1
    # insertion sort; stable, counts parity-weighted transpositions
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            if _xi_parity(xi[seq[j - 1]]) and _xi_parity(xi[seq[j]]):
                sign = -sign
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            j -= 1
    for a, b in zip(seq, seq[1:]):
        if a == b and _xi_parity(xi[a]):
            return 0, None
    return sign, tuple(seq)


def chevalley_eilenberg(dgla, max_degree, signs=None, abelian=False):
    """Free graded-commutative cochains on the dual of the Lie model.

    Builds all monomials of cohomological degree <= max_degree + 2 and the
    differential out of degrees <= max_degree + 1, so cohomology is
    available through degree max_degree and the square-zero identity is
    asserted matrix-wise across the whole window. Requires a
    simply-connected model (no degree-0 Lie generators), where every
    component is finite.

    abelian=True reads the generators as spanning an abelian Lie algebra
    instead of a free one: cogenerators come only from the generators
    themselves and the bracket dual is dropped. That requires every
    differential image to be linear (a bracket image would contradict
    abelianness).
    """
    if signs is None:
        signs = DEFAULT_CE_SIGNS
    if dgla.has_degree_zero_generators():
        raise InputError(
            "cochain functor needs a simply-connected model: degree-0 Lie "
            "generators span components that are not finite degree-wise")
    if abelian:
        for gid, img in dgla.images.items():
            for tree in img.terms:
                if dgla.gset.tree_data(tree)[2] != 1:
                    raise InputError(
                        f"abelian cochains: d({gid}) has a bracket term")
    gset = dgla.gset
    top = max_degree + 2
    lie_top = top - 1          # cogenerator of degree n+1 needs Lie degree n

    xi = []
    position = {}              # (degree, weight, length, j) -> xi index
    by_block = {}
    for m in range(1, lie_top + 1):
        for length in ((1,) if abelian else range(1, m + 1)):
            words = _block_words(gset, m, None, length)
            if dgla.block_cap is not None and len(words) > dgla.block_cap:
                raise ResourceBoundExceeded(
                    f"cochain functor: degree {m} length {length}: "
                    f"{len(words)} words exceed the cap")
            for w in sorted({sum(gset[g].weight for g in word)
                             for word in words}):
                block = dgla.block(m, w, length)
                for j, tree in enumerate(block.monomials):
                    position[(m, w, length, j)] = len(xi)
                    xi.append({
                        "tree": tree, "lie_degree": m, "lie_weight": w,
                        "length": length, "ce_degree": m + 1, "weight": -w,
                        "label": "x(" + tree_str(tree) + ")",
                    })
                by_block[(m, w, length)] = block

    def coords_of(elt):
        """Coordinates of a homogeneous Lie element in the xi list."""
        out = {}
        for (m, w, length), comp in elt.components().items():
            block = by_block.get((m, w, length))
            assert block is not None, (m, w, length)
            coords = block.coordinates(comp)
            assert coords is not None
            for j, c in enumerate(coords):
                if c:
                    out[position[(m, w, length, j)]] = c
        return out

    # differential on cogenerators: for every Lie basis element f, d(f)
    # spreads over duals of its coordinates; brackets [f, g] likewise
    d_xi = {i: {} for i in range(len(xi))}     # i -> {monomial: coeff}

    def add_term(i, mono, coeff):
        if not coeff:
            return
        table = d_xi[i]
        v = table.get(mono, 0) + coeff
        if v:
            table[mono] = v
        else:
            table.pop(mono, None)

    for fi, entry in enumerate(xi):
        f_elt = LieElement.monomial(gset, entry["tree"])
        df = dgla.differential(f_elt)
        if df.terms:
            sign = signs.linear(entry["lie_degree"])
            for ei, c in coords_of(df).items():
                add_term(ei, (fi,), sign * c)
    for fi, fentry in enumerate(xi):
        if abelian:
            break
        f_elt = LieElement.monomial(gset, fentry["tree"])
        for gi in range(fi, len(xi)):
            gentry = xi[gi]
            if fentry["ce_degree"] + gentry["ce_degree"] > top + 1:
                continue
            g_elt = LieElement.monomial(gset, gentry["tree"])
            br = bracket(f_elt, g_elt)
            if not br.expansion():
                continue
            sign = signs.quadratic(fentry["lie_degree"], gentry["lie_degree"])
            half = Fraction(1, 2) if fi == gi else Fraction(1)
            norm_sign, mono = _normalize_monomial(xi, (fi, gi))
            if norm_sign == 0:
                continue
            for ei, c in coords_of(br).items():
                add_term(ei, mono, sign * half * norm_sign * c)

    # enumerate monomials per degree (cogenerator degrees are all >= 2)
    order = sorted(range(len(xi)), key=lambda i: (xi[i]["ce_degree"], i))
    monomials = {0: [()]}
    def extend(prefix, start, degree):
        for pos in range(start, len(order)):
            i = order[pos]
            d = xi[i]["ce_degree"]
            if degree + d > top:
                continue
            if _xi_parity(xi[i]) and prefix and prefix[-1] == i:
                continue
            nxt = prefix + (i,)
            monomials.setdefault(degree + d, []).append(nxt)
            extend(nxt, pos, degree + d)
    extend((), 0, 0)

    index_of = {}
    slots = {}
    for n in sorted(monomials):
        monomials[n].sort()
        for mono in monomials[n]:
            index_of[mono] = len(slots.setdefault(n, []))
            weight = sum(xi[i]["weight"] for i in mono)
            label = "1" if not mono else "*".join(xi[i]["label"] for i in mono)
            slots[n].append(Slot(label, weight, None))

    diffs = {}
    for n in sorted(monomials):
        if n > max_degree + 1:
            continue
        entries = {}
        for col, mono in enumerate(monomials[n]):
            image = {}
            prefix_parity = 0
            for t, i in enumerate(mono):
                outer = -1 if prefix_parity % 2 else 1
                for dmono, c in d_xi[i].items():
                    pieces = mono[:t] + dmono + mono[t + 1:]
                    nsign, normed = _normalize_monomial(xi, pieces)
                    if nsign == 0:
                        continue
                    v = image.get(normed, 0) + outer * nsign * c
                    if v:
                        image[normed] = v
                    else:
                        image.pop(normed, None)
                prefix_parity += _xi_parity(xi[i])
            for target, c in image.items():
                assert target in index_of, target
                entries[(index_of[target], col)] = c
        if entries:
            diffs[n] = Matrix(len(slots.get(n + 1, ())),
                              len(slots.get(n, ())), entries)

    try:
        complex_ = FiniteComplex("cochain", slots, diffs)
    except ValueError as exc:
        raise ConstructionError(f"cochain differential broken: {exc}") from None
    return CEComplex(complex_, xi, monomials)


@dataclass
class RoundtripVerdict:
    match: bool
    diffs: dict               # degree -> (got {weight: dim}, want {weight: dim})
    reason: str = None

    def __bool__(self):
        return self.match


def roundtrip_check(algebra, max_degree=DEFAULT_MAX_DEGREE,
                    block_cap=DEFAULT_BLOCK_CAP):
    """Compare cochains-of-the-Lie-model against the input algebra.

    For any valid simply-connected input the graded dimensions per
    (degree, weight) must agree through max_degree. Construction failures
    (the d squared or square-zero assertions tripping on a corrupted
    input) are reported as a non-match with the reason, not raised, since
    detecting them is this check's purpose.
    """
    if algebra.kind != "algebra":
        raise InputError("round trip is defined for algebra inputs")
    if any(d == 1 for d in algebra.degree.values()):
        raise InputError("round trip needs a simply-connected input "
                         "(no degree-1 classes)")
    try:
        dgla = cobar_dgla(algebra, max_degree=max_degree,
                          max_length=max_degree + 1, block_cap=block_cap)
        ce = chevalley_eilenberg(dgla, max_degree)
    except (ConstructionError, InputError, ResourceBoundExceeded,
            AssertionError, ValueError) as exc:
        return RoundtripVerdict(False, {}, reason=f"construction failed: {exc}")
    want = {}
    for cid, deg in algebra.degree.items():
        if deg <= max_degree:
            want.setdefault(deg, {})
            w = algebra.weight[cid]
            want[deg][w] = want[deg].get(w, 0) + 1
    diffs = {}
    for n in range(0, max_degree + 1):
        got = {w: dim for (w, _), dim in ce.cohomology(n).items()}
        expected = want.get(n, {})
        if got != expected:
            diffs[n] = (got, expected)
    return RoundtripVerdict(not diffs, diffs)
