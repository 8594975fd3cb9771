"""Filtered cochain complexes: minimal models and the weight certificate.

A filtered complex here is a non-negatively graded cochain complex with an
exhaustive non-negative filtration J, given by an integer index per basis
vector: J_m is the span of the vectors with index <= m, and the
differential must preserve every J_m. In matrix terms each entry of d maps
a column to a row of index at most the column's. The complex is minimal
when the inequality is strict, d(J_m) contained in J_{m-1}; then the
induced differential on every graded piece gr_m = J_m/J_{m-1} vanishes.

Any filtered complex contains a minimal one computing the same graded
cohomology. The construction is an induction on the filtration level: a
basis of H^*(gr_m) lifts to vectors supported on the level-m slots whose
differential lands in J_{m-1}; because the partial model already built is
a graded quasi-isomorphic subcomplex of J_{m-1}, that differential is, up
to a boundary d(u) with u of lower level, a combination of model vectors,
and subtracting u from the lift closes the model under d. All choices
(graded cohomology representatives, the correcting u) are made by
first-available pivoting in the fixed basis order, so the output is
reproducible; feeding the partial model's vectors to the solver before the
boundary columns makes an already-minimal complex its own model on the
nose, which gives idempotence.

The filtration's first page has dimensions E1^(a,b) = H^(a+b)(gr_{-a}),
nonzero only for a <= 0 here since levels are non-negative. The minimal
model preserves the whole table; that equality is asserted level by level
at construction time rather than trusted.

The module also issues the weight certificate for homotopy reports: for a
smooth projective input with pure cohomology, the degree-n homotopy group
must sit in weights [-2(n-1), -n] and the length-l graded piece of the
fundamental group in [-2l, -l]. The verdict lists every component outside
its declared window; an empty list certifies the report as mixed in the
intended sense, with integer weights in the allowed range.
"""

from dataclasses import dataclass, field

from .graded import FiniteComplex, Slot, total_homology
from .inputs import InputError, _coefficient
from .linalg import Echelon, Matrix, ZERO, format_scalar


class FilteredComplex:
    """A cochain FiniteComplex plus a filtration index per basis vector."""

    def __init__(self, complex_, filtration, source="anonymous"):
        if complex_.convention != "cochain":
            raise InputError("filtered complexes use the cochain convention")
        self.complex = complex_
        self.source = source
        self.filtration = {}
        for n in complex_.degrees():
            idx = list(filtration.get(n, ()))
            if len(idx) != complex_.dim(n):
                raise InputError(
                    f"degree {n}: {len(idx)} filtration indices for "
                    f"{complex_.dim(n)} basis vectors")
            for q in idx:
                if not isinstance(q, int) or isinstance(q, bool) or q < 0:
                    raise InputError(
                        f"degree {n}: filtration index {q!r} "
                        "(want a non-negative integer)")
            self.filtration[n] = idx
        for n, idx in filtration.items():
            if idx and n not in self.filtration:
                raise InputError(f"filtration indices for empty degree {n}")
        self._validate_preserved()

    def _validate_preserved(self):
        for n, mat in self.complex.diffs.items():
            src = self.filtration[n]
            dst = self.filtration[n + 1]
            for (i, j) in mat.entries:
                if dst[i] > src[j]:
                    raise InputError(
                        f"differential raises the filtration at degree {n}: "
                        f"column {j} (index {src[j]}) hits row {i} "
                        f"(index {dst[i]})")

    def degrees(self):
        return self.complex.degrees()

    def dim(self, n):
        return self.complex.dim(n)

    def total_dim(self):
        return sum(self.complex.dim(n) for n in self.degrees())

    def levels(self):
        return sorted({q for idx in self.filtration.values() for q in idx})

    def level_dims(self):
        """{(degree, level): count} over the basis."""
        out = {}
        for n, idx in self.filtration.items():
            for q in idx:
                out[(n, q)] = out.get((n, q), 0) + 1
        return out

    def is_minimal(self):
        """Literal matrix check that d drops the filtration index."""
        for n, mat in self.complex.diffs.items():
            src = self.filtration[n]
            dst = self.filtration[n + 1]
            for (i, j) in mat.entries:
                if dst[i] >= src[j]:
                    return False
        return True

    def graded_piece(self, m):
        """gr_m = J_m/J_{m-1} as a FiniteComplex.

        Keeps the level-m slots and the differential entries between them;
        entries into lower levels die in the quotient, and entries into
        higher levels cannot exist since d preserves the filtration.
        """
        pick = {}
        slots = {}
        for n in self.degrees():
            keep = [j for j, q in enumerate(self.filtration[n]) if q == m]
            if keep:
                pick[n] = keep
                slots[n] = [self.complex.slots[n][j] for j in keep]
        diffs = {}
        for n, js in pick.items():
            mat = self.complex.diffs.get(n)
            ks = pick.get(n + 1)
            if mat is None or not ks:
                continue
            row_of = {old: new for new, old in enumerate(ks)}
            col_of = {old: new for new, old in enumerate(js)}
            entries = {}
            for (i, j), c in mat.entries.items():
                if i in row_of and j in col_of:
                    entries[(row_of[i], col_of[j])] = c
            if entries:
                diffs[n] = Matrix(len(ks), len(js), entries)
        return FiniteComplex("cochain", slots, diffs,
                             length_shift=self.complex.length_shift)


def one_term_complex(n, level, weight=0, source=None):
    """A single basis vector in degree n at the given filtration level."""
    cx = FiniteComplex("cochain", {n: [Slot(f"s{n}", weight)]}, {})
    return FilteredComplex(cx, {n: [level]},
                           source=source or f"one-term({n},{level})")


def contractible_pair(n, level, weight=0, source=None):
    """Basis vectors in degrees n-1 and n, differential the identity, both
    at the given level. The degree-0 case is the zero complex by
    convention (there is no degree -1 to pair with)."""
    source = source or f"pair({n},{level})"
    if n == 0:
        return FilteredComplex(FiniteComplex("cochain", {}, {}), {},
                               source=source)
    slots = {n - 1: [Slot(f"p{n}a", weight)], n: [Slot(f"p{n}b", weight)]}
    diffs = {n - 1: Matrix(1, 1, {(0, 0): 1})}
    return FilteredComplex(FiniteComplex("cochain", slots, diffs),
                           {n - 1: [level], n: [level]}, source=source)


def direct_sum(a, b, source=None):
    """Block sum of two filtered complexes; a's basis first in each degree."""
    assert a.complex.length_shift == b.complex.length_shift
    slots = {}
    filt = {}
    for n in sorted(set(a.degrees()) | set(b.degrees())):
        slots[n] = (list(a.complex.slots.get(n, ())) +
                    list(b.complex.slots.get(n, ())))
        filt[n] = (list(a.filtration.get(n, ())) +
                   list(b.filtration.get(n, ())))
    diffs = {}
    for n in sorted(set(a.complex.diffs) | set(b.complex.diffs)):
        entries = {}
        mat = a.complex.diffs.get(n)
        if mat is not None:
            entries.update(mat.entries)
        mat = b.complex.diffs.get(n)
        if mat is not None:
            roff, coff = a.dim(n + 1), a.dim(n)
            for (i, j), c in mat.entries.items():
                entries[(i + roff, j + coff)] = c
        diffs[n] = Matrix(len(slots.get(n + 1, ())), len(slots[n]), entries)
    cx = FiniteComplex("cochain", slots, diffs,
                       length_shift=a.complex.length_shift)
    return FilteredComplex(cx, filt,
                           source=source or f"{a.source}+{b.source}")


def e1_spectral_dims(fc):
    """First-page dimensions {(a, b): dim} with E1^(a,b) = H^(a+b)(gr_{-a}).

    Levels are non-negative, so a = -level <= 0 and a + b is the
    cohomological degree.
    """
    out = {}
    for m in fc.levels():
        for n, blocks in total_homology(fc.graded_piece(m)).items():
            dim = sum(blocks.values())
            if dim:
                out[(-m, n + m)] = dim
    return out


def _graded_cocycle_basis(fc, n, m, cols_m):
    """Vectors in degree-n coordinates, supported on the level-m slots,
    whose classes form a basis of H^n(gr_m). Deterministic: kernel vectors
    of the graded differential in column order, kept when independent of
    the graded boundaries from below."""
    cx = fc.complex
    dmat = cx.diff(n)
    rows_m = [i for i, q in enumerate(fc.filtration.get(n + 1, ()))
              if q == m]
    row_of = {i: a for a, i in enumerate(rows_m)}
    sub = Matrix.from_columns(len(rows_m), [
        {row_of[i]: c for i, c in dmat.column(j).items() if i in row_of}
        for j in cols_m])
    kernel = sub.kernel_basis()

    boundaries = Echelon()
    if n >= 1:
        keep = set(cols_m)
        prev = cx.diff(n - 1)
        for j, q in enumerate(fc.filtration.get(n - 1, ())):
            if q == m:
                col = prev.column(j)
                boundaries.add({i: c for i, c in col.items() if i in keep})

    reps = []
    for b in range(kernel.cols):
        vec = {cols_m[a]: c for a, c in kernel.column(b).items()}
        if boundaries.add(dict(vec)) is None:
            reps.append(vec)
    return reps


def _correction_solver(fc, chosen, n, m):
    """Tracked echelon of everything allowed to absorb d of a level-m lift
    in degree n: the partial model's degree-(n+1) vectors of lower level
    first (a lift whose differential already lies in the model then needs
    no correction, which is what makes the construction idempotent), then
    d of the degree-n basis vectors of lower level."""
    ech = Echelon(track=True)
    model_pos = {}
    basis_col = {}
    idx = 0
    for pos, (lvl, vec) in enumerate(chosen.get(n + 1, ())):
        if lvl < m:
            ech.add(dict(vec))
            model_pos[idx] = pos
            idx += 1
    dmat = fc.complex.diff(n)
    for j, q in enumerate(fc.filtration.get(n, ())):
        if q < m:
            ech.add(dmat.column(j))
            basis_col[idx] = j
            idx += 1
    return ech, model_pos, basis_col


@dataclass
class MinimalModel:
    """A minimal filtered subcomplex plus its inclusion, one matrix per
    degree with columns the model vectors in the ambient coordinates."""

    model: object
    inclusion: dict = field(default_factory=dict)


def minimal_model(v):
    """Extract a minimal filtered subcomplex with the same first page.

    Induction on the filtration level, as described in the module
    docstring. The result is literally minimal on matrices, the inclusion
    is verified to be a filtered chain map, and the graded cohomology of
    every level is recomputed on both sides and compared.
    """
    cx = v.complex
    chosen = {n: [] for n in cx.degrees()}
    dcols = {}
    for m in v.levels():
        for n in cx.degrees():
            cols_m = [j for j, q in enumerate(v.filtration[n]) if q == m]
            if not cols_m:
                continue
            reps = _graded_cocycle_basis(v, n, m, cols_m)
            if not reps:
                continue
            ech, model_pos, basis_col = _correction_solver(v, chosen, n, m)
            dmat = cx.diff(n)
            for z in reps:
                coords = ech.coordinates(dmat.apply(z))
                assert coords is not None, (
                    "differential of a graded cocycle lift is not exact "
                    "against the partial model (induction broken)")
                vec = dict(z)
                dcol = {}
                for k, c in coords.items():
                    if k in model_pos:
                        dcol[model_pos[k]] = c
                    else:
                        j = basis_col[k]
                        left = vec.get(j, ZERO) - c
                        if left:
                            vec[j] = left
                        else:
                            vec.pop(j, None)
                chosen[n].append((m, vec))
                dcols.setdefault(n, {})[len(chosen[n]) - 1] = dcol

    slots = {}
    filt = {}
    inclusion = {}
    for n in cx.degrees():
        vecs = chosen[n]
        inclusion[n] = Matrix.from_columns(cx.dim(n),
                                           [vec for _, vec in vecs])
        if not vecs:
            continue
        made = []
        for k, (lvl, vec) in enumerate(vecs):
            support = sorted(vec)
            first = cx.slots[n][support[0]]
            assert all(cx.slots[n][i].weight == first.weight
                       and cx.slots[n][i].length == first.length
                       for i in support), "model vector mixes blocks"
            made.append(Slot(f"m{n}_{k}", first.weight, first.length))
        slots[n] = made
        filt[n] = [lvl for lvl, _ in vecs]
    diffs = {}
    for n, cols in dcols.items():
        entries = {}
        for c_idx, col in cols.items():
            for r_idx, c in col.items():
                if c:
                    entries[(r_idx, c_idx)] = c
        if entries:
            diffs[n] = Matrix(len(chosen[n + 1]), len(chosen[n]), entries)
    model_cx = FiniteComplex("cochain", slots, diffs,
                             length_shift=cx.length_shift)
    model = FilteredComplex(model_cx, filt, source=f"minimal({v.source})")
    assert model.is_minimal(), \
        "construction left a level-preserving differential entry"

    for n in cx.degrees():
        into_next = inclusion.get(n + 1, Matrix.zero(cx.dim(n + 1), 0))
        assert cx.diff(n) @ inclusion[n] == into_next @ model_cx.diff(n), \
            f"inclusion fails to commute with d at degree {n}"
    for m in set(v.levels()) | set(model.levels()):
        got = total_homology(model.graded_piece(m))
        want = total_homology(v.graded_piece(m))
        assert got == want, \
            f"graded cohomology changed at level {m}: {got} != {want}"
    return MinimalModel(model=model, inclusion=inclusion)


def filtered_document(fc):
    """Serialize to the JSON document shape parse_filtered_document reads."""
    terms = {}
    for n in fc.degrees():
        terms[str(n)] = [
            {"label": s.label, "weight": s.weight,
             "filtration": fc.filtration[n][j]}
            for j, s in enumerate(fc.complex.slots[n])]
    differential = {}
    for n in sorted(fc.complex.diffs):
        mat = fc.complex.diffs[n]
        differential[str(n)] = [[i, j, format_scalar(c)]
                                for (i, j), c in sorted(mat.entries.items())]
    return {"kind": "filtered-complex", "name": fc.source,
            "terms": terms, "differential": differential}


def parse_filtered_document(doc):
    """Build a FilteredComplex from a plain document.

    Shape: {"kind": "filtered-complex", "name": ..., "terms": {degree:
    [{"label", "weight", "filtration"}, ...]}, "differential": {degree:
    [[row, col, coeff], ...]}} with rows indexing the next degree up.
    Weights default to 0 and coefficients follow the usual exact grammar.
    """
    if not isinstance(doc, dict):
        raise InputError("filtered complex document must be an object")
    if doc.get("kind") != "filtered-complex":
        raise InputError(f"kind {doc.get('kind')!r} is not filtered-complex")
    name = doc.get("name", "anonymous")
    slots = {}
    filt = {}

    def _degree_key(raw, where):
        try:
            n = int(raw)
        except (TypeError, ValueError):
            raise InputError(f"{where}: bad degree key {raw!r}") from None
        if n < 0:
            raise InputError(f"{where}: negative degree {n}")
        return n

    terms = doc.get("terms", {})
    if not isinstance(terms, dict):
        raise InputError("terms must map degrees to basis lists")
    for raw, entries in terms.items():
        n = _degree_key(raw, "terms")
        made = []
        levels = []
        for k, entry in enumerate(entries):
            if not isinstance(entry, dict) or "label" not in entry:
                raise InputError(f"terms[{raw}][{k}]: want an object "
                                 "with at least a label")
            weight = entry.get("weight", 0)
            level = entry.get("filtration", 0)
            if not isinstance(weight, int) or isinstance(weight, bool):
                raise InputError(f"terms[{raw}][{k}]: bad weight "
                                 f"{weight!r}")
            made.append(Slot(str(entry["label"]), weight))
            levels.append(level)
        if made:
            slots[n] = made
            filt[n] = levels

    diffs = {}
    for raw, entries in doc.get("differential", {}).items():
        n = _degree_key(raw, "differential")
        rows = len(slots.get(n + 1, ()))
        cols = len(slots.get(n, ()))
        mat_entries = {}
        for k, entry in enumerate(entries):
            where = f"differential[{raw}][{k}]"
            if not (isinstance(entry, (list, tuple)) and len(entry) == 3):
                raise InputError(f"{where}: want [row, col, coeff]")
            i, j, c = entry
            if not (isinstance(i, int) and isinstance(j, int)
                    and 0 <= i < rows and 0 <= j < cols):
                raise InputError(f"{where}: entry ({i!r},{j!r}) outside "
                                 f"{rows}x{cols}")
            if (i, j) in mat_entries:
                raise InputError(f"{where}: duplicate entry ({i},{j})")
            mat_entries[(i, j)] = _coefficient(c, where)
        diffs[n] = Matrix(rows, cols, mat_entries)
    try:
        cx = FiniteComplex("cochain", slots, diffs)
    except ValueError as exc:
        raise InputError(f"bad filtered complex: {exc}") from exc
    return FilteredComplex(cx, filt, source=name)


def pure_projective_window(n):
    """Allowed weights of the degree-n homotopy group, n >= 2, when the
    input cohomology is pure: one shifted degree per bracket length, from
    length 1 at weight -n down to length n-1 at weight -2(n-1)."""
    assert n >= 2
    return (-2 * (n - 1), -n)


def pure_projective_pi1_window(length):
    """Allowed weights of the length-l graded piece of the fundamental
    group under the same purity: each letter carries weight -1 or -2."""
    assert length >= 1
    return (-2 * length, -length)


@dataclass
class MixednessVerdict:
    """Outcome of the weight-window certificate.

    weights tabulates every nonzero component, degree 1 aggregated over
    bracket lengths; violations lists (degree, weight, (lo, hi)) for each
    component outside its window. The report is certified exactly when
    nothing violates.
    """

    mixed: bool
    weights: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.mixed


def check_mixed(report, mode="pure-projective", window=None,
                pi1_window=None):
    """Certify the weights of a homotopy report against declared windows.

    mode "pure-projective" uses the purity windows above; mode "custom"
    takes window(n) -> (lo, hi) for the degree-n groups and, if the report
    has fundamental-group grades, pi1_window(length) -> (lo, hi).
    """
    if mode == "pure-projective":
        window = pure_projective_window
        pi1_window = pure_projective_pi1_window
    elif mode == "custom":
        if window is None:
            raise InputError("custom mode needs a window function")
        if pi1_window is None and report.pi1:
            raise InputError("custom mode needs a pi1 window function "
                             "for a report with fundamental-group grades")
    else:
        raise InputError(f"unknown mixedness mode {mode!r}")

    weights = {}
    violations = []
    for length in sorted(report.pi1):
        lo, hi = pi1_window(length)
        for w, rank in sorted(report.pi1[length].items()):
            if not rank:
                continue
            table = weights.setdefault(1, {})
            table[w] = table.get(w, 0) + rank
            if not lo <= w <= hi:
                violations.append((1, w, (lo, hi)))
    for n in sorted(report.pi):
        for w, rank in sorted(report.pi[n].items()):
            if not rank:
                continue
            weights.setdefault(n, {})[w] = rank
            lo, hi = window(n)
            if not lo <= w <= hi:
                violations.append((n, w, (lo, hi)))
    verdict = MixednessVerdict(mixed=not violations, weights=weights,
                               violations=violations)
    assert verdict.mixed == (not verdict.violations)
    return verdict
