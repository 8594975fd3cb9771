"""Exact linear algebra over the rationals.

Everything downstream (basis certification, homology ranks, minimal models)
reduces to ranks, kernels and solves of sparse matrices with rational
entries, so this module stays small and boring: sparse vectors are plain
dicts, elimination is an incremental column echelon with a fixed pivot
order, and there is no floating point anywhere.

`Scalar` is `fractions.Fraction`: arbitrary precision, always in lowest
terms with positive denominator, which is exactly the contract the rest of
the package assumes.
"""

from fractions import Fraction

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def scalar(value):
    """Coerce an int, string like '3/4', or Fraction to a Scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_scalar(value):
    """Render a Scalar as 'num' or 'num/den' (never a decimal)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Echelon:
    """Incremental column echelon over the rationals.

    Rows are arbitrary mutually comparable hashable keys (ints, or tuples
    of strings for tensor words). Pivoting is deterministic: a reduced
    column's pivot is its smallest remaining row key, i.e. the first
    available pivot in the fixed row order.

    With track=True every stored pivot remembers its expression in the
    originally added columns, which enables coordinates()/kernel vectors.
    """

    def __init__(self, track=False):
        self.pivots = {}
        self.track = track
        self.added = 0

    def rank(self):
        return len(self.pivots)

    def _reduce(self, vec, combo=None):
        # vec is consumed; subtracting a pivot removes its pivot key and
        # only introduces larger keys, so scanning by min() terminates.
        vec = {k: v for k, v in vec.items() if v}
        while vec:
            hits = [k for k in vec if k in self.pivots]
            if not hits:
                break
            k = min(hits)
            coeff = vec[k]
            pvec, pcombo = self.pivots[k]
            for rk, rv in pvec.items():
                nv = vec.get(rk, ZERO) - coeff * rv
                if nv:
                    vec[rk] = nv
                else:
                    vec.pop(rk, None)
            if combo is not None:
                for ck, cv in pcombo.items():
                    nv = combo.get(ck, ZERO) - coeff * cv
                    if nv:
                        combo[ck] = nv
                    else:
                        combo.pop(ck, None)
        return vec

    def add(self, vec):
        """Add one column. Returns None if it extended the span (new pivot),
        else a dict {earlier column index: coeff} expressing it in terms of
        previously added columns (requires track=True; untracked instances
        return an empty dict for dependent columns)."""
        idx = self.added
        self.added += 1
        combo = {idx: ONE} if self.track else None
        vec = self._reduce(vec, combo)
        if not vec:
            if combo is None:
                return {}
            dep = {k: -v for k, v in combo.items() if k != idx}
            return dep
        key = min(vec)
        inv = ONE / vec[key]
        pvec = {k: v * inv for k, v in vec.items()}
        pcombo = None
        if combo is not None:
            pcombo = {k: v * inv for k, v in combo.items()}
        self.pivots[key] = (pvec, pcombo)
        return None

    def residual(self, vec):
        """Reduce vec against the current span without adding it."""
        return self._reduce(dict(vec))

    def contains(self, vec):
        return not self._reduce(dict(vec))

    def coordinates(self, vec):
        """Express vec in the added columns; None if outside the span.

        Requires track=True. Returns {column index: coeff}.
        """
        if not self.track:
            raise ValueError("echelon was built without tracking")
        combo = {}
        vec = self._reduce(dict(vec), combo)
        if vec:
            return None
        return {k: -v for k, v in combo.items()}


class Matrix:
    """Immutable sparse matrix with exact rational entries.

    entries maps (row, col) to a nonzero Scalar; rows and cols fix the
    shape explicitly so zero matrices of every shape are distinct.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=()):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        self.rows = rows
        self.cols = cols
        clean = {}
        items = entries.items() if isinstance(entries, dict) else entries
        for (r, c), v in items:
            v = scalar(v)
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) outside {rows}x{cols}")
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, row_lists):
        rows = len(row_lists)
        cols = len(row_lists[0]) if rows else 0
        entries = {}
        for r, row in enumerate(row_lists):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                v = scalar(v)
                if v:
                    entries[(r, c)] = v
        return cls(rows, cols, entries)

    @classmethod
    def from_columns(cls, rows, columns):
        """columns: iterable of dicts {row index: value}."""
        entries = {}
        cols = 0
        for c, col in enumerate(columns):
            cols = c + 1
            for r, v in col.items():
                v = scalar(v)
                if v:
                    entries[(r, c)] = v
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, {})

    def entry(self, r, c):
        return self.entries.get((r, c), ZERO)

    def column(self, c):
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def columns(self):
        cols = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def row(self, r):
        return {c: v for (rr, c), v in self.entries.items() if rr == r}

    def transpose(self):
        return Matrix(self.cols, self.rows,
                      {(c, r): v for (r, c), v in self.entries.items()})

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {len(self.entries)} entries)"

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in matrix product")
            out = {}
            rows_of_self = {}
            for (r, c), v in self.entries.items():
                rows_of_self.setdefault(c, []).append((r, v))
            for (k, c), w in other.entries.items():
                for r, v in rows_of_self.get(k, ()):
                    key = (r, c)
                    acc = out.get(key, ZERO) + v * w
                    if acc:
                        out[key] = acc
                    else:
                        out.pop(key, None)
            return Matrix(self.rows, other.cols, out)
        raise TypeError("matrix product needs a Matrix")

    def apply(self, vec):
        """Apply to a sparse column vector {col index: value}."""
        out = {}
        for (r, c), v in self.entries.items():
            w = vec.get(c)
            if w:
                acc = out.get(r, ZERO) + v * w
                if acc:
                    out[r] = acc
                else:
                    out.pop(r, None)
        return out

    def scale(self, a):
        a = scalar(a)
        return Matrix(self.rows, self.cols,
                      {k: a * v for k, v in self.entries.items()})

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch in matrix sum")
        out = dict(self.entries)
        for k, v in other.entries.items():
            acc = out.get(k, ZERO) + v
            if acc:
                out[k] = acc
            else:
                out.pop(k, None)
        return Matrix(self.rows, self.cols, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def rank(self):
        ech = Echelon()
        for col in self.columns():
            ech.add(col)
        return ech.rank()

    def kernel_basis(self):
        """Matrix whose columns span {v : self @ v = 0}; exactly
        cols - rank of them, deterministic for a fixed column order."""
        ech = Echelon(track=True)
        kernel_cols = []
        for j, col in enumerate(self.columns()):
            dep = ech.add(col)
            if dep is not None:
                vec = {j: ONE}
                for k, v in dep.items():
                    vec[k] = -v
                kernel_cols.append(vec)
        return Matrix.from_columns(self.cols, kernel_cols) if kernel_cols \
            else Matrix(self.cols, 0)


def rank_of_columns(columns):
    """Rank of a family of sparse vectors (dicts with comparable keys)."""
    ech = Echelon()
    for col in columns:
        ech.add(col)
    return ech.rank()
