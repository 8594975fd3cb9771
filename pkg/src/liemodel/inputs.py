"""Input data model: weight-graded algebras and first-page data.

Two entry points feed the engine. The formal one is a finite-dimensional
weight-graded commutative algebra, given by classes and sparse structure
constants. The quasi-formal one is a bigraded first page with a first
differential of bidegree (+2, -1); its classes default to weight p + 2q.

Validation is exhaustive rather than clever: graded commutativity and
associativity are checked on every pair and triple of classes, the
differential is squared, and the Leibniz rule is checked on every pair.
Desk-scale inputs are tiny, so O(classes^3) is acceptable and removes a
whole category of silent corruption.

Documents are JSON with fields name, kind ("algebra" | "e1"), classes
(each {id, degree, weight?} with degree an integer or a [p, q] pair),
products (each [left, right, result, coefficient]), delta (e1 only, each
[source, target, coefficient]) and an optional weight_mode ("pure" |
"mixed", default "pure" for e1 pages). Coefficients are exact fractions
serialized as strings. serialize() emits a canonical form: classes and
constants sorted, stable key order, so equal inputs are byte-identical.
"""

import json
import re
from fractions import Fraction

from .linalg import scalar, format_scalar


class InputError(ValueError):
    """A schema or invariant violation in an input document."""


def _require(cond, message):
    if not cond:
        raise InputError(message)


_COEFF_RE = re.compile(r"-?\d+(/[1-9]\d*)?$")


def _coefficient(raw, where):
    """An exact coefficient: an int, or a string matching num or num/den."""
    if isinstance(raw, int) and not isinstance(raw, bool):
        return scalar(raw)
    if isinstance(raw, str) and _COEFF_RE.match(raw):
        return scalar(Fraction(raw))
    raise InputError(f"{where}: bad coefficient {raw!r} "
                     f"(want an exact fraction like \"-3/2\")")


class _ProductTable:
    """Sparse structure constants with unit handling and total products."""

    def __init__(self, unit):
        self.unit = unit
        self.table = {}      # (left, right) -> {result: coeff}

    def add(self, left, right, result, coeff):
        entry = self.table.setdefault((left, right), {})
        _require(result not in entry,
                 f"duplicate product entry {left}*{right} -> {result}")
        if coeff:
            entry[result] = coeff

    def product(self, left, right):
        """Total product of two basis classes, as {result id: coeff}."""
        if left == self.unit:
            return {right: Fraction(1)}
        if right == self.unit:
            return {left: Fraction(1)}
        return dict(self.table.get((left, right), ()))

    def product_of_sum(self, vec, right):
        out = {}
        for x, c in vec.items():
            for r, c2 in self.product(x, right).items():
                v = out.get(r, 0) + c * c2
                if v:
                    out[r] = v
                else:
                    out.pop(r, None)
        return out

    def sorted_entries(self):
        out = []
        for (l, r), entry in self.table.items():
            for res, c in entry.items():
                out.append((l, r, res, c))
        out.sort()
        return out


class CohomologyAlgebra:
    """A connected, finite, weight-graded commutative algebra."""

    kind = "algebra"

    def __init__(self, name, classes, products):
        # classes: {id: (degree, weight)}; products: list of 4-tuples
        self.name = name
        self.degree = {}
        self.weight = {}
        for cid, (deg, wgt) in classes.items():
            _require(isinstance(deg, int) and deg >= 0,
                     f"class {cid}: degree must be a non-negative integer")
            self.degree[cid] = deg
            self.weight[cid] = wgt
        units = [cid for cid, d in self.degree.items() if d == 0]
        _require(len(units) == 1,
                 f"need exactly one degree-0 class (the unit), got {units}")
        self.unit = units[0]
        _require(self.weight[self.unit] == 0,
                 f"unit {self.unit} must have weight 0")
        self._products = _ProductTable(self.unit)
        for left, right, result, coeff in products:
            self._check_product_entry(left, right, result, coeff)
        self._validate()

    def _check_product_entry(self, left, right, result, coeff):
        for cid in (left, right, result):
            _require(cid in self.degree, f"product references unknown id {cid!r}")
        if self.unit in (left, right):
            other = right if left == self.unit else left
            _require(result == other and coeff == 1,
                     f"unit product {left}*{right} must equal {other}")
            return                      # implied, not stored
        _require(self.degree[result] == self.degree[left] + self.degree[right],
                 f"product {left}*{right} -> {result} breaks degree additivity")
        _require(self.weight[result] == self.weight[left] + self.weight[right],
                 f"product {left}*{right} -> {result} breaks weight additivity")
        self._products.add(left, right, result, coeff)

    def ids(self):
        return sorted(self.degree)

    def positive_ids(self):
        return sorted(cid for cid, d in self.degree.items() if d > 0)

    def product(self, left, right):
        return self._products.product(left, right)

    def _validate(self):
        pos = self.positive_ids()
        for x in pos:
            for y in pos:
                sign = -1 if (self.degree[x] * self.degree[y]) % 2 else 1
                xy = self.product(x, y)
                yx = self.product(y, x)
                _require(xy == {k: sign * v for k, v in yx.items()},
                         f"graded commutativity fails for {x}, {y}")
        for x in pos:
            for y in pos:
                xy = self.product(x, y)
                for z in pos:
                    lhs = self._products.product_of_sum(xy, z)
                    rhs = {}
                    for r, c in self.product(y, z).items():
                        for s, c2 in self.product(x, r).items():
                            v = rhs.get(s, 0) + c * c2
                            if v:
                                rhs[s] = v
                            else:
                                rhs.pop(s, None)
                    _require(lhs == rhs,
                             f"associativity fails at ({x}*{y})*{z}")

    def dims_by_degree(self):
        out = {}
        for cid, d in self.degree.items():
            out[d] = out.get(d, 0) + 1
        return out

    def is_pure(self):
        return all(self.weight[c] == self.degree[c] for c in self.degree)

    def document(self):
        classes = [{"id": cid, "degree": self.degree[cid],
                    "weight": self.weight[cid]}
                   for cid in self.ids()]
        products = [[l, r, res, format_scalar(c)]
                    for l, r, res, c in self._products.sorted_entries()]
        return {"name": self.name, "kind": "algebra",
                "classes": classes, "products": products}

    def __eq__(self, other):
        return (isinstance(other, CohomologyAlgebra)
                and self.document() == other.document())


class E1Page:
    """A bigraded first page with differential of bidegree (+2, -1)."""

    kind = "e1"

    def __init__(self, name, classes, products, delta, weight_mode="pure"):
        # classes: {id: (p, q, weight or None)}
        _require(weight_mode in ("pure", "mixed"),
                 f"unknown weight_mode {weight_mode!r}")
        self.name = name
        self.weight_mode = weight_mode
        self.bidegree = {}
        self.weight = {}
        self._explicit_weight = {}
        for cid, (p, q, wgt) in classes.items():
            _require(isinstance(p, int) and isinstance(q, int)
                     and p >= 0 and q >= 0,
                     f"class {cid}: (p, q) must be non-negative integers")
            self.bidegree[cid] = (p, q)
            default = p + 2 * q
            if wgt is None:
                self.weight[cid] = default
            else:
                if weight_mode == "pure":
                    _require(wgt == default,
                             f"class {cid}: explicit weight {wgt} contradicts "
                             f"the pure rule p + 2q = {default}")
                self.weight[cid] = wgt
                self._explicit_weight[cid] = wgt
        units = [cid for cid, pq in self.bidegree.items() if pq == (0, 0)]
        _require(len(units) == 1,
                 f"need exactly one class at (0,0) (the unit), got {units}")
        self.unit = units[0]
        _require(self.weight[self.unit] == 0,
                 f"unit {self.unit} must have weight 0")
        self._products = _ProductTable(self.unit)
        for left, right, result, coeff in products:
            self._check_product_entry(left, right, result, coeff)
        self.delta = {}      # source -> {target: coeff}
        for source, target, coeff in delta:
            self._check_delta_entry(source, target, coeff)
        self._validate()

    def degree_of(self, cid):
        p, q = self.bidegree[cid]
        return p + q

    @property
    def degree(self):
        return {cid: self.degree_of(cid) for cid in self.bidegree}

    def _check_product_entry(self, left, right, result, coeff):
        for cid in (left, right, result):
            _require(cid in self.bidegree,
                     f"product references unknown id {cid!r}")
        if self.unit in (left, right):
            other = right if left == self.unit else left
            _require(result == other and coeff == 1,
                     f"unit product {left}*{right} must equal {other}")
            return
        pl, ql = self.bidegree[left]
        pr, qr = self.bidegree[right]
        _require(self.bidegree[result] == (pl + pr, ql + qr),
                 f"product {left}*{right} -> {result} breaks bidegree "
                 f"additivity")
        _require(self.weight[result] == self.weight[left] + self.weight[right],
                 f"product {left}*{right} -> {result} breaks weight additivity")
        self._products.add(left, right, result, coeff)

    def _check_delta_entry(self, source, target, coeff):
        for cid in (source, target):
            _require(cid in self.bidegree,
                     f"delta references unknown id {cid!r}")
        ps, qs = self.bidegree[source]
        pt, qt = self.bidegree[target]
        _require((pt, qt) == (ps + 2, qs - 1),
                 f"delta {source} -> {target} has bidegree "
                 f"({pt - ps}, {qt - qs}), must be (+2, -1)")
        _require(self.weight[target] == self.weight[source],
                 f"delta {source} -> {target} changes the weight")
        entry = self.delta.setdefault(source, {})
        _require(target not in entry,
                 f"duplicate delta entry {source} -> {target}")
        if coeff:
            entry[target] = coeff

    def ids(self):
        return sorted(self.bidegree)

    def positive_ids(self):
        return sorted(cid for cid in self.bidegree if cid != self.unit)

    def product(self, left, right):
        return self._products.product(left, right)

    def delta_of(self, cid):
        return dict(self.delta.get(cid, ()))

    def _apply_delta(self, vec):
        out = {}
        for cid, c in vec.items():
            for t, c2 in self.delta_of(cid).items():
                v = out.get(t, 0) + c * c2
                if v:
                    out[t] = v
                else:
                    out.pop(t, None)
        return out

    def _validate(self):
        pos = self.positive_ids()
        _require(not self._apply_delta({self.unit: Fraction(1)}),
                 "delta of the unit must vanish")
        for x in self.delta:
            comp = self._apply_delta(self.delta_of(x))
            _require(not comp, f"delta squared is nonzero on {x}")
        for x in pos:
            for y in pos:
                sign = -1 if (self.degree_of(x) * self.degree_of(y)) % 2 else 1
                xy = self.product(x, y)
                yx = self.product(y, x)
                _require(xy == {k: sign * v for k, v in yx.items()},
                         f"graded commutativity fails for {x}, {y}")
        for x in pos:
            for y in pos:
                xy = self.product(x, y)
                for z in pos:
                    lhs = self._products.product_of_sum(xy, z)
                    rhs = {}
                    for r, c in self.product(y, z).items():
                        for s, c2 in self.product(x, r).items():
                            v = rhs.get(s, 0) + c * c2
                            if v:
                                rhs[s] = v
                            else:
                                rhs.pop(s, None)
                    _require(lhs == rhs,
                             f"associativity fails at ({x}*{y})*{z}")
        # graded Leibniz: delta(xy) = delta(x) y + (-1)^|x| x delta(y),
        # checked on every pair including the unit (handled above)
        for x in pos:
            sign = -1 if self.degree_of(x) % 2 else 1
            for y in pos:
                lhs = self._apply_delta(self.product(x, y))
                rhs = {}
                for s, c in self.delta_of(x).items():
                    for r, c2 in self.product(s, y).items():
                        v = rhs.get(r, 0) + c * c2
                        if v:
                            rhs[r] = v
                        else:
                            rhs.pop(r, None)
                for t, c in self.delta_of(y).items():
                    for r, c2 in self.product(x, t).items():
                        v = rhs.get(r, 0) + sign * c * c2
                        if v:
                            rhs[r] = v
                        else:
                            rhs.pop(r, None)
                _require(lhs == rhs, f"Leibniz rule fails on ({x}, {y})")

    def is_pure(self):
        return all(self.weight[c] == p + 2 * q
                   for c, (p, q) in self.bidegree.items())

    def document(self):
        classes = []
        for cid in self.ids():
            p, q = self.bidegree[cid]
            entry = {"id": cid, "degree": [p, q]}
            if cid in self._explicit_weight:
                entry["weight"] = self._explicit_weight[cid]
            classes.append(entry)
        products = [[l, r, res, format_scalar(c)]
                    for l, r, res, c in self._products.sorted_entries()]
        delta = []
        for source in sorted(self.delta):
            for target in sorted(self.delta[source]):
                delta.append([source, target,
                              format_scalar(self.delta[source][target])])
        doc = {"name": self.name, "kind": "e1",
               "classes": classes, "products": products, "delta": delta}
        if self.weight_mode != "pure":
            doc["weight_mode"] = self.weight_mode
        return doc

    def __eq__(self, other):
        return isinstance(other, E1Page) and self.document() == other.document()


def _load(document):
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InputError(f"not valid JSON: {exc}") from None
    _require(isinstance(document, dict), "document must be a JSON object")
    return document


def _parse_classes(document, want_pair):
    _require(isinstance(document.get("classes"), list),
             "missing or malformed 'classes' list")
    out = {}
    for entry in document["classes"]:
        _require(isinstance(entry, dict) and "id" in entry and "degree" in entry,
                 f"malformed class entry {entry!r}")
        cid = entry["id"]
        _require(isinstance(cid, str) and cid, f"bad class id {cid!r}")
        _require(cid not in out, f"duplicate class id {cid!r}")
        deg = entry["degree"]
        wgt = entry.get("weight")
        if wgt is not None:
            _require(isinstance(wgt, int), f"class {cid}: weight must be int")
        if want_pair:
            _require(isinstance(deg, list) and len(deg) == 2,
                     f"class {cid}: degree must be a [p, q] pair")
            out[cid] = (deg[0], deg[1], wgt)
        else:
            _require(isinstance(deg, int),
                     f"class {cid}: degree must be an integer")
            if wgt is None:
                wgt = deg          # purity default for the formal case
            out[cid] = (deg, wgt)
    return out


def _parse_products(document):
    products = document.get("products", [])
    _require(isinstance(products, list), "'products' must be a list")
    out = []
    for entry in products:
        _require(isinstance(entry, list) and len(entry) == 4,
                 f"malformed product entry {entry!r}")
        left, right, result, raw = entry
        out.append((left, right, result,
                    _coefficient(raw, f"product {left}*{right}")))
    return out


def parse_algebra(document):
    doc = _load(document)
    _require(doc.get("kind", "algebra") == "algebra",
             f"expected kind 'algebra', got {doc.get('kind')!r}")
    name = doc.get("name", "unnamed")
    classes = _parse_classes(doc, want_pair=False)
    products = _parse_products(doc)
    return CohomologyAlgebra(name, classes, products)


def parse_e1(document):
    doc = _load(document)
    _require(doc.get("kind") == "e1", f"expected kind 'e1', got {doc.get('kind')!r}")
    name = doc.get("name", "unnamed")
    classes = _parse_classes(doc, want_pair=True)
    products = _parse_products(doc)
    delta_raw = doc.get("delta", [])
    _require(isinstance(delta_raw, list), "'delta' must be a list")
    delta = []
    for entry in delta_raw:
        _require(isinstance(entry, list) and len(entry) == 3,
                 f"malformed delta entry {entry!r}")
        source, target, raw = entry
        delta.append((source, target,
                      _coefficient(raw, f"delta {source}->{target}")))
    return E1Page(name, classes, products, delta,
                  weight_mode=doc.get("weight_mode", "pure"))


def parse_document(document):
    doc = _load(document)
    kind = doc.get("kind", "algebra")
    if kind == "algebra":
        return parse_algebra(doc)
    if kind == "e1":
        return parse_e1(doc)
    raise InputError(f"unknown kind {kind!r}")


def serialize(obj):
    """Canonical JSON text; equal inputs serialize byte-identically."""
    return json.dumps(obj.document(), sort_keys=True, indent=2) + "\n"
