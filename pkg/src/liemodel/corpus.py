"""Builtin example inputs.

Families are generated as documents and then run through the ordinary
parser, so every builtin passes exactly the validation a user input would.

Available names (parametric families shown with their pattern):

  sphere-N                 rank-one algebra in degrees 0 and N, pure weights
  cp-N                     truncated polynomial algebra on a degree-2 class
  genus-G-curve            1, a_i, b_i (degree 1), t (degree 2), a_i b_i = t
  elliptic-curve           alias of genus-1-curve
  torus-N                  exterior algebra on N degree-1 classes (N <= 6)
  wedge-of-spheres-K-C     C copies of a degree-K class, all products zero
  wedge-of-spheres         alias of wedge-of-spheres-2-2
  p1-minus-3-points        first page: unit plus two classes at (0,1), w=2
  gm                       first page: unit plus one class at (0,1), w=2
"""

from .inputs import InputError, parse_algebra, parse_e1

TORUS_CAP = 6


def _sphere(n):
    if n < 1:
        raise InputError("sphere-N needs N >= 1")
    return {
        "name": f"sphere-{n}", "kind": "algebra",
        "classes": [{"id": "1", "degree": 0, "weight": 0},
                    {"id": "x", "degree": n, "weight": n}],
        "products": [],
    }


def _cp(n):
    if n < 1:
        raise InputError("cp-N needs N >= 1")
    def cid(k):
        return "x" if k == 1 else f"x{k}"
    classes = [{"id": "1", "degree": 0, "weight": 0}]
    classes += [{"id": cid(k), "degree": 2 * k, "weight": 2 * k}
                for k in range(1, n + 1)]
    products = []
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            if a + b <= n:
                products.append([cid(a), cid(b), cid(a + b), "1"])
    return {"name": f"cp-{n}", "kind": "algebra",
            "classes": classes, "products": products}


def _genus_curve(g):
    if g < 1:
        raise InputError("genus-G-curve needs G >= 1")
    classes = [{"id": "1", "degree": 0, "weight": 0}]
    for i in range(1, g + 1):
        classes.append({"id": f"a{i}", "degree": 1, "weight": 1})
        classes.append({"id": f"b{i}", "degree": 1, "weight": 1})
    classes.append({"id": "t", "degree": 2, "weight": 2})
    products = []
    for i in range(1, g + 1):
        products.append([f"a{i}", f"b{i}", "t", "1"])
        products.append([f"b{i}", f"a{i}", "t", "-1"])
    return {"name": f"genus-{g}-curve", "kind": "algebra",
            "classes": classes, "products": products}


def _torus(n):
    if n < 1:
        raise InputError("torus-N needs N >= 1")
    if n > TORUS_CAP:
        raise InputError(
            f"torus-{n}: validation is cubic in the number of classes; "
            f"the builtin family stops at torus-{TORUS_CAP}")
    def cid(subset):
        return "e" + "".join(str(i) for i in subset)
    subsets = []
    for mask in range(1, 1 << n):
        subsets.append(tuple(i + 1 for i in range(n) if mask >> i & 1))
    classes = [{"id": "1", "degree": 0, "weight": 0}]
    classes += [{"id": cid(s), "degree": len(s), "weight": len(s)}
                for s in subsets]
    products = []
    for s in subsets:
        for t in subsets:
            if set(s) & set(t):
                continue
            merged = tuple(sorted(s + t))
            # sign of the shuffle putting the concatenation s,t in order
            inversions = sum(1 for x in s for y in t if x > y)
            sign = "-1" if inversions % 2 else "1"
            products.append([cid(s), cid(t), cid(merged), sign])
    return {"name": f"torus-{n}", "kind": "algebra",
            "classes": classes, "products": products}


def _wedge_of_spheres(k, c):
    if k < 1 or c < 1:
        raise InputError("wedge-of-spheres-K-C needs K, C >= 1")
    classes = [{"id": "1", "degree": 0, "weight": 0}]
    classes += [{"id": f"x{i}", "degree": k, "weight": k}
                for i in range(1, c + 1)]
    return {"name": f"wedge-of-spheres-{k}-{c}", "kind": "algebra",
            "classes": classes, "products": []}


def _p1_minus_3_points():
    return {
        "name": "p1-minus-3-points", "kind": "e1",
        "classes": [{"id": "1", "degree": [0, 0]},
                    {"id": "e1", "degree": [0, 1], "weight": 2},
                    {"id": "e2", "degree": [0, 1], "weight": 2}],
        "products": [], "delta": [],
    }


def _gm():
    return {
        "name": "gm", "kind": "e1",
        "classes": [{"id": "1", "degree": [0, 0]},
                    {"id": "e", "degree": [0, 1], "weight": 2}],
        "products": [], "delta": [],
    }


def builtin_document(name):
    """The raw document for a builtin name (before validation)."""
    parts = name.split("-")
    if name == "elliptic-curve":
        doc = _genus_curve(1)
        doc["name"] = "elliptic-curve"
        return doc
    if name == "p1-minus-3-points":
        return _p1_minus_3_points()
    if name == "gm":
        return _gm()
    if name == "wedge-of-spheres":
        doc = _wedge_of_spheres(2, 2)
        doc["name"] = "wedge-of-spheres"
        return doc
    try:
        if parts[0] == "sphere" and len(parts) == 2:
            return _sphere(int(parts[1]))
        if parts[0] == "cp" and len(parts) == 2:
            return _cp(int(parts[1]))
        if parts[0] == "genus" and len(parts) == 3 and parts[2] == "curve":
            return _genus_curve(int(parts[1]))
        if parts[0] == "torus" and len(parts) == 2:
            return _torus(int(parts[1]))
        if (parts[:3] == ["wedge", "of", "spheres"] and len(parts) == 5):
            return _wedge_of_spheres(int(parts[3]), int(parts[4]))
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad parameter in builtin name {name!r}") from None
    raise InputError(f"unknown builtin {name!r}; see builtin_names()")


def builtin_example(name):
    doc = builtin_document(name)
    if doc["kind"] == "e1":
        return parse_e1(doc)
    return parse_algebra(doc)


def builtin_names():
    """Concrete instances used in tests plus one of each family."""
    return ["sphere-2", "sphere-3", "sphere-4", "sphere-5",
            "cp-2", "cp-3", "cp-4",
            "elliptic-curve", "genus-2-curve", "genus-3-curve",
            "torus-2", "torus-3", "torus-4",
            "wedge-of-spheres", "wedge-of-spheres-2-3", "wedge-of-spheres-3-2",
            "p1-minus-3-points", "gm"]
