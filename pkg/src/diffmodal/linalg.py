"""Graded free modules with structured bases and exact, lazily evaluated linear maps.

Basis labels are plain nested tuples so that equality, hashing and the
canonical order all come for free from Python's tuple semantics:

    ('g', space, i)        generator i of a base module
    ('m', (l1, ..., ln))   monomial of a symmetric algebra, entries sorted
    ('w', (l1, ..., ln))   word of a shuffle algebra
    ('c', n, l)            tagged copy, for direct sums and countable sums
    ('t', (l1, ..., ln))   pure tensor, n != 1; ('t', ()) spans K

Tensor products are strict: ``tensor_module`` flattens nested products and
drops copies of K, and a one-factor tensor is just its factor.  A label of a
module with ``arity`` n therefore has exactly n atoms.

Vectors are dicts ``label -> raw rig value`` with no stored zeros.  A
:class:`LinearMap` is specified on basis labels and evaluated on demand;
images are memoized per map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .scalars import Rig, fast_ops


class FrontierError(ArithmeticError):
    """Raised when an explicitly truncated map is asked for an image it cannot give exactly."""

    def __init__(self, message="truncation frontier exceeded"):
        super().__init__(message)


class ObjectMismatch(TypeError):
    pass


# ---------------------------------------------------------------------------
# labels

UNIT = ("t", ())


def gen(space: str, i: int):
    return ("g", space, i)


def mono(entries=()):
    return ("m", tuple(sorted(entries)))


def word(entries=()):
    return ("w", tuple(entries))


def copy(tag: int, label):
    return ("c", tag, label)


def atoms_of(label, arity: int):
    return label[1] if arity != 1 else (label,)


def join_atoms(atoms) -> tuple:
    return atoms[0] if len(atoms) == 1 else ("t", tuple(atoms))


@lru_cache(maxsize=None)
def degree(label) -> int:
    """Letter count: generators weigh 0 alone and 1 inside a monomial or word."""
    kind = label[0]
    if kind == "g":
        return 0
    if kind == "c":
        return degree(label[2])
    if kind == "t":
        return sum(degree(a) for a in label[1])
    return sum(1 + degree(a) for a in label[1])


def sort_key(label):
    return (degree(label), label)


def render_label(label) -> str:
    kind = label[0]
    if kind == "g":
        return f"{label[1].lower()}{label[2]}"
    if kind == "c":
        return f"c{label[1]}:{render_label(label[2])}"
    if kind == "m":
        return "[" + " ".join(render_label(a) for a in label[1]) + "]"
    if kind == "w":
        return "(" + ", ".join(render_label(a) for a in label[1]) + ")"
    if not label[1]:
        return "1"
    return " ⊗ ".join(_wrap(render_label(a), a) for a in label[1])


def _wrap(text, label):
    return f"({text})" if label[0] == "t" else text


def render_vector(vec: dict, rig: Rig) -> str:
    if not vec:
        return "0"
    parts = []
    for lab in sorted(vec, key=sort_key):
        c = vec[lab]
        txt = render_label(lab)
        if c == rig.one:
            parts.append(txt)
        else:
            parts.append(f"{rig.render_raw(c)}·{txt}")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True)
class Base:
    name: str
    dim: int

    def __str__(self):
        return f"{self.name}"


@dataclass(frozen=True)
class Tensor:
    factors: tuple

    def __str__(self):
        if not self.factors:
            return "K"
        return "(" + " ⊗ ".join(str(f) for f in self.factors) + ")"


@dataclass(frozen=True)
class DirectSum:
    summands: tuple

    def __str__(self):
        if not self.summands:
            return "0"
        return "(" + " ⊕ ".join(str(s) for s in self.summands) + ")"


@dataclass(frozen=True)
class Copies:
    """Countable sum of copies of ``module``; ``bound`` only limits basis enumeration."""

    module: object
    bound: int

    def __str__(self):
        return f"⊕{self.module}"


@dataclass(frozen=True)
class Sym:
    module: object

    def __str__(self):
        return f"Sym({self.module})"


@dataclass(frozen=True)
class Sh:
    module: object

    def __str__(self):
        return f"Sh({self.module})"


K = Tensor(())
ZERO = DirectSum(())


def tensor_module(*mods):
    flat = []
    for m in mods:
        if isinstance(m, Tensor):
            flat.extend(m.factors)
        else:
            flat.append(m)
    if len(flat) == 1:
        return flat[0]
    return Tensor(tuple(flat))


def arity(module) -> int:
    return len(module.factors) if isinstance(module, Tensor) else 1


def depth(module) -> int:
    """Nesting depth of Sym/Sh constructors, used to pick enumeration bounds."""
    if isinstance(module, Base):
        return 0
    if isinstance(module, Tensor):
        return max((depth(f) for f in module.factors), default=0)
    if isinstance(module, DirectSum):
        return max((depth(s) for s in module.summands), default=0)
    if isinstance(module, Copies):
        return depth(module.module)
    return 1 + depth(module.module)


def contains(module, label) -> bool:
    """Structural membership test for a basis label."""
    if isinstance(module, Tensor):
        if arity(module) == 1:
            return contains(module.factors[0], label)
        return (label[0] == "t" and len(label[1]) == len(module.factors)
                and all(contains(f, a) for f, a in zip(module.factors, label[1])))
    kind = label[0]
    if isinstance(module, Base):
        return kind == "g" and label[1] == module.name and 0 <= label[2] < module.dim
    if isinstance(module, DirectSum):
        return (kind == "c" and 0 <= label[1] < len(module.summands)
                and contains(module.summands[label[1]], label[2]))
    if isinstance(module, Copies):
        return kind == "c" and label[1] >= 0 and contains(module.module, label[2])
    if isinstance(module, Sym):
        entries = label[1]
        return (kind == "m" and list(entries) == sorted(entries)
                and all(contains(module.module, a) for a in entries))
    if isinstance(module, Sh):
        return kind == "w" and all(contains(module.module, a) for a in label[1])
    raise TypeError(f"unknown module {module!r}")


# ---------------------------------------------------------------------------
# basis enumeration


@dataclass(frozen=True)
class Truncation:
    """Enumeration window: total letter degree plus optional size caps."""

    degree: int
    mset_size: int | None = None
    word_len: int | None = None


@lru_cache(maxsize=None)
def graded_basis(module, d: int, trunc: Truncation) -> tuple:
    """Basis labels of exact degree d inside the window, in canonical order."""
    if isinstance(module, Base):
        return tuple(gen(module.name, i) for i in range(module.dim)) if d == 0 else ()
    if isinstance(module, Tensor):
        fs = module.factors
        if not fs:
            return (UNIT,) if d == 0 else ()
        if len(fs) == 1:
            return graded_basis(fs[0], d, trunc)
        out = []
        for parts in _compositions(d, len(fs)):
            pieces = [graded_basis(f, p, trunc) for f, p in zip(fs, parts)]
            out.extend(("t", combo) for combo in itertools.product(*pieces))
        return tuple(sorted(out))
    if isinstance(module, DirectSum):
        return tuple(copy(i, l) for i, s in enumerate(module.summands)
                     for l in graded_basis(s, d, trunc))
    if isinstance(module, Copies):
        inner = graded_basis(module.module, d, trunc)
        return tuple(copy(n, l) for n in range(module.bound) for l in inner)
    if isinstance(module, (Sym, Sh)):
        items = [(l, e + 1) for e in range(d) for l in graded_basis(module.module, e, trunc)]
        items.sort()
        cap = trunc.mset_size if isinstance(module, Sym) else trunc.word_len
        if isinstance(module, Sym):
            seqs = _multisets(items, d, cap)
            return tuple(sorted(("m", s) for s in seqs))
        seqs = _words(items, d, cap)
        return tuple(sorted(("w", s) for s in seqs))
    raise TypeError(f"unknown module {module!r}")


def _compositions(d, k):
    if k == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _compositions(d - first, k - 1):
            yield (first,) + rest


def _multisets(items, budget, cap):
    out = []

    def rec(start, left, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        if cap is not None and len(acc) >= cap:
            return
        for j in range(start, len(items)):
            lab, cost = items[j]
            if cost <= left:
                acc.append(lab)
                rec(j, left - cost, acc)
                acc.pop()

    rec(0, budget, [])
    return out


def _words(items, budget, cap):
    out = []

    def rec(left, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        if cap is not None and len(acc) >= cap:
            return
        for lab, cost in items:
            if cost <= left:
                acc.append(lab)
                rec(left - cost, acc)
                acc.pop()

    rec(budget, [])
    return out


def basis(module, trunc: Truncation) -> tuple:
    """All basis labels of degree <= trunc.degree, degree-major canonical order."""
    out = []
    for d in range(trunc.degree + 1):
        out.extend(graded_basis(module, d, trunc))
    return tuple(out)


# ---------------------------------------------------------------------------
# vectors


def vec_add_into(target: dict, vec: dict, rig: Rig, scale=None):
    add, mul = fast_ops(rig)
    for lab, c in vec.items():
        if scale is not None:
            c = mul(scale, c)
            if not c:
                continue
        if lab in target:
            s = add(target[lab], c)
            if s:
                target[lab] = s
            else:
                del target[lab]
        else:
            target[lab] = c
    return target


def vec_neg(vec: dict, rig: Rig) -> dict:
    return {lab: rig.neg(c) for lab, c in vec.items()}


# ---------------------------------------------------------------------------
# linear maps


class LinearMap:
    """A linear map given by a rule on basis labels, evaluated lazily and memoized."""

    __slots__ = ("domain", "codomain", "rig", "_fn", "_cache", "name")

    def __init__(self, domain, codomain, rig: Rig, fn, name: str = "map"):
        self.domain = domain
        self.codomain = codomain
        self.rig = rig
        self._fn = fn
        self._cache = {}
        self.name = name

    def __call__(self, label) -> dict:
        """Image of a basis label.  The returned dict is shared: do not mutate it."""
        try:
            return self._cache[label]
        except KeyError:
            pass
        img = self._fn(label)
        self._cache[label] = img
        return img

    def apply(self, vec: dict) -> dict:
        out = {}
        for lab, c in vec.items():
            vec_add_into(out, self(lab), self.rig, c)
        return out

    def __repr__(self):
        return f"LinearMap({self.name}: {self.domain} -> {self.codomain})"


def _same_rig(*maps):
    rig = maps[0].rig
    for m in maps[1:]:
        if m.rig != rig:
            raise ObjectMismatch("rig mismatch")
    return rig


def identity(module, rig: Rig) -> LinearMap:
    return LinearMap(module, module, rig, lambda l: {l: rig.one}, name=f"id[{module}]")


def zero_map(dom, cod, rig: Rig) -> LinearMap:
    return LinearMap(dom, cod, rig, lambda l: {}, name="0")


def from_rule(dom, cod, rig: Rig, rule, name="map") -> LinearMap:
    """Wrap a rule returning an iterable of (label, raw coefficient) pairs."""

    def fn(l):
        out = {}
        add = fast_ops(rig)[0]
        for lab, c in rule(l):
            if not c:
                continue
            if lab in out:
                s = add(out[lab], c)
                if s:
                    out[lab] = s
                else:
                    del out[lab]
            else:
                out[lab] = c
        return out

    return LinearMap(dom, cod, rig, fn, name=name)


def compose(*maps: LinearMap) -> LinearMap:
    """Diagrammatic composite: ``compose(f, g)`` is f then g."""
    if len(maps) == 1:
        return maps[0]
    rig = _same_rig(*maps)
    for f, g in zip(maps, maps[1:]):
        if f.codomain != g.domain:
            raise ObjectMismatch(f"cannot compose {f.codomain} with {g.domain}")
    if len(maps) > 2:
        return compose(compose(*maps[:-1]), maps[-1])
    f, g = maps

    def fn(l):
        return g.apply(f(l))

    return LinearMap(f.domain, g.codomain, rig, fn, name=f"({f.name};{g.name})")


def add_maps(*maps: LinearMap) -> LinearMap:
    rig = _same_rig(*maps)
    f0 = maps[0]
    for m in maps[1:]:
        if m.domain != f0.domain or m.codomain != f0.codomain:
            raise ObjectMismatch("cannot add maps of different types")

    def fn(l):
        out = {}
        for m in maps:
            vec_add_into(out, m(l), rig)
        return out

    return LinearMap(f0.domain, f0.codomain, rig, fn, name="+".join(m.name for m in maps))


def scale_map(c, f: LinearMap) -> LinearMap:
    rig = f.rig

    def fn(l):
        return vec_add_into({}, f(l), rig, c)

    return LinearMap(f.domain, f.codomain, rig, fn, name=f"{c}{f.name}")


def tensor(*maps: LinearMap) -> LinearMap:
    """Tensor product of maps, acting atom-wise on strict tensor labels."""
    if len(maps) == 1:
        return maps[0]
    rig = _same_rig(*maps) if maps else None
    dom = tensor_module(*(m.domain for m in maps))
    cod = tensor_module(*(m.codomain for m in maps))
    dom_ar = arity(dom)
    in_ar = [arity(m.domain) for m in maps]
    out_ar = [arity(m.codomain) for m in maps]
    add, mul = fast_ops(rig)
    one = rig.one

    def fn(l):
        atoms = atoms_of(l, dom_ar)
        partial = {(): one}
        pos = 0
        for m, a, b in zip(maps, in_ar, out_ar):
            sub = join_atoms(atoms[pos:pos + a]) if a != 0 else UNIT
            pos += a
            img = m(sub)
            if not img:
                return {}
            nxt = {}
            for pre, c in partial.items():
                for lab, c2 in img.items():
                    key = pre + atoms_of(lab, b)
                    v = mul(c, c2)
                    if key in nxt:
                        v = add(nxt[key], v)
                    nxt[key] = v
            partial = {k: v for k, v in nxt.items() if v}
        return {join_atoms(k) if len(k) != 0 else UNIT: v for k, v in partial.items()}

    return LinearMap(dom, cod, rig, fn, name="⊗".join(m.name for m in maps))


def permutation(modules, perm, rig: Rig) -> LinearMap:
    """Reorder tensor factors: output factor j is input factor perm[j]."""
    modules = tuple(modules)
    dom = tensor_module(*modules)
    cod = tensor_module(*(modules[p] for p in perm))
    ars = [arity(m) for m in modules]
    starts = list(itertools.accumulate([0] + ars))
    dom_ar = arity(dom)

    def fn(l):
        atoms = atoms_of(l, dom_ar)
        out = []
        for p in perm:
            out.extend(atoms[starts[p]:starts[p + 1]])
        return {join_atoms(out) if out else UNIT: rig.one}

    return LinearMap(dom, cod, rig, fn, name=f"perm{tuple(perm)}")


def symmetry(a, b, rig: Rig) -> LinearMap:
    m = permutation((a, b), (1, 0), rig)
    m.name = "σ"
    return m


def injection(i: int, summands, rig: Rig) -> LinearMap:
    summands = tuple(summands)
    return LinearMap(summands[i], DirectSum(summands), rig,
                     lambda l: {copy(i, l): rig.one}, name=f"ι{i}")


def projection(i: int, summands, rig: Rig) -> LinearMap:
    summands = tuple(summands)
    return LinearMap(DirectSum(summands), summands[i], rig,
                     lambda l: {l[2]: rig.one} if l[1] == i else {}, name=f"π{i}")


def direct_sum(a, b):
    return DirectSum((a, b))


def sum_of_maps(maps, rig: Rig, dom, cod) -> LinearMap:
    return add_maps(*maps) if maps else zero_map(dom, cod, rig)


# ---------------------------------------------------------------------------
# equality


@dataclass
class Comparison:
    equal: bool
    witness: object = None
    lhs: dict | None = None
    rhs: dict | None = None
    checked: int = 0
    frontier_limited: bool = False

    def __bool__(self):
        return self.equal


def maps_equal(f: LinearMap, g: LinearMap, labels) -> Comparison:
    """Compare f and g on each label in order; report the first disagreement.

    ``labels`` is either a :class:`Truncation` (enumerate the domain) or an
    explicit iterable of domain basis labels.
    """
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ObjectMismatch(f"cannot compare {f!r} with {g!r}")
    if isinstance(labels, Truncation):
        labels = basis(f.domain, labels)
    n = 0
    limited = False
    for lab in labels:
        try:
            a, b = f(lab), g(lab)
        except FrontierError:
            limited = True
            continue
        n += 1
        if a != b:
            return Comparison(False, lab, dict(a), dict(b), n)
    return Comparison(True, checked=n, frontier_limited=limited)


# ---------------------------------------------------------------------------
# exact rank


def rank_and_kernel(f: LinearMap, dom_labels, cod_labels):
    """Rank of f restricted to the span of ``dom_labels`` (over ℚ), and one kernel vector.

    Images must lie in the span of ``cod_labels``.  Entries are read as
    rationals, so this is only meaningful for ℚ and ℤ.
    """
    from fractions import Fraction

    index = {lab: k for k, lab in enumerate(cod_labels)}
    pivots = {}    # pivot column -> (row, combination of dom labels); the pivot is the row's least column
    kernel = None
    for src in dom_labels:
        row = {}
        for lab, c in f(src).items():
            if lab not in index:
                raise ValueError(f"image of {src!r} leaves the given codomain piece")
            row[index[lab]] = Fraction(c)
        combo = {src: Fraction(1)}
        for pivot in sorted(pivots):
            prow, pcombo = pivots[pivot]
            c = row.get(pivot)
            if c:
                factor = c / prow[pivot]
                for col, v in prow.items():
                    nv = row.get(col, 0) - factor * v
                    if nv:
                        row[col] = nv
                    else:
                        row.pop(col, None)
                for lab, v in pcombo.items():
                    nv = combo.get(lab, 0) - factor * v
                    if nv:
                        combo[lab] = nv
                    else:
                        combo.pop(lab, None)
        if row:
            pivots[min(row)] = (row, combo)
        elif kernel is None:
            kernel = combo
    return len(pivots), kernel
