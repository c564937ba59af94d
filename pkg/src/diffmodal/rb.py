"""Free Rota-Baxter algebras of weight zero over Sym(M) and over Diff(M).

The carrier is RB(A) = Sh(A) ⊗ A with A = Sym M (model ``rb``) or A = Diff M
(model ``rb-diff``).  A basis label is ``('t', (word, monomial))``; the word
is a tuple of monomials of A.  The product ◊ shuffles the words and
multiplies the monomials, and

    P(w ⊗ b) = (w, b) ⊗ 1

appends b to the word.  The counit of the free Rota-Baxter adjunction folds
a word of elements of an algebra B with operator Q:

    ω((b1, ..., bn) ⊗ b) = Q(...Q(Q(b1) b2)... bn) b

and the monad multiplication is (Sh(ev) ⊗ ev);ω, where ev evaluates a free
(differential) algebra over RB(A) inside RB(A).

In the opposite orientation this is a coalgebra modality with the deriving
transformation 1 ⊗ d (over Sym).  Deconcatenation ⊗ unshuffle is registered
as a candidate ∇; it is not cocommutative.
"""

from __future__ import annotations

from functools import lru_cache

from . import diff
from . import linalg as la
from . import sym
from .core import ModelParams, ModuleModel

EMPTY = sym.EMPTY
EMPTY_WORD = ("w", ())


@lru_cache(maxsize=None)
def shuffles(u: tuple, v: tuple) -> dict:
    """Shuffle product of two words as {word: multiplicity}."""
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out = {}
    for s, c in shuffles(u[:-1], v).items():
        key = s + (u[-1],)
        out[key] = out.get(key, 0) + c
    for s, c in shuffles(u, v[:-1]).items():
        key = s + (v[-1],)
        out[key] = out.get(key, 0) + c
    return out


def _rb_label(w, b):
    return ("t", (("w", tuple(w)), b))


class Inner:
    """The algebra A = Sym M or Diff M that the Rota-Baxter construction is applied to."""

    def __init__(self, kind, rig, copies):
        self.kind = kind
        self.rig = rig
        self.copies = copies

    def gens(self, x):
        return x if self.kind == "sym" else la.Copies(x, self.copies)

    def carrier(self, x):
        return la.Sym(self.gens(x))

    def lift(self, f):
        if self.kind == "sym":
            return sym.sym_lift(f)
        return sym.sym_lift(diff.copies_map(f, self.copies))

    def unit_of(self, label):
        return ("m", (label,)) if self.kind == "sym" else ("m", (la.copy(0, label),))

    def deriving(self, x):
        if self.kind == "sym":
            return sym.deriving(x, self.rig)
        return diff.candidate_deriving(x, self.rig, self.copies)

    def differential(self, x):
        return diff.differential(x, self.rig, self.copies)


class RotaBaxter:
    """Linear maps of the free Rota-Baxter monad over ``inner``; all indexed by a module x."""

    def __init__(self, inner: Inner):
        self.inner = inner
        self.rig = inner.rig
        self._cache = {}

    def _memo(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def carrier(self, x):
        return la.tensor_module(la.Sh(self.inner.carrier(x)), self.inner.carrier(x))

    # algebra structure on labels and vectors

    def diamond_labels(self, l1, l2) -> dict:
        (w1, b1), (w2, b2) = l1[1], l2[1]
        b = ("m", sym._merge(b1[1], b2[1]))
        out = {}
        for s, c in shuffles(w1[1], w2[1]).items():
            v = self.rig.from_int(c)
            if v:
                out[_rb_label(s, b)] = v
        return out

    def diamond(self, v1: dict, v2: dict) -> dict:
        rig = self.rig
        add, mul = la.fast_ops(rig)
        out = {}
        for l1, c1 in v1.items():
            for l2, c2 in v2.items():
                la.vec_add_into(out, self.diamond_labels(l1, l2), rig, mul(c1, c2))
        return out

    def p_vec(self, vec: dict) -> dict:
        out = {}
        for lab, c in vec.items():
            w, b = lab[1]
            key = _rb_label(w[1] + (b,), EMPTY)
            la.vec_add_into(out, {key: c}, self.rig)
        return out

    def one(self):
        return {_rb_label((), EMPTY): self.rig.one}

    # linear maps

    def product(self, x):
        """◊: RB ⊗ RB -> RB."""
        def build():
            t = self.carrier(x)
            return la.LinearMap(la.tensor_module(t, t), t, self.rig,
                                lambda l: self.diamond_labels(("t", l[1][:2]), ("t", l[1][2:])),
                                name="◊")
        return self._memo(("prod", x), build)

    def unit(self, x):
        return la.LinearMap(la.K, self.carrier(x), self.rig, lambda l: self.one(), name="1")

    def operator(self, x):
        """P: RB -> RB."""
        t = self.carrier(x)
        return la.LinearMap(t, t, self.rig, lambda l: self.p_vec({l: self.rig.one}), name="P")

    def differential(self, x):
        """D(w ⊗ b) = w ⊗ D(b) + (w without its last letter) ⊗ (last letter · b), over Diff only."""
        dd = self.inner.differential(x)
        rig = self.rig

        def fn(l):
            w, b = l[1]
            out = {_rb_label(w[1], lab): c for lab, c in dd(b).items()}
            if w[1]:
                la.vec_add_into(out, {_rb_label(w[1][:-1], ("m", sym._merge(w[1][-1][1], b[1]))): rig.one}, rig)
            return out

        t = self.carrier(x)
        return self._memo(("D", x), lambda: la.LinearMap(t, t, rig, fn, name="D_RB"))

    def fold(self, letters, last: dict) -> dict:
        """ω on (letters) ⊗ last, with letters and last given as vectors of RB."""
        if not letters:
            return dict(last)
        acc = self.p_vec(letters[0])
        for v in letters[1:]:
            acc = self.p_vec(self.diamond(acc, v))
        return self.diamond(acc, last)

    def omega(self, x):
        """ω: Sh(RB) ⊗ RB -> RB for the free Rota-Baxter algebra RB over x."""
        t = self.carrier(x)

        def fn(l):
            word = l[1][0]
            last = ("t", l[1][1:])
            return self.fold([{e: self.rig.one} for e in word[1]], {last: self.rig.one})

        return self._memo(("omega", x), lambda: la.LinearMap(la.tensor_module(la.Sh(t), t), t,
                                                             self.rig, fn, name="ω"))

    def evaluation(self, x):
        """ev: A(RB) -> RB, the algebra (and for Diff, derivation) extension of the identity."""
        t = self.carrier(x)
        rig = self.rig
        if self.inner.kind == "sym":
            def entry(e):
                return {e: rig.one}
        else:
            dmap = self.differential(x)
            power = diff.derivation_powers(dmap)

            def entry(e):
                return power(e[1], e[2])

        def fn(m):
            acc = self.one()
            for e in m[1]:
                acc = self.diamond(acc, entry(e))
            return acc

        return self._memo(("ev", x), lambda: la.LinearMap(self.inner.carrier(t), t, rig, fn, name="ev"))

    def monad_unit(self, x):
        inner = self.inner
        return la.LinearMap(x, self.carrier(x), self.rig,
                            lambda l: {_rb_label((), inner.unit_of(l)): self.rig.one}, name="ι")

    def monad_mult(self, x):
        """(Sh(ev) ⊗ ev);ω: RB RB x -> RB x."""
        def build():
            ev = self.evaluation(x)
            return la.compose(la.tensor(shuffle_lift(ev), ev), self.omega(x))
        return self._memo(("mu", x), build)

    def lift(self, f):
        g = self.inner.lift(f)
        return la.tensor(shuffle_lift(g), g)

    def deconcatenation(self, x):
        """Candidate ∇: deconcatenate the word, unshuffle the monomial, interleave."""
        rig = self.rig
        comult = sym.comultiplication(self.inner.gens(x), rig)
        t = self.carrier(x)

        def fn(l):
            w, b = l[1]
            out = {}
            for lab, c in comult(b).items():
                b1, b2 = lab[1]
                for i in range(len(w[1]) + 1):
                    out[("t", (("w", w[1][:i]), b1, ("w", w[1][i:]), b2))] = c
            return out

        return la.LinearMap(t, la.tensor_module(t, t), rig, fn, name="∇RB")

    def counit(self, x):
        return la.LinearMap(self.carrier(x), la.K, self.rig,
                            lambda l: {la.UNIT: self.rig.one} if l == _rb_label((), EMPTY) else {},
                            name="uRB")

    def deriving(self, x):
        """1 ⊗ d: RB x -> Sh(A x) ⊗ A x ⊗ x."""
        return la.tensor(la.identity(la.Sh(self.inner.carrier(x)), self.rig), self.inner.deriving(x))


def shuffle_lift(f: la.LinearMap) -> la.LinearMap:
    """Sh(f): a word goes to the word of images, expanded letter by letter."""
    rig = f.rig
    add, mul = la.fast_ops(rig)

    def fn(w):
        partial = {(): rig.one}
        for e in w[1]:
            img = f(e)
            if not img:
                return {}
            nxt = {}
            for s, c in partial.items():
                for lab, c2 in img.items():
                    key = s + (lab,)
                    v = mul(c, c2)
                    nxt[key] = add(nxt[key], v) if key in nxt else v
            partial = {k: v for k, v in nxt.items() if v}
        return {("w", k): v for k, v in partial.items()}

    return la.LinearMap(la.Sh(f.domain), la.Sh(f.codomain), rig, fn, name=f"Sh({f.name})")


# ---------------------------------------------------------------------------
# models


def rb_families(ops: RotaBaxter):
    return {
        "delta": ops.monad_mult,
        "eps": ops.monad_unit,
        "comult": ops.product,
        "counit": ops.unit,
        "mult": ops.deconcatenation,
        "unit": ops.counit,
        "d": ops.deriving,
    }


def _builders(ops: RotaBaxter):
    from .lawcheck import Check

    def rota_baxter(model):
        a = model.base("A")
        t = ops.carrier(a)
        one = la.identity(t, ops.rig)
        p, prod = ops.operator(a), ops.product(a)
        lhs = la.compose(la.tensor(p, p), prod)
        rhs = la.add_maps(la.compose(la.tensor(one, p), prod, p), la.compose(la.tensor(p, one), prod, p))
        return [Check("", la.maps_equal(lhs, rhs, model.truncation(lhs.domain)))]

    def omega_mult(model):
        a = model.base("A")
        t = ops.carrier(a)
        sh, one = la.Sh(t), la.identity(t, ops.rig)
        lhs = la.compose(la.tensor(la.identity(sh, ops.rig), ops.product(a)), ops.omega(a))
        rhs = la.compose(la.tensor(ops.omega(a), one), ops.product(a))
        return [Check("", la.maps_equal(lhs, rhs, model.truncation(lhs.domain)))]

    def omega_deriving(model):
        a = model.base("A")
        t = ops.carrier(a)
        sh = la.identity(la.Sh(t), ops.rig)
        inner_sh = la.identity(la.Sh(ops.inner.carrier(a)), ops.rig)
        lhs = la.compose(ops.omega(a), ops.deriving(a))
        rhs = la.compose(la.tensor(sh, inner_sh, ops.inner.deriving(a)),
                         la.tensor(ops.omega(a), la.identity(a, ops.rig)))
        return [Check("", la.maps_equal(lhs, rhs, model.truncation(lhs.domain)))]

    def operator_inverse(model):
        a = model.base("A")
        t = ops.carrier(a)
        dd = ops.differential(a)
        trunc = model.truncation(t)
        one = la.identity(t, ops.rig)
        out = [Check("P;D = id", la.maps_equal(la.compose(ops.operator(a), dd), one, trunc))]
        prod = ops.product(a)
        lhs = la.compose(prod, dd)
        rhs = la.add_maps(la.compose(la.tensor(dd, one), prod), la.compose(la.tensor(one, dd), prod))
        out.append(Check("D is a derivation of ◊", la.maps_equal(lhs, rhs, model.truncation(lhs.domain))))
        return out

    if ops.inner.kind == "sym":
        return {"rb-rota-baxter": rota_baxter, "rb-omega-mult": omega_mult,
                "rb-omega-deriving": omega_deriving}
    return {"rb-rota-baxter": rota_baxter, "rb-omega-mult": omega_mult,
            "rbdiff-pd": operator_inverse}


def _truncation(params):
    size = params.mset_size if params.mset_size is not None else 2

    def trunc(module):
        deg = params.degree if la.depth(module) <= 2 else params.nested
        return la.Truncation(deg, size, params.word_len)

    return trunc


def rb_model(params: ModelParams | None = None, name="rb") -> ModuleModel:
    """Free Rota-Baxter modality over Sym.  Monomial size defaults to 2 when unset."""
    params = params or ModelParams(dim=1)
    ops = RotaBaxter(Inner("sym", params.rig, params.copies))
    return ModuleModel(name, params, rb_families(ops), ops.carrier, ops.lift,
                       builders=_builders(ops), candidates=("mult", "unit"),
                       truncation=_truncation(params))


def rb_diff_model(params: ModelParams | None = None, name="rb-diff") -> ModuleModel:
    """Free differential Rota-Baxter modality; ``d`` is the candidate 1 ⊗ d;(1 ⊗ π₀)."""
    params = params or ModelParams(dim=1)
    ops = RotaBaxter(Inner("diff", params.rig, params.copies))
    return ModuleModel(name, params, rb_families(ops), ops.carrier, ops.lift,
                       builders=_builders(ops), candidates=("mult", "unit", "d"),
                       truncation=_truncation(params))
