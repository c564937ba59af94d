"""Structure-to-structure builders.

Everything here is written against the generic model interface, so the same
builders work on module models, on derived models and on the biproduct
completion.  Families are callables ``(model, *objs) -> arrow``, ready for
:func:`diffmodal.core.with_structure`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import linalg as la
from .scalars import INTEGERS, QQ, RATIONALS
from .core import DelegatingModel, ModalityModel, TypeCheckError, with_structure


# ---------------------------------------------------------------------------
# monoidal <-> additive bialgebra


def _nabla(m, x):
    bx = m.bang(x)
    eps, e = m.structure("eps", x), m.structure("counit", x)
    dx = m.structure("delta", x)
    split = m.add(m.tensor(eps, e), m.tensor(e, eps))
    return m.compose(m.tensor(dx, dx), m.structure("mtensor", bx, bx), m.lift(split))


def _u(m, x):
    return m.compose(m.structure("munit"), m.lift(m.zero(m.unit_obj(), x)))


def nabla_from_monoidal(model=None):
    """∇ := (δ⊗δ);m;!(ε⊗e + e⊗ε) and u := m_K;!(0)."""
    return {"mult": _nabla, "unit": _u}


def _mtensor(m, x, y):
    bx, by = m.bang(x), m.bang(y)
    pair = m.ot(bx, by)
    ux, uy = m.structure("unit", x), m.structure("unit", y)
    ex, ey = m.structure("counit", x), m.structure("counit", y)
    epsx, epsy = m.structure("eps", x), m.structure("eps", y)
    left = m.lift(m.tensor(m.identity(bx), uy))
    right = m.lift(m.tensor(ux, m.identity(by)))
    regroup = m.lift(m.tensor(m.lift(m.tensor(epsx, ey)), m.lift(m.tensor(ex, epsy))))
    return m.compose(m.tensor(m.structure("delta", x), m.structure("delta", y)),
                     m.tensor(left, right),
                     m.structure("mult", pair),
                     m.structure("delta", pair),
                     m.lift(m.structure("comult", pair)),
                     regroup,
                     m.lift(m.tensor(epsx, epsy)))


def _munit(m):
    k = m.unit_obj()
    return m.compose(m.structure("unit", k), m.structure("delta", k), m.lift(m.structure("counit", k)))


def m_from_additive(model=None):
    """m_⊗ := (δ⊗δ);(!(1⊗u)⊗!(u⊗1));∇;δ;!(Δ);!(!(ε⊗e)⊗!(e⊗ε));!(ε⊗ε) and m_K := u;δ;!(e)."""
    return {"mtensor": _mtensor, "munit": _munit}


def derive_monoidal(model, name=None):
    return with_structure(model, name or f"{model.name}+derived-m", m_from_additive())


def derive_nabla(model, name=None):
    return with_structure(model, name or f"{model.name}+derived-nabla", nabla_from_monoidal())


# ---------------------------------------------------------------------------
# deriving transformation <-> codereliction


def _d_from_eta(m, x):
    return m.compose(m.tensor(m.identity(m.bang(x)), m.structure("eta", x)), m.structure("mult", x))


def _eta_from_d(m, x):
    return m.compose(m.tensor(m.structure("unit", x), m.identity(x)), m.structure("d", x))


def d_from_eta(model=None):
    """d := (1 ⊗ η);∇."""
    return {"d": _d_from_eta}


def eta_from_d(model=None):
    """η := (u ⊗ 1);d."""
    return {"eta": _eta_from_d}


# ---------------------------------------------------------------------------
# p/i maps and Seely maps


def pi_i_maps(model, a, b):
    """p₀ = ε⊗e, p₁ = e⊗ε, i₀ = η⊗u, i₁ = u⊗η."""
    m = model
    p0 = m.tensor(m.structure("eps", a), m.structure("counit", b))
    p1 = m.tensor(m.structure("counit", a), m.structure("eps", b))
    i0 = m.tensor(m.structure("eta", a), m.structure("unit", b))
    i1 = m.tensor(m.structure("unit", a), m.structure("eta", b))
    return p0, p1, i0, i1


def seely(model, a, b, side=None):
    """(χ, χ⁻¹, χ_T, χ_T⁻¹) with χ := Δ;(!π₀ ⊗ !π₁) and χ_T := e.

    The inverses come from the additive side ((!ι₀ ⊗ !ι₁);∇ and u) when ∇ and
    u are registered, otherwise from the monoidal side; ``side`` forces one.
    """
    m = model
    ab = m.prod(a, b)
    t = m.terminal()
    chi = m.compose(m.structure("comult", ab),
                    m.tensor(m.lift(m.proj(0, (a, b))), m.lift(m.proj(1, (a, b)))))
    chi_t = m.structure("counit", t)
    if side is None:
        side = "additive" if m.has("mult") and m.has("unit") else "monoidal"
    if side == "none":
        return chi, None, chi_t, None
    if side == "additive":
        inv = m.compose(m.tensor(m.lift(m.inj(0, (a, b))), m.lift(m.inj(1, (a, b)))),
                        m.structure("mult", ab))
        inv_t = m.structure("unit", t)
    else:
        split = m.add(m.compose(m.tensor(m.structure("eps", a), m.structure("counit", b)), m.inj(0, (a, b))),
                      m.compose(m.tensor(m.structure("counit", a), m.structure("eps", b)), m.inj(1, (a, b))))
        inv = m.compose(m.tensor(m.structure("delta", a), m.structure("delta", b)),
                        m.structure("mtensor", m.bang(a), m.bang(b)), m.lift(split))
        inv_t = m.compose(m.structure("munit"), m.lift(m.zero(m.unit_obj(), t)))
    return chi, inv, chi_t, inv_t


@dataclass(frozen=True)
class SeelyObstruction:
    """Why χ = Δ;(!π₀ ⊗ !π₁) cannot be invertible, found in one degree piece."""

    degree: int
    kind: str            # "dimension" or "kernel"
    detail: str


def seely_obstruction(model, degree=None):
    """Look for a degree piece on which χ at (A, B) is not bijective.

    χ preserves letter degree, so if it were invertible its inverse would be
    graded too and every finite piece would be matched bijectively.  Pieces
    are taken without size caps.  Ranks are computed over ℚ; a rational
    kernel vector clears to an integral one, so a kernel refutes ℤ as well.
    Other rigs are limited to the dimension count.  Returns None when nothing is found
    and raises ValueError if χ turns out not to be graded.
    """
    a, b = model.base("A"), model.base("B")
    chi = seely(model, a, b, side="none")[0].lin
    rational = model.rig.kind in (RATIONALS, INTEGERS)
    top = model.params.degree if degree is None else degree
    for d in range(top + 1):
        window = la.Truncation(d)
        src = la.graded_basis(chi.domain, d, window)
        dst = la.graded_basis(chi.codomain, d, window)
        if any(la.degree(lab) != d for x in src for lab in chi(x)):
            raise ValueError(f"χ does not preserve degree {d}")
        if len(src) != len(dst):
            return SeelyObstruction(d, "dimension", f"degree {d}: {len(src)} vs {len(dst)} basis elements")
        if rational and src:
            rank, kernel = la.rank_and_kernel(chi, src, dst)
            if kernel is not None:
                return SeelyObstruction(d, "kernel", f"degree {d}: rank {rank} of {len(src)}, "
                                                     f"kernel vector {la.render_vector(kernel, QQ)}")
    return None


# ---------------------------------------------------------------------------
# the non-additive modality !^B A = !B ⊗ !A


class BangB(DelegatingModel):
    """!^B over an additive bialgebra modality, for a fixed object B."""

    def __init__(self, inner, b_obj, name=None):
        name = name or f"{inner.name}+opB"
        if not inner.has("mtensor"):
            inner = derive_monoidal(inner)
        super().__init__(inner, name)
        self.b = b_obj
        self.bb = inner.bang(b_obj)
        keep = {"delta", "eps", "comult", "counit", "mult", "unit", "eta", "d"}
        self.symbols = frozenset(s for s in inner.symbols if s in keep)
        self.candidate_symbols = inner.candidate_symbols

    def bang(self, obj):
        return self.inner.ot(self.bb, self.inner.bang(obj))

    def lift(self, f):
        i = self.inner
        return i.tensor(i.identity(self.bb), i.lift(f))

    def _build(self, symbol, *objs):
        i, b, bb = self.inner, self.b, self.bb
        s = i.structure
        x = objs[0] if objs else None
        if symbol == "delta":
            bx = i.bang(x)
            return i.compose(i.tensor(s("comult", b), i.identity(bx)),
                             i.tensor(i.identity(bb), s("delta", b), s("delta", x)),
                             i.tensor(i.identity(bb), s("mtensor", bb, bx)))
        if symbol == "eps":
            return i.tensor(s("counit", b), s("eps", x))
        if symbol == "comult":
            bx = i.bang(x)
            return i.compose(i.tensor(s("comult", b), s("comult", x)),
                             i.tensor(i.identity(bb), i.symmetry(bb, bx), i.identity(bx)))
        if symbol == "counit":
            return i.tensor(s("counit", b), s("counit", x))
        if symbol == "mult":
            bx = i.bang(x)
            return i.compose(i.tensor(i.identity(bb), i.symmetry(bx, bb), i.identity(bx)),
                             i.tensor(s("mult", b), s("mult", x)))
        if symbol == "unit":
            return i.tensor(s("unit", b), s("unit", x))
        if symbol == "eta":
            return i.tensor(s("unit", b), s("eta", x))
        if symbol == "d":
            return i.tensor(i.identity(bb), s("d", x))
        raise KeyError(symbol)


def nonadditive_B(model, b_obj=None, dim=1, name=None):
    """The modality !^B; by default B is a fresh base module of dimension ``dim``."""
    if b_obj is None:
        b_obj = la.Base("E", dim)
    return BangB(model, b_obj, name)


# ---------------------------------------------------------------------------
# biproduct completion


@dataclass(frozen=True)
class BiproductObject:
    """A list (A₁, ..., Aₙ) of objects of the underlying category."""

    components: tuple

    def __len__(self):
        return len(self.components)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class MatrixMap:
    """A matrix [f_ij] with f_ij: Aᵢ -> Bⱼ; absent entries are zero."""

    dom: BiproductObject
    cod: BiproductObject
    entries: tuple = field(compare=False)    # ((i, j, arrow), ...)

    def entry(self, i, j):
        for a, b, f in self.entries:
            if (a, b) == (i, j):
                return f
        return None


class MatrixModel(ModalityModel):
    """The biproduct completion B[X] of an additive bialgebra modality.

    !(A₁, ..., Aₙ) is the one-element list (!A₁ ⊗ ... ⊗ !Aₙ), so the Seely
    maps are identities on the nose.  Base objects are lists: by default A is
    (A, B), B is (C) and C is (B); the empty list is the terminal object T.
    """

    DEFAULT_LISTS = {"A": ("A", "B"), "B": ("C",), "C": ("B",)}

    def __init__(self, inner, name=None, lists=None):
        self.inner = inner
        self.name = name or f"{inner.name}+biprod"
        self.params = inner.params
        self.lists = dict(lists or self.DEFAULT_LISTS)
        syms = {"delta", "eps", "comult", "counit", "mult", "unit", "mtensor", "munit"}
        if inner.has("eta"):
            syms |= {"eta", "d"}
        self.symbols = frozenset(syms)
        self.law_builders = {}

    # objects
    def base(self, var):
        return BiproductObject(tuple(self.inner.base(v) for v in self.lists[var]))

    def unit_obj(self):
        return BiproductObject((self.inner.unit_obj(),))

    def terminal(self):
        return BiproductObject(())

    def ot(self, *objs):
        comps = [()]
        for o in objs:
            comps = [c + (x,) for c in comps for x in o.components]
        return BiproductObject(tuple(self.inner.ot(*c) for c in comps))

    def prod(self, *objs):
        return BiproductObject(tuple(c for o in objs for c in o.components))

    def bang(self, obj):
        i = self.inner
        return BiproductObject((i.ot(*(i.bang(a) for a in obj.components)),))

    # arrows
    def _matrix(self, dom, cod, grid):
        return MatrixMap(dom, cod, tuple((i, j, f) for (i, j), f in sorted(grid.items())
                                         if f is not None))

    def _single(self, dom, cod, f):
        return self._matrix(dom, cod, {(0, 0): f})

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def identity(self, obj):
        i = self.inner
        return self._matrix(obj, obj, {(k, k): i.identity(a) for k, a in enumerate(obj.components)})

    def compose(self, *fs):
        for n, (f, g) in enumerate(zip(fs, fs[1:])):
            if f.cod != g.dom:
                raise TypeCheckError(f"link {n}", f"codomain {f.cod} does not match domain {g.dom}")
        out = fs[0]
        for g in fs[1:]:
            out = self._compose2(out, g)
        return out

    def _compose2(self, f, g):
        grid = {}
        for i, k, a in f.entries:
            for k2, j, b in g.entries:
                if k == k2:
                    term = self.inner.compose(a, b)
                    grid[(i, j)] = self.inner.add(grid[(i, j)], term) if (i, j) in grid else term
        return self._matrix(f.dom, g.cod, grid)

    def tensor(self, *fs):
        if not fs:
            return self.identity(self.unit_obj())
        out = fs[0]
        for g in fs[1:]:
            n2, m2 = len(g.dom), len(g.cod)
            grid = {(i1 * n2 + i2, j1 * m2 + j2): self.inner.tensor(a, b)
                    for i1, j1, a in out.entries for i2, j2, b in g.entries}
            out = self._matrix(self.ot(out.dom, g.dom), self.ot(out.cod, g.cod), grid)
        return out

    def add(self, *fs):
        for f in fs[1:]:
            if (f.dom, f.cod) != (fs[0].dom, fs[0].cod):
                raise TypeCheckError("", f"cannot add {f.dom}->{f.cod} to {fs[0].dom}->{fs[0].cod}")
        grid = {}
        for f in fs:
            for i, j, a in f.entries:
                grid[(i, j)] = self.inner.add(grid[(i, j)], a) if (i, j) in grid else a
        return self._matrix(fs[0].dom, fs[0].cod, grid)

    def zero(self, x, y):
        return MatrixMap(x, y, ())

    def permute(self, objs, perm):
        objs = tuple(objs)
        sizes = [len(o) for o in objs]
        grid = {}
        for idx in itertools.product(*(range(s) for s in sizes)):
            comps = [o.components[k] for o, k in zip(objs, idx)]
            src = _flat(idx, sizes)
            dst = _flat([idx[p] for p in perm], [sizes[p] for p in perm])
            grid[(src, dst)] = self.inner.permute(comps, perm)
        return self._matrix(self.ot(*objs), self.ot(*(objs[p] for p in perm)), grid)

    def symmetry(self, x, y):
        return self.permute((x, y), (1, 0))

    def inj(self, i, objs):
        objs = tuple(objs)
        off = sum(len(o) for o in objs[:i])
        grid = {(k, off + k): self.inner.identity(a) for k, a in enumerate(objs[i].components)}
        return self._matrix(objs[i], self.prod(*objs), grid)

    def proj(self, i, objs):
        objs = tuple(objs)
        off = sum(len(o) for o in objs[:i])
        grid = {(off + k, k): self.inner.identity(a) for k, a in enumerate(objs[i].components)}
        return self._matrix(self.prod(*objs), objs[i], grid)

    # fans
    def _comult_n(self, a, n):
        i = self.inner
        if n == 0:
            return i.structure("counit", a)
        out = i.identity(i.bang(a))
        for k in range(1, n):
            rest = [i.identity(i.bang(a))] * (k - 1)
            out = i.compose(out, i.tensor(i.structure("comult", a), *rest))
        return out

    def _mult_n(self, a, n):
        i = self.inner
        if n == 0:
            return i.structure("unit", a)
        out = i.identity(i.bang(a))
        for k in range(1, n):
            rest = [i.identity(i.bang(a))] * (k - 1)
            out = i.compose(i.tensor(i.structure("mult", a), *rest), out)
        return out

    def _regroup(self, objs, n, m):
        """(i, j)-ordered tensor of objs[i*m+j] -> (j, i)-ordered."""
        perm = [i * m + j for j in range(m) for i in range(n)]
        if len(perm) <= 1:
            return self.inner.identity(self.inner.ot(*objs))
        return self.inner.permute(objs, perm)

    def lift(self, f):
        i = self.inner
        a, b = f.dom.components, f.cod.components
        n, m = len(a), len(b)
        fan_out = i.tensor(*(self._comult_n(x, m) for x in a))
        entries = []
        for r in range(n):
            for c in range(m):
                g = f.entry(r, c)
                entries.append(i.lift(g if g is not None else i.zero(a[r], b[c])))
        mid = i.tensor(*entries)
        regroup = self._regroup([i.bang(b[c]) for r in range(n) for c in range(m)], n, m)
        fan_in = i.tensor(*(self._mult_n(y, n) for y in b))
        return self._single(self.bang(f.dom), self.bang(f.cod), i.compose(fan_out, mid, regroup, fan_in))

    def _slot(self, comps, k):
        """!A_k -> !A₁ ⊗ ... ⊗ !Aₙ, units in the other slots."""
        i = self.inner
        return i.tensor(*(i.identity(i.bang(a)) if j == k else i.structure("unit", a)
                          for j, a in enumerate(comps)))

    def _pick(self, comps, k):
        """!A₁ ⊗ ... ⊗ !Aₙ -> A_k, counits in the other slots."""
        i = self.inner
        return i.tensor(*(i.structure("eps", a) if j == k else i.structure("counit", a)
                          for j, a in enumerate(comps)))

    def _build(self, symbol, *objs):
        i = self.inner
        x = objs[0] if objs else None
        if symbol in ("mtensor", "munit"):
            return (_mtensor(self, *objs) if symbol == "mtensor" else _munit(self))
        if symbol == "d":
            return _d_from_eta(self, x)
        comps = x.components
        n = len(comps)
        bangs = [i.bang(a) for a in comps]
        big = i.ot(*bangs)
        bx = self.bang(x)
        if symbol == "delta":
            spread = i.tensor(*(i.compose(i.structure("delta", a), i.lift(self._slot(comps, k)))
                                for k, a in enumerate(comps)))
            pick = i.tensor(*(i.lift(self._pick(comps, k)) for k in range(n)))
            lin = i.compose(spread, self._mult_n(big, n), i.structure("delta", big),
                            i.lift(self._comult_n(big, n)), i.lift(pick))
            return self._single(bx, self.bang(bx), lin)
        if symbol == "eps":
            return self._matrix(bx, x, {(0, k): self._pick(comps, k) for k in range(n)})
        if symbol == "eta":
            grid = {(k, 0): i.tensor(*(i.structure("eta", a) if j == k else i.structure("unit", a)
                                       for j, a in enumerate(comps))) for k in range(n)}
            return self._matrix(x, bx, grid)
        if symbol == "comult":
            lin = i.compose(i.tensor(*(i.structure("comult", a) for a in comps)),
                            self._regroup([b for b in bangs for _ in range(2)], n, 2))
            return self._single(bx, self.ot(bx, bx), lin)
        if symbol == "mult":
            lin = i.compose(self._regroup([b for _ in range(2) for b in bangs], 2, n),
                            i.tensor(*(i.structure("mult", a) for a in comps)))
            return self._single(self.ot(bx, bx), bx, lin)
        if symbol == "counit":
            return self._single(bx, self.unit_obj(), i.tensor(*(i.structure("counit", a) for a in comps)))
        if symbol == "unit":
            return self._single(self.unit_obj(), bx, i.tensor(*(i.structure("unit", a) for a in comps)))
        raise KeyError(symbol)

    # checking
    def equal(self, f, g):
        if (f.dom, f.cod) != (g.dom, g.cod):
            raise TypeCheckError("", f"sides differ in type: {f.dom}->{f.cod} vs {g.dom}->{g.cod}")
        i = self.inner
        checked, limited = 0, False
        for r, a in enumerate(f.dom.components):
            for c, b in enumerate(f.cod.components):
                lhs, rhs = f.entry(r, c), g.entry(r, c)
                if lhs is None and rhs is None:
                    continue
                lhs = lhs if lhs is not None else i.zero(a, b)
                rhs = rhs if rhs is not None else i.zero(a, b)
                cmp = i.equal(lhs, rhs)
                checked += cmp.checked
                limited = limited or cmp.frontier_limited
                if not cmp.equal:
                    return la.Comparison(False, (r, c, cmp.witness), cmp.lhs, cmp.rhs, checked)
        return la.Comparison(True, checked=checked, frontier_limited=limited)

    def probes(self, x, y):
        pools = {(r, c): self.inner.probes(a, b)
                 for r, a in enumerate(x.components) for c, b in enumerate(y.components)}
        out = []
        for k in range(self.params.probes):
            grid = {}
            for (r, c), pool in pools.items():
                pname, arrow = pool[(k + r + c) % len(pool)]
                if pname != "zero":
                    grid[(r, c)] = arrow
            out.append((f"p{k}", self._matrix(x, y, grid)))
        if x == y:
            out.append(("id", self.identity(x)))
        out.append(("zero", self.zero(x, y)))
        return out

    def truncation(self, module):
        return self.inner.truncation(module)

    def render_witness(self, label):
        r, c, lab = label
        return f"[{r},{c}] {self.inner.render_witness(lab)}"

    def render_value(self, vec):
        return self.inner.render_value(vec)


def _flat(idx, sizes):
    out = 0
    for k, s in zip(idx, sizes):
        out = out * s + k
    return out


def biproduct_completion(model, name=None, lists=None):
    """B[X] over an additive bialgebra modality (lists of length at most 2 by default)."""
    return MatrixModel(model, name, lists)
