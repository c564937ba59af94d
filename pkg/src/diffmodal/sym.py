"""The free symmetric algebra Sym(M) and its modality structure.

All functions here build ordinary linear maps in MOD_R.  ``sym_model``
registers them so that, read in the opposite orientation, they give the
comonad, bialgebra, deriving transformation and codereliction:

    symbol         linear map
    delta          monad_mult     Sym Sym X -> Sym X
    eps            monad_unit     X -> Sym X
    comult         multiplication Sym X ⊗ Sym X -> Sym X
    counit         unit_map       K -> Sym X
    mult           comultiplication (unshuffle)
    unit           counit_map     Sym X -> K
    mtensor        monoidal_tensor Sym(X ⊗ Y) -> Sym X ⊗ Sym Y
    munit          monoidal_unit  Sym K -> K
    d              deriving       Sym X -> Sym X ⊗ X
    eta            codereliction  Sym X -> X
"""

from __future__ import annotations

import itertools
from math import comb

from . import linalg as la
from .core import ModelParams, ModuleModel

EMPTY = ("m", ())


def _merge(a: tuple, b: tuple) -> tuple:
    return tuple(sorted(a + b))


def _counts(entries):
    return [(lab, len(list(grp))) for lab, grp in itertools.groupby(entries)]


def sym_lift(f: la.LinearMap) -> la.LinearMap:
    """Sym(f): a monomial goes to the product of the images of its entries."""
    rig = f.rig
    add, mul = la.fast_ops(rig)

    def fn(m):
        partial = {(): rig.one}
        for e in m[1]:
            img = f(e)
            if not img:
                return {}
            nxt = {}
            for t, c in partial.items():
                for lab, c2 in img.items():
                    key = _merge(t, (lab,))
                    v = mul(c, c2)
                    nxt[key] = add(nxt[key], v) if key in nxt else v
            partial = {k: v for k, v in nxt.items() if v}
        return {("m", k): v for k, v in partial.items()}

    return la.LinearMap(la.Sym(f.domain), la.Sym(f.codomain), rig, fn, name=f"Sym({f.name})")


def multiplication(x, rig) -> la.LinearMap:
    """Sym X ⊗ Sym X -> Sym X, multiset union."""
    dom = la.tensor_module(la.Sym(x), la.Sym(x))
    return la.LinearMap(dom, la.Sym(x), rig,
                        lambda l: {("m", _merge(l[1][0][1], l[1][1][1])): rig.one}, name="∇Sym")


def comultiplication(x, rig) -> la.LinearMap:
    """Sym X -> Sym X ⊗ Sym X, sum over sub-multisets with binomial multiplicities."""
    cod = la.tensor_module(la.Sym(x), la.Sym(x))

    def fn(m):
        groups = _counts(m[1])
        out = {}
        for ks in itertools.product(*(range(c + 1) for _, c in groups)):
            left, right, coef = [], [], 1
            for (lab, c), k in zip(groups, ks):
                left += [lab] * k
                right += [lab] * (c - k)
                coef *= comb(c, k)
            v = rig.from_int(coef)
            if v:
                out[("t", (("m", tuple(left)), ("m", tuple(right))))] = v
        return out

    return la.LinearMap(la.Sym(x), cod, rig, fn, name="ΔSym")


def unit_map(x, rig) -> la.LinearMap:
    """K -> Sym X, 1 goes to the empty monomial."""
    return la.LinearMap(la.K, la.Sym(x), rig, lambda l: {EMPTY: rig.one}, name="uSym")


def counit_map(x, rig) -> la.LinearMap:
    """Sym X -> K, picks out the coefficient of the empty monomial."""
    return la.LinearMap(la.Sym(x), la.K, rig,
                        lambda m: {la.UNIT: rig.one} if not m[1] else {}, name="eSym")


def monad_unit(x, rig) -> la.LinearMap:
    return la.LinearMap(x, la.Sym(x), rig, lambda l: {("m", (l,)): rig.one}, name="ηSym")


def monad_mult(x, rig) -> la.LinearMap:
    """Sym Sym X -> Sym X, flatten a monomial of monomials."""

    def fn(mm):
        entries = []
        for inner in mm[1]:
            entries.extend(inner[1])
        return {("m", tuple(sorted(entries))): rig.one}

    return la.LinearMap(la.Sym(la.Sym(x)), la.Sym(x), rig, fn, name="μSym")


def deriving(x, rig) -> la.LinearMap:
    """Sym X -> Sym X ⊗ X, remove one entry in every possible way."""
    ar = la.arity(x)
    cod = la.tensor_module(la.Sym(x), x)

    def fn(m):
        out = {}
        entries = m[1]
        for lab, c in _counts(entries):
            i = entries.index(lab)
            rest = ("m", entries[:i] + entries[i + 1:])
            v = rig.from_int(c)
            if v:
                out[la.join_atoms((rest,) + la.atoms_of(lab, ar))] = v
        return out

    return la.LinearMap(la.Sym(x), cod, rig, fn, name="dSym")


def codereliction(x, rig) -> la.LinearMap:
    """Sym X -> X, projection onto degree one."""
    return la.LinearMap(la.Sym(x), x, rig,
                        lambda m: {m[1][0]: rig.one} if len(m[1]) == 1 else {}, name="εSym")


def _split_tensor_entry(e, ax, ay):
    atoms = la.atoms_of(e, ax + ay)
    left = la.join_atoms(atoms[:ax]) if ax else la.UNIT
    right = la.join_atoms(atoms[ax:]) if ay else la.UNIT
    return left, right


def monoidal_tensor(x, y, rig) -> la.LinearMap:
    """Sym(X ⊗ Y) -> Sym X ⊗ Sym Y, (a1⊗b1)...(ak⊗bk) goes to (a1...ak) ⊗ (b1...bk)."""
    ax, ay = la.arity(x), la.arity(y)
    dom = la.Sym(la.tensor_module(x, y))
    cod = la.tensor_module(la.Sym(x), la.Sym(y))

    def fn(m):
        xs, ys = [], []
        for e in m[1]:
            a, b = _split_tensor_entry(e, ax, ay)
            xs.append(a)
            ys.append(b)
        return {("t", (("m", tuple(sorted(xs))), ("m", tuple(sorted(ys))))): rig.one}

    return la.LinearMap(dom, cod, rig, fn, name="mSym")


def monoidal_unit(rig) -> la.LinearMap:
    """Sym K -> K, every monomial goes to 1."""
    return la.LinearMap(la.Sym(la.K), la.K, rig, lambda m: {la.UNIT: rig.one}, name="mKSym")


def seely_split(x, y, rig):
    """Sym(X ⊕ Y) -> Sym X ⊗ Sym Y by copy tag, together with its inverse."""
    s = la.DirectSum((x, y))
    pair = la.tensor_module(la.Sym(x), la.Sym(y))

    def split(m):
        xs = tuple(e[2] for e in m[1] if e[1] == 0)
        ys = tuple(e[2] for e in m[1] if e[1] == 1)
        return {("t", (("m", xs), ("m", ys))): rig.one}

    def merge(l):
        xs, ys = l[1]
        entries = [la.copy(0, e) for e in xs[1]] + [la.copy(1, e) for e in ys[1]]
        return {("m", tuple(sorted(entries))): rig.one}

    return (la.LinearMap(la.Sym(s), pair, rig, split, name="split"),
            la.LinearMap(pair, la.Sym(s), rig, merge, name="merge"))


def sym_families(rig):
    return {
        "delta": lambda x: monad_mult(x, rig),
        "eps": lambda x: monad_unit(x, rig),
        "comult": lambda x: multiplication(x, rig),
        "counit": lambda x: unit_map(x, rig),
        "mult": lambda x: comultiplication(x, rig),
        "unit": lambda x: counit_map(x, rig),
        "mtensor": lambda x, y: monoidal_tensor(x, y, rig),
        "munit": lambda: monoidal_unit(rig),
        "d": lambda x: deriving(x, rig),
        "eta": lambda x: codereliction(x, rig),
    }


def sym_model(params: ModelParams | None = None, name="sym") -> ModuleModel:
    params = params or ModelParams()
    return ModuleModel(name, params, sym_families(params.rig), la.Sym, sym_lift)
