"""The free differential algebra Diff(M) = Sym(⊕_n M) of weight zero.

Generators are tagged copies ``('c', n, g)``; the derivation D raises the tag
of one entry at a time.  The monad (Diff, ν, α) read in the opposite
orientation is an additive bialgebra modality, but no deriving transformation
exists.  ``refutation_composites`` evaluates the two composites that the
chain rule would force to agree for a candidate of the form d;(1 ⊗ f̂).

Tags are unbounded during evaluation; the copy bound K only limits which
generators are enumerated when laws are checked.
"""

from __future__ import annotations

from . import linalg as la
from . import sym
from .core import ModelParams, ModuleModel


class InvalidCandidate(ValueError):
    pass


def carrier(m, copies: int):
    return la.Sym(la.Copies(m, copies))


def copies_map(f: la.LinearMap, copies: int) -> la.LinearMap:
    """⊕f on tagged copies."""
    rig = f.rig

    def fn(l):
        return {la.copy(l[1], lab): c for lab, c in f(l[2]).items()}

    return la.LinearMap(la.Copies(f.domain, copies), la.Copies(f.codomain, copies), rig, fn,
                        name=f"⊕{f.name}")


def diff_lift(copies):
    def lift(f):
        return sym.sym_lift(copies_map(f, copies))
    return lift


def shift(m, rig, copies: int, bound: int | None = None) -> la.LinearMap:
    """φ: copy n goes to copy n+1.  With ``bound``, tags reaching it are refused."""

    def fn(l):
        if bound is not None and l[1] + 1 >= bound:
            raise la.FrontierError()
        return {la.copy(l[1] + 1, l[2]): rig.one}

    c = la.Copies(m, copies)
    return la.LinearMap(c, c, rig, fn, name="φ")


def d_circ(m, rig, copies: int, max_degree: int | None = None) -> la.LinearMap:
    """Sym(⊕M) ⊗ ⊕M -> Sym(⊕M), multiply a generator into a monomial."""
    c = la.Copies(m, copies)

    def fn(l):
        mono, g = l[1]
        if max_degree is not None and len(mono[1]) + 1 > max_degree:
            raise la.FrontierError()
        return {la.mono(mono[1] + (g,)): rig.one}

    return la.LinearMap(la.tensor_module(la.Sym(c), c), la.Sym(c), rig, fn, name="d°")


def differential(m, rig, copies: int) -> la.LinearMap:
    """D = d;(1 ⊗ φ);d° on Diff M."""
    c = la.Copies(m, copies)
    return la.compose(sym.deriving(c, rig),
                      la.tensor(la.identity(la.Sym(c), rig), shift(m, rig, copies)),
                      d_circ(m, rig, copies))


def differential_direct(m, rig, copies: int) -> la.LinearMap:
    """D by the Leibniz formula, raising the tag of one entry (independent of the composite)."""

    def fn(mono):
        out = {}
        entries = mono[1]
        for i, e in enumerate(entries):
            new = la.mono(entries[:i] + (la.copy(e[1] + 1, e[2]),) + entries[i + 1:])
            out[new] = rig.add(out.get(new, rig.zero), rig.one)
        return {k: v for k, v in out.items() if v}

    c = carrier(m, copies)
    return la.LinearMap(c, c, rig, fn, name="D")


def monad_unit(m, rig, copies: int) -> la.LinearMap:
    """α = ι₀;η: x goes to the monomial on copy 0 of x."""
    return la.LinearMap(m, carrier(m, copies), rig,
                        lambda l: {("m", (la.copy(0, l),)): rig.one}, name="α")


def derivation_powers(dmap: la.LinearMap):
    """Memoized n ↦ Dⁿ applied to a basis label."""
    memo = {}
    rig = dmap.rig

    def power(n, label):
        key = (n, label)
        if key not in memo:
            if n == 0:
                memo[key] = {label: rig.one}
            else:
                memo[key] = dmap.apply(power(n - 1, label))
        return memo[key]

    return power


def psi(m, rig, copies: int) -> la.LinearMap:
    """ψ = ⟨Dⁿ⟩: ⊕ Diff M -> Diff M."""
    c = carrier(m, copies)
    power = derivation_powers(differential(m, rig, copies))
    return la.LinearMap(la.Copies(c, copies), c, rig, lambda l: power(l[1], l[2]), name="ψ")


def monad_mult(m, rig, copies: int) -> la.LinearMap:
    """ν = Sym(ψ);μ: Diff Diff M -> Diff M."""
    return la.compose(sym.sym_lift(psi(m, rig, copies)), sym.monad_mult(la.Copies(m, copies), rig))


def section(m, rig, copies: int, weights=(1,)) -> la.LinearMap:
    """f̂ = Σ r_n π_n: ⊕M -> M, the natural maps out of the countable sum."""
    weights = tuple(rig.from_int(w) if isinstance(w, int) and not isinstance(w, bool) else w
                    for w in weights)

    def fn(l):
        n = l[1]
        if n < len(weights) and weights[n]:
            return {l[2]: weights[n]}
        return {}

    return la.LinearMap(la.Copies(m, copies), m, rig, fn, name="f̂")


def candidate_deriving(m, rig, copies: int, weights=(1,)) -> la.LinearMap:
    """b = d;(1 ⊗ f̂): Diff M -> Diff M ⊗ M, the only shape a deriving transformation can take."""
    c = la.Copies(m, copies)
    return la.compose(sym.deriving(c, rig),
                      la.tensor(la.identity(la.Sym(c), rig), section(m, rig, copies, weights)))


def candidate_codereliction(m, rig, copies: int, weights=(1,)) -> la.LinearMap:
    """b;(e ⊗ 1): the codereliction induced by the candidate."""
    return la.compose(candidate_deriving(m, rig, copies, weights),
                      la.tensor(sym.counit_map(la.Copies(m, copies), rig), la.identity(m, rig)))


def refutation_composites(m, rig, copies: int = 3, weights=(1,)):
    """The two maps M ⊗ M -> M ⊗ M that the chain rule for b would force to agree.

    With α the unit, ∇ the multiplication, ι₁ the copy-1 injection, η the
    Sym unit, ε the degree-one projection and π₁ the copy-1 projection:

        lhs = (α⊗α);∇;ι₁;η;ν;b;(ε;π₁ ⊗ 1)                      = 1⊗1 + σ
        rhs = (α⊗α);∇;ι₁;η;b;(ν ⊗ b);(∇ ⊗ 1);(ε;π₁ ⊗ 1)        = 0
    """
    if not weights or weights[0] != 1:
        raise InvalidCandidate("invalid candidate: copy 0 must map identically")
    c = la.Copies(m, copies)
    dm = carrier(m, copies)
    cc = la.Copies(dm, copies)
    alpha = monad_unit(m, rig, copies)
    mult = sym.multiplication(c, rig)
    iota1 = la.LinearMap(dm, cc, rig, lambda l: {la.copy(1, l): rig.one}, name="ι₁")
    eta = sym.monad_unit(cc, rig)
    nu = monad_mult(m, rig, copies)
    b = candidate_deriving(m, rig, copies, weights)
    b_outer = candidate_deriving(dm, rig, copies, weights)
    eps_pi1 = la.compose(sym.codereliction(c, rig),
                         la.LinearMap(c, m, rig, lambda l: {l[2]: rig.one} if l[1] == 1 else {},
                                      name="π₁"))
    idm = la.identity(m, rig)
    head = la.compose(la.tensor(alpha, alpha), mult, iota1, eta)
    lhs = la.compose(head, nu, b, la.tensor(eps_pi1, idm))
    rhs = la.compose(head, b_outer, la.tensor(nu, b), la.tensor(mult, idm),
                     la.tensor(eps_pi1, idm))
    return lhs, rhs


def seely_split(x, y, rig, copies: int):
    """Diff(X ⊕ Y) -> Diff X ⊗ Diff Y by regrouping tags, together with its inverse."""
    s = la.DirectSum((x, y))
    pair = la.tensor_module(carrier(x, copies), carrier(y, copies))

    def split(mono):
        xs = tuple(la.copy(e[1], e[2][2]) for e in mono[1] if e[2][1] == 0)
        ys = tuple(la.copy(e[1], e[2][2]) for e in mono[1] if e[2][1] == 1)
        return {("t", (la.mono(xs), la.mono(ys))): rig.one}

    def merge(lab):
        xs, ys = lab[1]
        entries = ([la.copy(e[1], la.copy(0, e[2])) for e in xs[1]]
                   + [la.copy(e[1], la.copy(1, e[2])) for e in ys[1]])
        return {la.mono(entries): rig.one}

    return (la.LinearMap(carrier(s, copies), pair, rig, split, name="split"),
            la.LinearMap(pair, carrier(s, copies), rig, merge, name="merge"))


# ---------------------------------------------------------------------------
# model


def diff_families(rig, copies, weights=(1,)):
    def c(x):
        return la.Copies(x, copies)

    return {
        "delta": lambda x: monad_mult(x, rig, copies),
        "eps": lambda x: monad_unit(x, rig, copies),
        "comult": lambda x: sym.multiplication(c(x), rig),
        "counit": lambda x: sym.unit_map(c(x), rig),
        "mult": lambda x: sym.comultiplication(c(x), rig),
        "unit": lambda x: sym.counit_map(c(x), rig),
        "d": lambda x: candidate_deriving(x, rig, copies, weights),
        "eta": lambda x: candidate_codereliction(x, rig, copies, weights),
    }


def _builders(copies):
    from .lawcheck import Check

    def leibniz(model):
        rig = model.rig
        a = model.base("A")
        dm = carrier(a, copies)
        dd = differential(a, rig, copies)
        mult = sym.multiplication(la.Copies(a, copies), rig)
        one = la.identity(dm, rig)
        lhs = la.compose(mult, dd)
        rhs = la.add_maps(la.compose(la.tensor(one, dd), mult), la.compose(la.tensor(dd, one), mult))
        trunc = model.truncation(lhs.domain)
        out = [Check("D composite vs Leibniz", la.maps_equal(lhs, rhs, trunc))]
        out.append(Check("composite vs direct formula",
                         la.maps_equal(dd, differential_direct(a, rig, copies), model.truncation(dm))))
        return out

    def unit_derivative(model):
        rig = model.rig
        a = model.base("A")
        lhs = la.compose(monad_unit(a, rig, copies), differential(a, rig, copies))
        rhs = la.LinearMap(a, carrier(a, copies), rig, lambda l: {("m", (la.copy(1, l),)): rig.one})
        return [Check("", la.maps_equal(lhs, rhs, la.Truncation(0)))]

    def sandwich(model):
        rig = model.rig
        a = model.base("A")
        lhs, rhs = refutation_composites(a, rig, copies)
        return [Check("", la.maps_equal(lhs, rhs, la.Truncation(0)))]

    return {"diff-leibniz": leibniz, "diff-unit-derivative": unit_derivative,
            "diff-chain-sandwich": sandwich}


def diff_model(params: ModelParams | None = None, name="diff") -> ModuleModel:
    params = params or ModelParams()
    k = params.copies
    return ModuleModel(name, params, diff_families(params.rig, k),
                       lambda x: carrier(x, k), diff_lift(k),
                       builders=_builders(k), candidates=("d", "eta"))

