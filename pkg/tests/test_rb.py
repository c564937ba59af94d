import random

from diffmodal import lawcheck as lc, linalg as la, rb
from diffmodal.core import ModelParams
from diffmodal.scalars import QQ

M = la.Base("A", 2)
x, y = la.gen("A", 0), la.gen("A", 1)
E = rb.EMPTY
ONE_WORD = ()


def m(*entries):
    return la.mono(entries)


def r(word, b=E):
    return ("t", (("w", tuple(word)), b))


OPS = rb.RotaBaxter(rb.Inner("sym", QQ, 3))
a, b, c = m(x), m(y), m(x, y)


def test_shuffles():
    assert rb.shuffles((a,), ()) == {(a,): 1}
    assert rb.shuffles((a,), (b,)) == {(a, b): 1, (b, a): 1}
    assert rb.shuffles((a,), (b, c)) == {(a, b, c): 1, (b, a, c): 1, (b, c, a): 1}
    assert rb.shuffles((a,), (a,)) == {(a, a): 2}


def test_deconcatenation():
    dec = OPS.deconcatenation(M)
    assert dec(r(())) == {("t", (("w", ()), E, ("w", ()), E)): 1}
    assert dec(r((a, b))) == {
        ("t", (("w", ()), E, ("w", (a, b)), E)): 1,
        ("t", (("w", (a,)), E, ("w", (b,)), E)): 1,
        ("t", (("w", (a, b)), E, ("w", ()), E)): 1,
    }
    t = OPS.carrier(M)
    flipped = la.compose(dec, la.symmetry(t, t, QQ))
    words = [r(w) for w in ((), (a,), (a, b), (b, a))]
    cmp = la.maps_equal(dec, flipped, words)
    assert not cmp and cmp.witness == r((a, b))


def test_product():
    prod = OPS.product(M)

    def p(u, v):
        return prod(("t", u[1] + v[1]))

    assert p(r(()), r((a,), c)) == {r((a,), c): 1}
    assert p(r((a,)), r((b,))) == {r((a, b)): 1, r((b, a)): 1}
    assert p(r((), m(x)), r((), m(y))) == {r((), m(x, y)): 1}


def test_operator():
    P = OPS.operator(M)
    assert P(r((), c)) == {r((c,)): 1}
    assert P(r((a,), c)) == {r((a, c)): 1}


def test_rota_baxter_equation_on_seeded_vectors():
    rng = random.Random(7)
    labels = la.basis(OPS.carrier(M), la.Truncation(3, 2, 2))

    def rand_vec():
        return {l: QQ.from_int(rng.randint(-2, 2)) for l in rng.sample(labels, 3)}

    for _ in range(20):
        u, v = rand_vec(), rand_vec()
        pu, pv = OPS.p_vec(u), OPS.p_vec(v)
        lhs = OPS.diamond(pu, pv)
        rhs = la.vec_add_into(OPS.p_vec(OPS.diamond(u, pv)), OPS.p_vec(OPS.diamond(pu, v)), QQ)
        assert lhs == rhs


def test_omega():
    omega = OPS.omega(M)

    def w(letters, last):
        return ("t", (("w", tuple(letters)),) + last[1])

    b1, b2, last = r((), m(x)), r((a,), E), r((), m(y))
    assert omega(w((), last)) == {last: 1}
    expected = OPS.diamond(OPS.p_vec({b1: 1}), {last: 1})
    assert omega(w((b1,), last)) == expected
    expected = OPS.diamond(OPS.p_vec(OPS.diamond(OPS.p_vec({b1: 1}), {b2: 1})), {last: 1})
    assert omega(w((b1, b2), last)) == expected


def test_monad_triangles():
    unit, mult = OPS.monad_unit, OPS.monad_mult
    t = OPS.carrier(M)
    window = la.Truncation(3, 2, 2)
    assert la.maps_equal(la.compose(unit(t), mult(M)), la.identity(t, QQ), window)
    assert la.maps_equal(la.compose(OPS.lift(unit(M)), mult(M)), la.identity(t, QQ), window)
    wb = r((a,), c)
    assert la.compose(unit(t), mult(M))(wb) == {wb: 1}


def test_deriving():
    d = OPS.deriving(M)
    assert d(r((a,))) == {}
    assert d(r((a,), m(x))) == {("t", (("w", (a,)), E, x)): 1}
    assert d(r((a,), m(x, y))) == {("t", (("w", (a,)), m(y), x)): 1, ("t", (("w", (a,)), m(x), y)): 1}


def test_model_laws():
    model = rb.rb_model(ModelParams(rig=QQ, dim=1, degree=4, nested_degree=3, word_len=2))
    reports = {r_.name: r_ for r_ in lc.run_suite(model, "all")}
    for name in ("rb.rota-baxter", "rb.omega-mult", "rb.omega-deriving", "d.1", "d.2", "d.3", "d.4",
                 "d.5", "nat.d", "comonad.coassoc", "coalgebra.cocomm"):
        assert reports[name].status == lc.PASS, name
    assert reports["bialgebra.comm"].status == lc.FAIL
    assert reports["rb.operator-inverse"].status == lc.SKIPPED


def test_differential_rota_baxter():
    model = rb.rb_diff_model(ModelParams(rig=QQ, dim=1, degree=4, nested_degree=3, word_len=2))
    reports = {r_.name: r_ for r_ in lc.run_suites(model, ("comonad", "coalgebra", "rb-diff", "rb"))}
    assert reports["rb.operator-inverse"].status == lc.PASS
    assert reports["rb.rota-baxter"].status == lc.PASS
    assert all(reports[n].status == lc.PASS for n in reports if n.startswith(("comonad", "coalgebra")))
    assert lc.check_law(model, lc.get_law("d.4")).status == lc.FAIL
