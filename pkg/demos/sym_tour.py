"""A walk through the symmetric algebra model.

Builds Sym over the rationals, evaluates a few structure maps on basis
monomials, then runs every law suite and prints the tally.
"""

from diffmodal import lawcheck as lc, linalg as la, sym
from diffmodal.core import ModelParams, evaluate, parse_arrow
from diffmodal.scalars import QQ

model = sym.sym_model(ModelParams(rig=QQ, dim=2, degree=3))
x, y = la.gen("A", 0), la.gen("A", 1)
xy = la.mono((x, y))

# An arrow X -> Y is carried by a linear map read from the Y side, so the
# algebra multiplication ∇ shows up as splitting a monomial.
nabla = model.structure("mult", model.base("A")).lin
print("∇ read on x·y:", la.render_vector(nabla(xy), QQ))

d = model.structure("d", model.base("A")).lin
print("d read on x·y:", la.render_vector(d(xy), QQ))

# the comonad triangle δ;!ε = 1, written in the expression language
triangle = evaluate(parse_arrow("compose(delta[A], lift(eps[A]))"), model)
print("δ;!ε is the identity:", bool(model.equal(triangle, model.identity(model.bang(model.base("A"))))))

reports = lc.run_suite(model, "all")
counts = {}
for r in reports:
    counts[r.status] = counts.get(r.status, 0) + 1
print("all suites:", ", ".join(f"{n} {s}" for s, n in sorted(counts.items())))
for r in reports:
    if r.status == lc.SKIPPED:
        print(f"  skipped {r.name}: {r.detail}")
