"""Why the Diff modality has no deriving transformation of the forced form.

Any deriving transformation on Diff has to look like the candidate b built
from a section of the copy projection.  The chain rule then compares two
composites on M ⊗ M; the first is 1⊗1 + σ and the second is zero.
"""

from diffmodal import diff, lawcheck as lc, linalg as la
from diffmodal.core import ModelParams
from diffmodal.scalars import ZZ

m = la.Base("A", 2)
x, y = la.gen("A", 0), la.gen("A", 1)
pair = ("t", (x, y))

for weights in [(1,), (1, 2), (1, -1, 3)]:
    lhs, rhs = diff.refutation_composites(m, ZZ, copies=3, weights=weights)
    print(f"section weights {weights}:")
    print("   lhs(x⊗y) =", la.render_vector(lhs(pair), ZZ))
    print("   rhs(x⊗y) =", la.render_vector(rhs(pair), ZZ))

model = diff.diff_model(ModelParams(rig=ZZ, dim=2, degree=3))
report = lc.check_law(model, lc.get_law("d.4"))
w = report.witness
print(f"law d.4 on the registered candidate: {report.status} at {w.label}")
print(f"   lhs = {w.lhs}")
print(f"   rhs = {w.rhs}")
