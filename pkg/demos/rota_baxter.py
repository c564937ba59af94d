"""The Rota-Baxter model: a deriving transformation without a bialgebra.

Shuffles and deconcatenation make the candidate ∇ associative but not
cocommutative, so the bialgebra suite fails while d.1-d.5 hold.
"""

from diffmodal import lawcheck as lc, rb
from diffmodal.core import ModelParams
from diffmodal.scalars import QQ

print("shuffle of (a) with (b, c):", rb.shuffles(("a",), ("b", "c")))

model = rb.rb_model(ModelParams(rig=QQ, dim=1, degree=4, word_len=2))
for name in ("d.1", "d.2", "d.3", "d.4", "d.5", "bialgebra.comm"):
    report = lc.check_law(model, lc.get_law(name))
    line = f"{name:<16} {report.status}"
    if report.witness:
        line += f"  at {report.witness.label}: {report.witness.lhs} vs {report.witness.rhs}"
    print(line)
