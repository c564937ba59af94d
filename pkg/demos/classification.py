"""Place the separating examples in the six-column table.

A star marks a negative that rests on a failing candidate rather than a
proof.  Monoidal negatives come from the Seely map failing to be bijective
in some degree, which is a proof.
"""

from diffmodal import lawcheck as lc, models
from diffmodal.core import ModelParams
from diffmodal.scalars import QQ

params = ModelParams(rig=QQ, dim=2, degree=3)
rows = [lc.classify(models.build_model(name, params)) for name in models.DEFAULT_MODELS]
print(lc.render_table(rows))
print()
for row in rows:
    cell = row.cells["monoidal"]
    print(f"{row.model:<10} monoidal: {cell.basis}" + (f" ({cell.detail})" if cell.detail else ""))
