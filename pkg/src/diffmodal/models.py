"""Model registry: base models by name, plus suffixes that transform them.

A model name is a base name followed by any number of suffixes applied left
to right, for example ``diff+derived-m`` or ``sym+opB:2``:

    +derived-m       derive m_⊗, m_K from an additive bialgebra modality
    +derived-nabla   derive ∇, u from a monoidal coalgebra modality
    +opB[:dim]       the modality !B ⊗ !(-) for a fresh base module B (dim 1 by default)
    +biprod          the biproduct completion (matrices over lists of objects)
"""

from __future__ import annotations

from . import constructions, diff, rb, sym
from .core import ModelParams

BASE_MODELS = {
    "sym": sym.sym_model,
    "diff": diff.diff_model,
    "rb": rb.rb_model,
    "rb-diff": rb.rb_diff_model,
}

SUFFIXES = ("derived-m", "derived-nabla", "opB", "biprod")

# the six placements of the separating examples
DEFAULT_MODELS = ("sym", "diff", "rb", "sym+opB", "diff+opB", "rb-diff")


class UnknownModel(ValueError):
    pass


def build_model(name: str, params: ModelParams | None = None):
    params = params or ModelParams()
    base, *suffixes = name.split("+")
    if base not in BASE_MODELS:
        raise UnknownModel(f"unknown model {base!r}; choose from {', '.join(BASE_MODELS)}")
    model = BASE_MODELS[base](params)
    for suffix in suffixes:
        head, _, arg = suffix.partition(":")
        if head == "derived-m":
            model = constructions.derive_monoidal(model)
        elif head == "derived-nabla":
            model = constructions.derive_nabla(model)
        elif head == "opB":
            try:
                dim = int(arg) if arg else 1
            except ValueError:
                raise UnknownModel(f"bad dimension in suffix {suffix!r}") from None
            if dim < 1:
                raise UnknownModel(f"bad dimension in suffix {suffix!r}")
            model = constructions.nonadditive_B(model, dim=dim, name=f"{model.name}+{suffix}")
        elif head == "biprod" and not arg:
            model = constructions.biproduct_completion(model)
        else:
            raise UnknownModel(f"unknown suffix {suffix!r}; choose from {', '.join(SUFFIXES)}")
    return model
