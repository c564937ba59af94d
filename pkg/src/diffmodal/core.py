"""Models of a modality, read in the coalgebra orientation, and the arrow-expression language.

Every law is written once, with composition in diagrammatic order (``f;g``
is f then g) and arrows pointing the way the coalgebra-side diagrams point.
A :class:`ModuleModel` stores its structure maps as ordinary linear maps and
an :class:`Orientation`; with ``OPPOSITE`` (the default) an abstract arrow
``X -> Y`` is carried by a linear map ``Y -> X`` and composites are reversed
at evaluation time.
"""

from __future__ import annotations

import enum
import random
import re
from dataclasses import dataclass, field, replace

from . import linalg as la
from .scalars import QQ, Rig


class Orientation(enum.Enum):
    DIRECT = "direct"
    OPPOSITE = "opposite"

    def flipped(self):
        return Orientation.DIRECT if self is Orientation.OPPOSITE else Orientation.OPPOSITE


class TypeCheckError(TypeError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class MissingStructure(LookupError):
    def __init__(self, symbol):
        self.symbol = symbol
        super().__init__(f"unregistered symbol {symbol!r}")


SYMBOLS = ("delta", "eps", "comult", "counit", "mult", "unit", "mtensor", "munit", "d", "eta")


@dataclass(frozen=True)
class ModelParams:
    rig: Rig = QQ
    dim: int = 2
    degree: int = 3
    nested_degree: int | None = None
    copies: int = 3
    word_len: int = 2
    mset_size: int | None = None
    seed: int = 42
    probes: int = 8

    @property
    def nested(self):
        return self.nested_degree if self.nested_degree is not None else self.degree

    def as_dict(self):
        return {"dim": self.dim, "degree": self.degree, "nested_degree": self.nested,
                "copies": self.copies, "word_len": self.word_len,
                "mset_size": self.mset_size, "probes": self.probes}


@dataclass(frozen=True)
class Arrow:
    """An abstract arrow dom -> cod carried by a linear map."""

    dom: object
    cod: object
    lin: la.LinearMap = field(compare=False)


class ModalityModel:
    """Interface shared by every model.  Subclasses supply objects and arrows."""

    name = "model"
    params: ModelParams
    # symbols whose registered family is a candidate the model is expected to refute
    candidate_symbols: frozenset = frozenset()
    # builders for model-specific laws: name -> callable(model) -> list[(label, lhs, rhs)]
    law_builders: dict = {}

    @property
    def rig(self):
        return self.params.rig

    def base(self, var: str):
        raise NotImplementedError

    def has(self, symbol) -> bool:
        return symbol in self.symbols

    def structure(self, symbol, *objs):
        key = (symbol, objs)
        memo = self.__dict__.setdefault("_memo", {})
        if key not in memo:
            if symbol not in self.symbols:
                raise MissingStructure(symbol)
            memo[key] = self._build(symbol, *objs)
        return memo[key]

    def describe(self, obj) -> str:
        return str(obj)

    def equal(self, f, g):
        if (f.dom, f.cod) != (g.dom, g.cod):
            raise TypeCheckError("", f"sides differ in type: {f.dom}->{f.cod} vs {g.dom}->{g.cod}")
        return la.maps_equal(f.lin, g.lin, self.truncation(f.lin.domain))


# ---------------------------------------------------------------------------
# models over free modules


class ModuleModel(ModalityModel):
    """A modality on free modules, with structure given as linear maps.

    ``families`` maps a symbol to a callable taking the index objects and
    returning the underlying linear map.  ``bang_module`` and ``lift_lin``
    give the functor on modules and on linear maps (covariantly).
    """

    def __init__(self, name, params, families, bang_module, lift_lin,
                 orientation=Orientation.OPPOSITE, builders=None, candidates=(),
                 truncation=None):
        self.name = name
        self.params = params
        self.families = dict(families)
        self.symbols = frozenset(self.families)
        self._bang = bang_module
        self._lift = lift_lin
        self.orientation = orientation
        self.law_builders = dict(builders or {})
        self.candidate_symbols = frozenset(candidates)
        self._truncation = truncation

    # objects
    def base(self, var):
        return la.Base(var, self.params.dim)

    def unit_obj(self):
        return la.K

    def terminal(self):
        return la.ZERO

    def ot(self, *objs):
        return la.tensor_module(*objs)

    def prod(self, *objs):
        return la.DirectSum(tuple(objs))

    def bang(self, obj):
        return self._bang(obj)

    # arrows
    def wrap(self, lin):
        if self.orientation is Orientation.OPPOSITE:
            return Arrow(lin.codomain, lin.domain, lin)
        return Arrow(lin.domain, lin.codomain, lin)

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def identity(self, obj):
        return Arrow(obj, obj, la.identity(obj, self.rig))

    def compose(self, *fs):
        for i, (f, g) in enumerate(zip(fs, fs[1:])):
            if f.cod != g.dom:
                raise TypeCheckError(f"link {i}", f"codomain {f.cod} does not match domain {g.dom}")
        lins = [f.lin for f in fs]
        if self.orientation is Orientation.OPPOSITE:
            lins.reverse()
        return Arrow(fs[0].dom, fs[-1].cod, la.compose(*lins))

    def tensor(self, *fs):
        if not fs:
            return self.identity(la.K)
        return Arrow(la.tensor_module(*(f.dom for f in fs)), la.tensor_module(*(f.cod for f in fs)),
                     la.tensor(*(f.lin for f in fs)))

    def add(self, *fs):
        for f in fs[1:]:
            if (f.dom, f.cod) != (fs[0].dom, fs[0].cod):
                raise TypeCheckError("", f"cannot add {f.dom}->{f.cod} to {fs[0].dom}->{fs[0].cod}")
        return Arrow(fs[0].dom, fs[0].cod, la.add_maps(*(f.lin for f in fs)))

    def zero(self, x, y):
        if self.orientation is Orientation.OPPOSITE:
            return Arrow(x, y, la.zero_map(y, x, self.rig))
        return Arrow(x, y, la.zero_map(x, y, self.rig))

    def permute(self, objs, perm):
        """Arrow X0⊗...⊗Xn -> X_perm[0]⊗...⊗X_perm[n]."""
        objs = tuple(objs)
        out = tuple(objs[p] for p in perm)
        if self.orientation is Orientation.OPPOSITE:
            inv = [0] * len(perm)
            for j, p in enumerate(perm):
                inv[p] = j
            lin = la.permutation(out, inv, self.rig)
        else:
            lin = la.permutation(objs, perm, self.rig)
        return Arrow(la.tensor_module(*objs), la.tensor_module(*out), lin)

    def symmetry(self, x, y):
        return self.permute((x, y), (1, 0))

    def inj(self, i, objs):
        objs = tuple(objs)
        if self.orientation is Orientation.OPPOSITE:
            return Arrow(objs[i], la.DirectSum(objs), la.projection(i, objs, self.rig))
        return Arrow(objs[i], la.DirectSum(objs), la.injection(i, objs, self.rig))

    def proj(self, i, objs):
        objs = tuple(objs)
        if self.orientation is Orientation.OPPOSITE:
            return Arrow(la.DirectSum(objs), objs[i], la.injection(i, objs, self.rig))
        return Arrow(la.DirectSum(objs), objs[i], la.projection(i, objs, self.rig))

    def lift(self, f):
        return Arrow(self.bang(f.dom), self.bang(f.cod), self._lift(f.lin))

    def _build(self, symbol, *objs):
        return self.wrap(self.families[symbol](*objs))

    # equality and probes
    def truncation(self, module):
        if self._truncation is not None:
            return self._truncation(module)
        p = self.params
        deg = p.degree if la.depth(module) <= 1 else p.nested
        return la.Truncation(deg, p.mset_size, None)

    def probes(self, x, y):
        return module_probes(self, x, y)

    def render_witness(self, label):
        return la.render_label(label)

    def render_value(self, vec):
        return la.render_vector(vec, self.rig)


def random_linear(dom, cod, rig, rng, density=0.6):
    """Seeded sparse map between base modules with entries in {-2..2} (or {0..2})."""
    lo = -2 if rig.has_negatives else 0
    table = {}
    cod_basis = la.basis(cod, la.Truncation(0))
    for src in la.basis(dom, la.Truncation(0)):
        img = {}
        for tgt in cod_basis:
            if rng.random() < density:
                c = rig.from_int(rng.randint(lo, 2))
                if c:
                    img[tgt] = c
        table[src] = img
    return la.LinearMap(dom, cod, rig, lambda l: table[l], name="probe")


def module_probes(model, x, y):
    """Named probe arrows x -> y: seeded random maps, plus identity and zero."""
    rng = random.Random(f"{model.params.seed}|{x}|{y}")
    out = []
    for k in range(model.params.probes):
        if model.orientation is Orientation.OPPOSITE:
            lin = random_linear(y, x, model.rig, rng)
        else:
            lin = random_linear(x, y, model.rig, rng)
        lin.name = f"p{k}"
        out.append((f"p{k}", Arrow(x, y, lin)))
    if x == y:
        out.append(("id", model.identity(x)))
    out.append(("zero", model.zero(x, y)))
    return out


def opposite_wrap(model: ModuleModel) -> ModuleModel:
    """Same registry, flipped orientation."""
    out = ModuleModel(model.name, model.params, model.families, model._bang, model._lift,
                      orientation=model.orientation.flipped(), builders=model.law_builders,
                      candidates=model.candidate_symbols, truncation=model._truncation)
    return out


# ---------------------------------------------------------------------------
# models built on top of another model


class DelegatingModel(ModalityModel):
    """Forwards everything to ``inner``; subclasses override what they change."""

    def __init__(self, inner, name=None):
        self.inner = inner
        self.name = name or inner.name
        self.params = inner.params
        self.symbols = inner.symbols
        self.law_builders = {}
        self.candidate_symbols = inner.candidate_symbols

    def base(self, var):
        return self.inner.base(var)

    def unit_obj(self):
        return self.inner.unit_obj()

    def terminal(self):
        return self.inner.terminal()

    def ot(self, *objs):
        return self.inner.ot(*objs)

    def prod(self, *objs):
        return self.inner.prod(*objs)

    def bang(self, obj):
        return self.inner.bang(obj)

    def dom(self, f):
        return self.inner.dom(f)

    def cod(self, f):
        return self.inner.cod(f)

    def identity(self, obj):
        return self.inner.identity(obj)

    def compose(self, *fs):
        return self.inner.compose(*fs)

    def tensor(self, *fs):
        return self.inner.tensor(*fs)

    def add(self, *fs):
        return self.inner.add(*fs)

    def zero(self, x, y):
        return self.inner.zero(x, y)

    def permute(self, objs, perm):
        return self.inner.permute(objs, perm)

    def symmetry(self, x, y):
        return self.permute((x, y), (1, 0))

    def inj(self, i, objs):
        return self.inner.inj(i, objs)

    def proj(self, i, objs):
        return self.inner.proj(i, objs)

    def lift(self, f):
        return self.inner.lift(f)

    def _build(self, symbol, *objs):
        return self.inner.structure(symbol, *objs)

    def truncation(self, module):
        return self.inner.truncation(module)

    def probes(self, x, y):
        return self.inner.probes(x, y)

    def render_witness(self, label):
        return self.inner.render_witness(label)

    def render_value(self, vec):
        return self.inner.render_value(vec)

    def describe(self, obj):
        return self.inner.describe(obj)


class DerivedModel(DelegatingModel):
    """``inner`` with some structure families replaced or added.

    Each family is a callable ``(model, *objs) -> arrow`` receiving the
    derived model itself, so builders may use its other structure.
    """

    def __init__(self, inner, name, families, drop=(), candidates=None):
        super().__init__(inner, name)
        self.families = dict(families)
        self.symbols = (inner.symbols - set(drop)) | frozenset(self.families)
        self.law_builders = dict(inner.law_builders)
        if candidates is not None:
            self.candidate_symbols = frozenset(candidates)

    def _build(self, symbol, *objs):
        if symbol in self.families:
            return self.families[symbol](self, *objs)
        return self.inner.structure(symbol, *objs)


def with_structure(model, name, families, drop=(), candidates=None):
    return DerivedModel(model, name, families, drop=drop, candidates=candidates)


class Windowed(DelegatingModel):
    """``inner`` checked in a smaller degree window."""

    def __init__(self, inner, degree):
        super().__init__(inner)
        self.law_builders = inner.law_builders
        self.cap = degree

    def _build(self, symbol, *objs):
        return self.inner.structure(symbol, *objs)

    def truncation(self, module):
        t = self.inner.truncation(module)
        return replace(t, degree=min(t.degree, self.cap))


# ---------------------------------------------------------------------------
# arrow expressions


@dataclass(frozen=True)
class ObjVar:
    name: str


@dataclass(frozen=True)
class ObjK:
    pass


@dataclass(frozen=True)
class ObjT:
    pass


@dataclass(frozen=True)
class ObjBang:
    arg: object


@dataclass(frozen=True)
class ObjOt:
    args: tuple


@dataclass(frozen=True)
class ObjProd:
    args: tuple


@dataclass(frozen=True)
class Struct:
    symbol: str
    objs: tuple


@dataclass(frozen=True)
class Id:
    obj: object


@dataclass(frozen=True)
class SymE:
    left: object
    right: object


@dataclass(frozen=True)
class Zero:
    dom: object
    cod: object


@dataclass(frozen=True)
class Inj:
    index: int
    objs: tuple


@dataclass(frozen=True)
class Proj:
    index: int
    objs: tuple


@dataclass(frozen=True)
class Lift:
    arg: object


@dataclass(frozen=True)
class Compose:
    args: tuple


@dataclass(frozen=True)
class TensorE:
    args: tuple


@dataclass(frozen=True)
class Sum:
    args: tuple


@dataclass(frozen=True)
class Probe:
    name: str


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|(\d+)|(.))")


class ParseError(ValueError):
    pass


def _tokens(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        if m.group(1):
            out.append(("id", m.group(1)))
        elif m.group(2):
            out.append(("int", m.group(2)))
        elif m.group(3) and not m.group(3).isspace():
            out.append(("sym", m.group(3)))
    return out


_ARROW_COMBINATORS = {"compose": Compose, "tensor": TensorE, "sum": Sum}
_OBJ_ARROWS = {"id", "sym", "zero"}
_INJ = re.compile(r"^(inj|proj)(\d+)$")


class _Parser:
    def __init__(self, text, defs):
        self.toks = _tokens(text)
        self.i = 0
        self.text = text
        self.defs = defs

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"unexpected {tok[1]!r} in {self.text!r}, wanted {value or kind}")
        self.i += 1
        return tok

    def done(self):
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")

    def obj(self):
        _, name = self.take("id")
        if name == "K":
            return ObjK()
        if name == "T":
            return ObjT()
        if name in ("bang", "ot", "prod"):
            self.take("sym", "(")
            args = [self.obj()]
            while self.peek() == ("sym", ","):
                self.take()
                args.append(self.obj())
            self.take("sym", ")")
            if name == "bang":
                if len(args) != 1:
                    raise ParseError("bang takes one object")
                return ObjBang(args[0])
            return ObjOt(tuple(args)) if name == "ot" else ObjProd(tuple(args))
        if name[0].isupper():
            return ObjVar(name)
        raise ParseError(f"not an object: {name!r}")

    def obj_list(self):
        if self.peek() != ("sym", "["):
            return ()
        self.take()
        if self.peek() == ("sym", "]"):
            self.take()
            return ()
        objs = [self.obj()]
        while self.peek() == ("sym", ","):
            self.take()
            objs.append(self.obj())
        self.take("sym", "]")
        return tuple(objs)

    def arrow(self):
        _, name = self.take("id")
        if name in _ARROW_COMBINATORS:
            self.take("sym", "(")
            args = [self.arrow()]
            while self.peek() == ("sym", ","):
                self.take()
                args.append(self.arrow())
            self.take("sym", ")")
            return _ARROW_COMBINATORS[name](tuple(args))
        if name == "lift":
            self.take("sym", "(")
            arg = self.arrow()
            self.take("sym", ")")
            return Lift(arg)
        if name in SYMBOLS:
            return Struct(name, self.obj_list())
        m = _INJ.match(name)
        if m:
            objs = self.obj_list()
            cls = Inj if m.group(1) == "inj" else Proj
            return cls(int(m.group(2)), objs)
        if name in _OBJ_ARROWS:
            objs = self.obj_list()
            if name == "id" and len(objs) == 1:
                return Id(objs[0])
            if name in ("sym", "zero") and len(objs) == 2:
                return SymE(*objs) if name == "sym" else Zero(*objs)
            raise ParseError(f"wrong object arguments for {name}")
        if name in self.defs:
            return self.defs[name]
        return Probe(name)


def parse_arrow(text, defs=None):
    p = _Parser(text, defs or {})
    out = p.arrow()
    p.done()
    return out


def parse_object(text):
    p = _Parser(text, {})
    out = p.obj()
    p.done()
    return out


def render_object(o) -> str:
    if isinstance(o, ObjVar):
        return o.name
    if isinstance(o, ObjK):
        return "K"
    if isinstance(o, ObjT):
        return "T"
    if isinstance(o, ObjBang):
        return f"bang({render_object(o.arg)})"
    name = "ot" if isinstance(o, ObjOt) else "prod"
    return f"{name}({', '.join(render_object(a) for a in o.args)})"


def _objs(objs):
    return "[" + ", ".join(render_object(o) for o in objs) + "]" if objs else ""


def render_arrow(e) -> str:
    if isinstance(e, Struct):
        return e.symbol + _objs(e.objs)
    if isinstance(e, Id):
        return f"id[{render_object(e.obj)}]"
    if isinstance(e, SymE):
        return f"sym[{render_object(e.left)}, {render_object(e.right)}]"
    if isinstance(e, Zero):
        return f"zero[{render_object(e.dom)}, {render_object(e.cod)}]"
    if isinstance(e, Inj):
        return f"inj{e.index}{_objs(e.objs)}"
    if isinstance(e, Proj):
        return f"proj{e.index}{_objs(e.objs)}"
    if isinstance(e, Lift):
        return f"lift({render_arrow(e.arg)})"
    if isinstance(e, Probe):
        return e.name
    name = {Compose: "compose", TensorE: "tensor", Sum: "sum"}[type(e)]
    return f"{name}({', '.join(render_arrow(a) for a in e.args)})"


def required_symbols(e) -> set:
    if isinstance(e, Struct):
        return {e.symbol}
    if isinstance(e, Lift):
        return required_symbols(e.arg)
    if isinstance(e, (Compose, TensorE, Sum)):
        out = set()
        for a in e.args:
            out |= required_symbols(a)
        return out
    return set()


def probe_names(e) -> list:
    if isinstance(e, Probe):
        return [e.name]
    if isinstance(e, Lift):
        return probe_names(e.arg)
    if isinstance(e, (Compose, TensorE, Sum)):
        out = []
        for a in e.args:
            out += [n for n in probe_names(a) if n not in out]
        return out
    return []


def eval_object(o, model):
    if isinstance(o, ObjVar):
        return model.base(o.name)
    if isinstance(o, ObjK):
        return model.unit_obj()
    if isinstance(o, ObjT):
        return model.terminal()
    if isinstance(o, ObjBang):
        return model.bang(eval_object(o.arg, model))
    args = [eval_object(a, model) for a in o.args]
    return model.ot(*args) if isinstance(o, ObjOt) else model.prod(*args)


def evaluate(e, model, env=None, path="$"):
    """Evaluate an expression to an arrow of ``model``, typechecking as it goes."""
    env = env or {}
    if isinstance(e, Struct):
        objs = tuple(eval_object(o, model) for o in e.objs)
        if not objs:
            objs = (model.base("A"),) if e.symbol != "munit" else ()
        return model.structure(e.symbol, *objs)
    if isinstance(e, Id):
        return model.identity(eval_object(e.obj, model))
    if isinstance(e, SymE):
        return model.symmetry(eval_object(e.left, model), eval_object(e.right, model))
    if isinstance(e, Zero):
        return model.zero(eval_object(e.dom, model), eval_object(e.cod, model))
    if isinstance(e, Inj):
        return model.inj(e.index, [eval_object(o, model) for o in e.objs])
    if isinstance(e, Proj):
        return model.proj(e.index, [eval_object(o, model) for o in e.objs])
    if isinstance(e, Probe):
        if e.name not in env:
            raise TypeCheckError(path, f"unbound probe {e.name!r}")
        return env[e.name]
    if isinstance(e, Lift):
        return model.lift(evaluate(e.arg, model, env, path + ".lift"))
    parts = [evaluate(a, model, env, f"{path}.{i}") for i, a in enumerate(e.args)]
    try:
        if isinstance(e, Compose):
            return model.compose(*parts)
        if isinstance(e, TensorE):
            return model.tensor(*parts)
        return model.add(*parts)
    except TypeCheckError as exc:
        raise TypeCheckError(path + (f"[{exc.path}]" if exc.path else ""),
                             str(exc).split(": ", 1)[-1]) from None


def typecheck(e, model, env=None):
    """Signature (dom, cod) of an expression, or TypeCheckError naming the bad node."""
    f = evaluate(e, model, env)
    return model.dom(f), model.cod(f)


def replace_params(params: ModelParams, **kw) -> ModelParams:
    return replace(params, **kw)
