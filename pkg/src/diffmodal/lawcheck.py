"""Law catalog, suite runner and reports."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from . import core
from .core import MissingStructure, TypeCheckError
from .linalg import FrontierError

SUITES = ("comonad", "coalgebra", "monoidal", "bialgebra", "additive", "differential",
          "codereliction", "lemmas", "seely", "diff", "rb", "rb-diff")

PASS, FAIL, SKIPPED, LIMITED, ERROR = "pass", "fail", "skipped", "frontier-limited", "error"


@dataclass(frozen=True)
class Law:
    name: str
    suite: str
    anchor: str
    lhs: object = None
    rhs: object = None
    forall: tuple = ()          # ((var, dom, cod), ...)
    builder: str | None = None

    @property
    def requires(self) -> frozenset:
        if self.builder:
            return frozenset()
        return frozenset(core.required_symbols(self.lhs) | core.required_symbols(self.rhs))

    @property
    def quantification(self) -> str:
        return "probe-naturality" if self.forall else "basis-exhaustive"

    def text(self):
        if self.builder:
            return f"builder {self.builder}"
        return f"{core.render_arrow(self.lhs)} = {core.render_arrow(self.rhs)}"


@dataclass
class Witness:
    label: str
    lhs: str
    rhs: str
    instance: str = ""

    def as_dict(self):
        out = {"label": self.label, "lhs": self.lhs, "rhs": self.rhs}
        if self.instance:
            out["instance"] = self.instance
        return out


@dataclass
class LawReport:
    law: Law
    status: str
    witness: Witness | None = None
    coverage: int = 0
    detail: str = ""
    instances: list = field(default_factory=list)

    @property
    def name(self):
        return self.law.name

    def as_dict(self):
        out = {"name": self.law.name, "anchor": self.law.anchor, "status": self.status,
               "coverage": self.coverage}
        if self.witness is not None:
            out["witness"] = self.witness.as_dict()
        if self.detail:
            out["detail"] = self.detail
        if self.instances:
            out["probes"] = list(self.instances)
        return out


# ---------------------------------------------------------------------------
# catalog

_FORALL = re.compile(r"([a-z]\w*)\s*:\s*(.+?)\s*->\s*(.+)")


def parse_catalog(text: str):
    defs, laws = {}, []
    current = None

    def flush():
        if current is None:
            return
        fields = current[1]
        forall = []
        for part in filter(None, (p.strip() for p in fields.get("forall", "").split(","))):
            m = _FORALL.fullmatch(part)
            if not m:
                raise ValueError(f"bad forall clause {part!r} in {current[0]}")
            forall.append((m.group(1), core.parse_object(m.group(2)), core.parse_object(m.group(3))))
        if "builder" in fields:
            laws.append(Law(current[0], fields["suite"], fields["anchor"], builder=fields["builder"]))
        else:
            laws.append(Law(current[0], fields["suite"], fields["anchor"],
                            core.parse_arrow(fields["lhs"], defs), core.parse_arrow(fields["rhs"], defs),
                            tuple(forall)))

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("def "):
            name, expr = line[4:].split("=", 1)
            defs[name.strip()] = core.parse_arrow(expr, defs)
        elif line.startswith("law "):
            flush()
            current = (line[4:].strip(), {})
        else:
            key, val = line.split(":", 1)
            current[1][key.strip()] = val.strip()
    flush()
    return laws


@lru_cache(maxsize=None)
def catalog() -> tuple:
    text = resources.files("diffmodal").joinpath("laws.txt").read_text(encoding="utf-8")
    return tuple(parse_catalog(text))


def get_law(name: str) -> Law:
    for law in catalog():
        if law.name == name:
            return law
    raise KeyError(name)


def list_laws(filter: str | None = None):
    """Catalog entries whose name starts with ``filter`` (or whose suite equals it)."""
    out = []
    for law in catalog():
        if filter and not (law.name.startswith(filter) or law.suite == filter):
            continue
        out.append({"name": law.name, "suite": law.suite, "anchor": law.anchor,
                    "requires": sorted(law.requires), "quantification": law.quantification,
                    "text": law.text()})
    return out


def suite_laws(suite: str):
    if suite == "all":
        return list(catalog())
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}")
    return [law for law in catalog() if law.suite == suite]


# ---------------------------------------------------------------------------
# running


@dataclass
class Check:
    """One comparison made by a builder law."""

    instance: str
    comparison: object
    render_label: object = None
    render_value: object = None


def _probe_instances(model, law):
    if not law.forall:
        return [("", {})]
    pools = []
    for var, dom, cod in law.forall:
        x, y = core.eval_object(dom, model), core.eval_object(cod, model)
        pools.append((var, model.probes(x, y)))
    n = max(len(p) for _, p in pools)
    out = []
    for k in range(n):
        env, names = {}, []
        for j, (var, pool) in enumerate(pools):
            pname, arrow = pool[(k + j) % len(pool)]
            env[var] = arrow
            names.append(f"{var}={pname}")
        out.append((",".join(names), env))
    return out


def check_law(model, law: Law) -> LawReport:
    missing = law.requires - model.symbols
    if missing:
        return LawReport(law, SKIPPED, detail="missing " + ", ".join(sorted(missing)))
    try:
        if law.builder:
            build = model.law_builders.get(law.builder)
            if build is None:
                return LawReport(law, SKIPPED, detail="not applicable to this model")
            checks = build(model)
        else:
            checks = []
            for tag, env in _probe_instances(model, law):
                lhs = core.evaluate(law.lhs, model, env)
                rhs = core.evaluate(law.rhs, model, env)
                checks.append(Check(tag, model.equal(lhs, rhs)))
    except TypeCheckError as exc:
        return LawReport(law, ERROR, detail=f"type error: {exc}")
    except MissingStructure as exc:
        return LawReport(law, SKIPPED, detail=f"missing {exc.symbol}")
    except FrontierError as exc:
        return LawReport(law, LIMITED, detail=str(exc))
    return _fold(model, law, checks)


def _fold(model, law, checks):
    coverage, limited = 0, False
    names = [c.instance for c in checks if c.instance]
    for c in checks:
        cmp = c.comparison
        coverage += cmp.checked
        limited = limited or cmp.frontier_limited
        if not cmp.equal:
            rl = c.render_label or model.render_witness
            rv = c.render_value or model.render_value
            w = Witness(rl(cmp.witness), rv(cmp.lhs), rv(cmp.rhs), c.instance)
            return LawReport(law, FAIL, w, coverage, instances=names)
    status = LIMITED if limited else PASS
    return LawReport(law, status, coverage=coverage, instances=names)


def run_suite(model, suite: str = "all"):
    return [check_law(model, law) for law in suite_laws(suite)]


def run_suites(model, suites):
    seen, out = set(), []
    for s in suites:
        for law in suite_laws(s):
            if law.name not in seen:
                seen.add(law.name)
                out.append(check_law(model, law))
    return out


def suite_passes(reports, allow_skipped=False) -> bool:
    ok = {PASS, SKIPPED} if allow_skipped else {PASS}
    return all(r.status in ok for r in reports)


# ---------------------------------------------------------------------------
# classification

YES, NO, UNDETERMINED = "yes", "no", "undetermined"

COLUMNS = ("coalgebra", "monoidal", "bialgebra", "additive", "deriving", "codereliction")

DERIVING_LAWS = ("d.1", "d.2", "d.3", "d.4", "d.5", "nat.d")
CODERELICTION_LAWS = ("dC.1", "dC.2", "dC.3", "dC.4", "nat.eta")


@dataclass
class Cell:
    """One tri-state entry of the classification table.

    ``witnessed`` marks a negative that rests on a failing candidate
    structure (or inherits from one) rather than on a proof of non-existence.
    """

    status: str
    basis: str
    detail: str = ""
    witnessed: bool = False

    def render(self):
        return self.status + ("*" if self.witnessed else "")

    def as_dict(self):
        out = {"status": self.status, "basis": self.basis, "witnessed_not_proved": self.witnessed}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Classification:
    model: str
    rig: str
    params: dict
    cells: dict

    def row(self):
        return [self.cells[c].render() for c in COLUMNS]

    def as_dict(self):
        return {"model": self.model, "rig": self.rig, "params": self.params,
                "cells": {c: self.cells[c].as_dict() for c in COLUMNS}}


CANDIDATE_SCOPE = ("this refutes the registered candidate, not every structure of this kind; "
                   "the universal claim is not checked mechanically")


def _run_named(model, names):
    return [check_law(model, get_law(n)) for n in names]


def _first_failure(reports):
    for r in reports:
        if r.status == FAIL:
            w = r.witness
            return f"{r.name} fails at {w.label}: lhs {w.lhs}, rhs {w.rhs}"
    return None


def _fold_reports(reports, basis, candidate):
    """yes if everything passes, no on a failure, otherwise undetermined."""
    failure = _first_failure(reports)
    if failure and candidate:
        return Cell(NO, basis, f"refuted (witness): {failure}; {CANDIDATE_SCOPE}", witnessed=True)
    if failure:
        return Cell(NO, basis, failure)
    if all(r.status == PASS for r in reports):
        return Cell(YES, basis)
    odd = [f"{r.name}: {r.status}" for r in reports if r.status != PASS]
    return Cell(UNDETERMINED, basis, "; ".join(odd))


def _inherit(cell, basis):
    return Cell(NO, basis, cell.detail, witnessed=cell.witnessed)


def classify(model) -> Classification:
    """Fold the suites into the six-column table.

    Registered structure that fails a law only witnesses a negative, so such
    cells carry the ``witnessed`` flag.  The monoidal column can be decided
    outright by the Seely obstruction, which then also settles the additive
    column because the two notions are equivalent.
    """
    from . import constructions as C

    cells = {}
    cells["coalgebra"] = _fold_reports(run_suites(model, ("comonad", "coalgebra")),
                                       "comonad and coalgebra suites", False)

    has_bialg = model.has("mult") and model.has("unit")
    bialg_candidate = bool({"mult", "unit"} & model.candidate_symbols)
    if has_bialg:
        bialg = _fold_reports(run_suite(model, "bialgebra"), "bialgebra suite on ∇, u", bialg_candidate)
        additive_reports = run_suite(model, "additive") if bialg.status == YES else []
    else:
        bialg, additive_reports = None, []

    # monoidal
    if model.has("mtensor") and model.has("munit"):
        monoidal = _fold_reports(run_suite(model, "monoidal"), "monoidal suite on m",
                                 bool({"mtensor", "munit"} & model.candidate_symbols))
    else:
        try:
            obstruction = C.seely_obstruction(model)
        except (ValueError, NotImplementedError, AttributeError) as exc:
            obstruction, note = None, f"Seely check unavailable: {exc}"
        else:
            note = ""
        if obstruction is not None:
            monoidal = Cell(NO, f"Seely map not invertible ({obstruction.kind})", obstruction.detail)
        elif additive_reports and suite_passes(additive_reports):
            derived = core.Windowed(C.derive_monoidal(model), 2)
            monoidal = _fold_reports(run_suite(derived, "monoidal"),
                                     "m derived from the additive bialgebra, degree window 2", False)
        else:
            monoidal = Cell(UNDETERMINED, "no m and no additive bialgebra", note)
    cells["monoidal"] = monoidal

    # bialgebra
    if bialg is None:
        if monoidal.status == YES:
            derived = C.derive_nabla(model)
            bialg = _fold_reports(run_suite(derived, "bialgebra"), "∇, u derived from m", False)
            additive_reports = run_suite(derived, "additive") if bialg.status == YES else []
        else:
            bialg = Cell(UNDETERMINED, "no ∇, u and no monoidal structure")
    cells["bialgebra"] = bialg

    # additive
    if monoidal.status == NO and not monoidal.witnessed:
        additive = Cell(NO, "equivalent to monoidal, which is refuted", monoidal.detail)
    elif bialg.status == YES:
        additive = _fold_reports(additive_reports, "additive suite", bialg_candidate)
    elif bialg.status == NO:
        additive = _inherit(bialg, "requires a bialgebra modality")
    else:
        additive = Cell(UNDETERMINED, "bialgebra column undetermined")
    cells["additive"] = additive

    # deriving transformation
    if model.has("d"):
        deriving = _fold_reports(_run_named(model, DERIVING_LAWS), "d.1-d.5 on d",
                                 "d" in model.candidate_symbols)
    elif model.has("eta") and bialg.status == YES:
        derived = core.with_structure(model, f"{model.name}+d", C.d_from_eta())
        deriving = _fold_reports(_run_named(derived, DERIVING_LAWS), "d.1-d.5 on (1⊗η);∇",
                                 "eta" in model.candidate_symbols)
    else:
        deriving = Cell(UNDETERMINED, "no d")
    cells["deriving"] = deriving

    # codereliction
    if bialg.status != YES:
        coder = (_inherit(bialg, "requires a bialgebra modality") if bialg.status == NO
                 else Cell(UNDETERMINED, "bialgebra column undetermined"))
    elif model.has("eta"):
        coder = _fold_reports(_run_named(model, CODERELICTION_LAWS), "dC.1-dC.4 on η",
                              "eta" in model.candidate_symbols)
    elif model.has("d"):
        derived = core.with_structure(model, f"{model.name}+eta", C.eta_from_d())
        coder = _fold_reports(_run_named(derived, CODERELICTION_LAWS), "dC.1-dC.4 on (u⊗1);d",
                              "d" in model.candidate_symbols)
    else:
        coder = Cell(UNDETERMINED, "no η and no d")
    cells["codereliction"] = coder

    return Classification(model.name, model.rig.name, model.params.as_dict(), cells)


def render_table(rows) -> str:
    """Plain-text table of classifications, with a legend for flagged cells."""
    header = ["model"] + list(COLUMNS)
    body = [[c.model] + c.row() for c in rows]
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in [header] + body]
    if any("*" in v for r in body for v in r):
        lines.append("* negative witnessed by a failing candidate, not proved")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# consequences between laws

META_LAWS = ("d.2", "d.3", "d.4", "d.nabla", "deriving.monoidal",
             "dC.1", "dC.2", "dC.3", "dC.4", "dC.m")


@dataclass
class MetaCheck:
    statement: str
    applicable: bool
    holds: bool


def meta_consistency(reports) -> list:
    """Check that law statuses respect the implications between the rules.

    ``reports`` is any iterable of LawReports; laws missing from it count as
    not passing.  A statement whose premise fails is reported as not
    applicable and holds vacuously.
    """
    ok = {r.name: r.status == PASS for r in reports}

    def p(name):
        return ok.get(name, False)

    out = []
    premise = p("d.3")
    out.append(MetaCheck("d.3 ⇒ (d.2 ⇔ d.nabla)", premise, not premise or p("d.2") == p("d.nabla")))
    premise = p("d.3") and p("d.4")
    out.append(MetaCheck("d.3 ∧ d.4 ⇒ (d.2 ⇔ d.nabla ⇔ deriving.monoidal)", premise,
                         not premise or p("d.2") == p("d.nabla") == p("deriving.monoidal")))
    premise = p("dC.3")
    out.append(MetaCheck("dC.3 ⇒ dC.2", premise, not premise or p("dC.2")))
    premise = all(p(n) for n in ("dC.1", "dC.2", "dC.3", "dC.4"))
    out.append(MetaCheck("dC.1-dC.4 ⇒ dC.m", premise, not premise or p("dC.m")))
    return out
