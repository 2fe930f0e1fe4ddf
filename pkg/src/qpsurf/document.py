"""YAML input documents: surface, curves, configuration, plan, declarations.

Every problem found while building the model is reported with the line of
the offending entry.  :func:`dump_document` writes a document that parses
back to an equal one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .blowup import BlowupEvent, BlowupPlan
from .bounds import Declarations
from .configuration import Configuration, PointCluster
from .lattice import CurveRecord, DivisorClass, ModelError, SurfaceModel


class DocumentError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


class _Map(dict):
    lines: dict = {}
    line = None


class _Seq(list):
    lines: list = []
    line = None


class _Loader(yaml.SafeLoader):
    pass


def _construct_map(loader, node):
    out = _Map()
    out.lines = {}
    out.line = node.start_mark.line + 1
    for knode, vnode in node.value:
        key = loader.construct_object(knode, deep=True)
        out[key] = loader.construct_object(vnode, deep=True)
        out.lines[key] = knode.start_mark.line + 1
    return out


def _construct_seq(loader, node):
    out = _Seq(loader.construct_object(v, deep=True) for v in node.value)
    out.lines = [v.start_mark.line + 1 for v in node.value]
    out.line = node.start_mark.line + 1
    return out


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_map)
_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_SEQUENCE_TAG, _construct_seq)


@dataclass(frozen=True)
class InputDocument:
    surface: SurfaceModel
    configuration: Configuration | None = None
    divisor: DivisorClass | None = None
    plan: BlowupPlan | None = None
    declarations: Declarations = field(default_factory=Declarations)

    @property
    def target(self):
        return self.configuration if self.configuration is not None else self.divisor


class _Reader:
    def __init__(self, source: str):
        self.source = source

    def fail(self, msg, where=None, key=None):
        line = None
        if isinstance(where, _Map):
            line = where.lines.get(key, where.line) if key is not None else where.line
        elif isinstance(where, _Seq):
            line = where.lines[key] if isinstance(key, int) and key < len(where.lines) else where.line
        elif isinstance(where, int):
            line = where
        raise DocumentError(msg, line, self.source)

    def get(self, m, key, kind, required=True, default=None):
        if not isinstance(m, dict):
            self.fail(f"expected a mapping holding '{key}'", m)
        if key not in m:
            if required:
                self.fail(f"missing key '{key}'", m)
            return default
        v = m[key]
        if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
            self.fail(f"'{key}' must be an integer, got {v!r}", m, key)
        if kind is bool and not isinstance(v, bool):
            self.fail(f"'{key}' must be true or false, got {v!r}", m, key)
        if kind is list and not isinstance(v, list):
            self.fail(f"'{key}' must be a list", m, key)
        if kind is dict and not isinstance(v, dict):
            self.fail(f"'{key}' must be a mapping", m, key)
        if kind is str:
            v = str(v)
        return v

    def ints(self, v, where, key, n=None):
        if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
            self.fail(f"'{key}' must be a list of integers", where, key)
        if n is not None and len(v) != n:
            self.fail(f"'{key}' has length {len(v)}, expected {n}", where, key)
        return [int(x) for x in v]

    def unknown(self, m, allowed):
        for k in m:
            if k not in allowed:
                self.fail(f"unknown key '{k}'", m, k)


SURFACE_KEYS = {"basis", "gram", "canonical", "q", "kappa", "minimal", "pg", "product"}


def _surface(r: _Reader, doc) -> SurfaceModel:
    s = r.get(doc, "surface", dict)
    r.unknown(s, SURFACE_KEYS)
    basis = [str(b) for b in r.get(s, "basis", list)]
    n = len(basis)
    rows = r.get(s, "gram", list)
    if len(rows) != n:
        r.fail(f"gram has {len(rows)} rows for {n} basis names", s, "gram")
    gram = [r.ints(row, rows, i, n) for i, row in enumerate(rows)]
    K = r.ints(r.get(s, "canonical", list), s, "canonical", n)
    product = r.get(s, "product", list, required=False)
    genera = tuple(r.ints(product, s, "product", 2)) if product is not None else None
    curves = []
    seq = r.get(doc, "curves", list, required=False, default=_Seq())
    for i, c in enumerate(seq):
        if not isinstance(c, dict):
            r.fail("curve entries must be mappings", seq, i)
        r.unknown(c, {"id", "class", "irreducible", "reduced"})
        curves.append(CurveRecord(
            r.get(c, "id", str),
            DivisorClass(r.ints(r.get(c, "class", list), c, "class", n)),
            r.get(c, "irreducible", bool, False, True),
            r.get(c, "reduced", bool, False, True),
        ))
    try:
        return SurfaceModel(
            gram=tuple(tuple(row) for row in gram),
            canonical=DivisorClass(K),
            irregularity=r.get(s, "q", int),
            kodaira_dim=r.get(s, "kappa", int),
            minimal=r.get(s, "minimal", bool, False, True),
            geom_genus=r.get(s, "pg", int, False),
            is_curve_product=genera is not None,
            basis_names=tuple(basis),
            curves=tuple(curves),
            product_genera=genera,
        )
    except ModelError as exc:
        msg = str(exc)
        r.fail(msg, s, "canonical" if "parity" in msg or "nef" in msg else None)


def _configuration(r: _Reader, doc, X: SurfaceModel) -> Configuration | None:
    c = r.get(doc, "configuration", dict, required=False)
    if c is None:
        return None
    r.unknown(c, {"components", "points"})
    comps = r.get(c, "components", dict)
    mults = {}
    for cid, mult in comps.items():
        if isinstance(mult, bool) or not isinstance(mult, int):
            r.fail(f"multiplicity of {cid} must be an integer", comps, cid)
        mults[str(cid)] = mult
    try:
        if "points" not in c:
            return Configuration.transverse(X, mults)
        points = []
        seq = r.get(c, "points", list)
        for i, p in enumerate(seq):
            if not isinstance(p, dict):
                r.fail("point entries must be mappings", seq, i)
            r.unknown(p, {"id", "mults", "local"})
            local = {}
            lseq = r.get(p, "local", list, False, _Seq())
            for j, entry in enumerate(lseq):
                if not (isinstance(entry, list) and len(entry) == 3 and isinstance(entry[2], int)):
                    r.fail("local entries are [curve, curve, number]", lseq, j)
                local[(str(entry[0]), str(entry[1]))] = entry[2]
            try:
                pm = {str(k): v for k, v in r.get(p, "mults", dict).items()}
                points.append(PointCluster(r.get(p, "id", str), pm, local))
            except ModelError as exc:
                r.fail(str(exc), seq, i)
        comps_list = []
        for cid, mult in mults.items():
            try:
                comps_list.append((X.curve(cid), mult))
            except KeyError:
                r.fail(f"component {cid} is not a registered curve", comps, cid)
        return Configuration(X, tuple(comps_list), tuple(points))
    except (ModelError, KeyError) as exc:
        r.fail(str(exc).strip("'\""), c)


def _plan(r: _Reader, doc, cfg: Configuration | None) -> BlowupPlan | None:
    seq = r.get(doc, "plan", list, required=False)
    if seq is None:
        return None
    if cfg is None:
        r.fail("a plan needs a configuration", doc, "plan")
    events = []
    for i, e in enumerate(seq):
        if not isinstance(e, dict):
            r.fail("plan entries must be mappings", seq, i)
        r.unknown(e, {"id", "point", "parent", "satellite", "passing"})
        opt = lambda k: None if e.get(k) is None else str(e[k])  # noqa: E731
        try:
            events.append(BlowupEvent(
                r.get(e, "id", str), opt("point"), opt("parent"), opt("satellite"),
                {str(k): v for k, v in r.get(e, "passing", dict, False, {}).items()},
            ))
        except ModelError as exc:
            r.fail(str(exc), seq, i)
    try:
        return BlowupPlan(cfg, tuple(events))
    except ModelError as exc:
        r.fail(str(exc), doc, "plan")


def parse_document(text: str, source: str = "<input>") -> InputDocument:
    r = _Reader(source)
    try:
        doc = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise DocumentError(f"not valid YAML: {getattr(exc, 'problem', exc)}",
                            mark.line + 1 if mark else None, source) from None
    if not isinstance(doc, dict):
        raise DocumentError("top level must be a mapping", 1, source)
    r.unknown(doc, {"surface", "curves", "configuration", "divisor", "plan", "declarations"})
    X = _surface(r, doc)
    cfg = _configuration(r, doc, X)
    divisor = None
    if "divisor" in doc:
        divisor = DivisorClass(r.ints(doc["divisor"], doc, "divisor", X.rank))
        if cfg is not None and cfg.divisor != divisor:
            r.fail("divisor disagrees with the configuration", doc, "divisor")
    d = r.get(doc, "declarations", dict, False, _Map())
    r.unknown(d, {"nef", "big", "h0", "l_minimal"})
    decl = Declarations(
        nef=r.get(d, "nef", bool, False), big=r.get(d, "big", bool, False),
        h0=r.get(d, "h0", int, False), l_minimal=r.get(d, "l_minimal", bool, False),
    )
    return InputDocument(X, cfg, divisor, _plan(r, doc, cfg), decl)


def load_document(path) -> InputDocument:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read: {exc.strerror}", None, str(p)) from None
    return parse_document(text, str(p))


def document_to_dict(doc: InputDocument) -> dict:
    X = doc.surface
    surface = {
        "basis": list(X.basis_names), "gram": [list(r) for r in X.gram],
        "canonical": list(X.canonical.coeffs), "q": X.irregularity,
        "kappa": X.kodaira_dim, "minimal": X.minimal,
    }
    if X.geom_genus is not None:
        surface["pg"] = X.geom_genus
    if X.product_genera is not None:
        surface["product"] = list(X.product_genera)
    out = {"surface": surface, "curves": [
        {"id": c.id, "class": list(c.cls.coeffs), "irreducible": c.irreducible, "reduced": c.reduced}
        for c in X.curves
    ]}
    if doc.configuration is not None:
        cfg = doc.configuration
        out["configuration"] = {
            "components": {c.id: r for c, r in cfg.components},
            "points": [
                {"id": p.id, "mults": dict(p.mults),
                 "local": [sorted(k) + [v] for k, v in sorted(p.local.items(), key=lambda kv: sorted(kv[0]))]}
                for p in cfg.point_clusters
            ],
        }
    if doc.divisor is not None:
        out["divisor"] = list(doc.divisor.coeffs)
    if doc.plan is not None:
        events = []
        for ev in doc.plan.events:
            e = {"id": ev.id}
            for key, val in (("point", ev.base_point), ("parent", ev.parent), ("satellite", ev.satellite)):
                if val is not None:
                    e[key] = val
            if ev.passing:
                e["passing"] = dict(ev.passing)
            events.append(e)
        out["plan"] = events
    decl = {k: getattr(doc.declarations, k) for k in ("nef", "big", "h0", "l_minimal")
            if getattr(doc.declarations, k) is not None}
    if decl:
        out["declarations"] = decl
    return out


def dump_document(doc: InputDocument) -> str:
    return yaml.safe_dump(document_to_dict(doc), sort_keys=False, default_flow_style=None)
