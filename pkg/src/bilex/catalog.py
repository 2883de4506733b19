"""Parameter catalog: named extractor configurations with explicit seeds.

The shipped catalog lives in ``bilex/data/catalog.json``; another file can be
selected with ``--catalog`` or the ``BILEX_CATALOG`` environment variable.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

from .ec import CurveDesc, EcSubgroupDesc, ec_enumerate, ec_subgroup
from .errors import ParameterError
from .extract import ExtractorKind, ExtractorSpec
from .field_fp import FieldDesc, subgroup_of_order
from .field_fpn import ExtFieldDesc, additive_subgroup, mult_subgroup_fpn

ENV_VAR = "BILEX_CATALOG"


@dataclass(frozen=True)
class ParamCatalogEntry:
    name: str
    kind: ExtractorKind
    p: int
    k: int
    q1: int
    q2: int
    seed1: int = 0
    seed2: int = 0
    reduction_poly: str | None = None
    curve: dict | None = None
    subspace: tuple | None = None
    dh_seed: int = 0
    note: str = ""
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_dict(cls, d: dict) -> ParamCatalogEntry:
        try:
            kind = ExtractorKind(d["kind"])
            entry = cls(
                name=str(d["name"]), kind=kind, p=int(d["p"]), k=int(d["k"]),
                q1=int(d["q1"]), q2=int(d["q2"]),
                seed1=int(d.get("seed1", 0)), seed2=int(d.get("seed2", 0)),
                reduction_poly=d.get("reduction_poly"), curve=d.get("curve"),
                subspace=tuple(tuple(v) for v in d["subspace"]) if "subspace" in d else None,
                dh_seed=int(d.get("dh_seed", 0)), note=d.get("note", ""), raw=dict(d),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed catalog entry {d!r}: {exc}") from exc
        return entry

    @cached_property
    def field(self) -> FieldDesc | ExtFieldDesc:
        if self.kind.coordinate_output:
            if not self.reduction_poly:
                raise ParameterError(f"{self.name}: extension entries need reduction_poly")
            return ExtFieldDesc.from_text(self.p, self.reduction_poly)
        return FieldDesc(self.p)

    @cached_property
    def curve_desc(self) -> CurveDesc | None:
        if not self.kind.on_curve:
            return None
        if not self.curve:
            raise ParameterError(f"{self.name}: curve entries need curve coefficients")
        a, b = self.curve["a"], self.curve["b"]
        return CurveDesc(self.field, tuple(a) if isinstance(a, list) else a,
                         tuple(b) if isinstance(b, list) else b)

    def _subgroup(self, q: int, seed: int):
        if self.kind.on_curve:
            return ec_subgroup(self.curve_desc, q, seed, points=self._points)
        if self.kind.coordinate_output:
            return mult_subgroup_fpn(self.field, q, seed or 1)
        return subgroup_of_order(self.field, q, seed or 2)

    @cached_property
    def _points(self):
        return ec_enumerate(self.curve_desc)

    @cached_property
    def spec(self) -> ExtractorSpec:
        s1 = self._subgroup(self.q1, self.seed1)
        s2 = s1 if (self.q2, self.seed2) == (self.q1, self.seed1) else self._subgroup(self.q2, self.seed2)
        return ExtractorSpec(self.kind, self.k, s1, s2)

    @property
    def curve_points(self) -> list:
        return self._points if self.kind.on_curve else []

    def winterhof_subspace(self):
        fld = self.field
        if not isinstance(fld, ExtFieldDesc):
            raise ParameterError(f"{self.name}: Winterhof checks need an extension-field entry")
        basis = self.subspace or ((1,),)
        return additive_subgroup(fld, [fld(v) for v in basis])

    def validate(self) -> ParamCatalogEntry:
        self.spec
        if isinstance(self.spec.source1, EcSubgroupDesc):
            self.curve_points
        return self


@dataclass(frozen=True)
class Catalog:
    entries: tuple[ParamCatalogEntry, ...]
    source: str = ""

    def __getitem__(self, name: str) -> ParamCatalogEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def default_catalog_path():
    return resources.files("bilex") / "data" / "catalog.json"


def parse_catalog(doc: dict | list, source: str = "", validate: bool = True) -> Catalog:
    items = doc.get("entries", []) if isinstance(doc, dict) else doc
    entries = tuple(ParamCatalogEntry.from_dict(d) for d in items)
    names = [e.name for e in entries]
    if len(set(names)) != len(names):
        raise ParameterError("duplicate entry names in catalog")
    if validate:
        for e in entries:
            e.validate()
    return Catalog(entries, source)


def load_catalog(path: str | os.PathLike | None = None, validate: bool = True) -> Catalog:
    """Load from ``path``, else ``$BILEX_CATALOG``, else the shipped catalog."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        ref = default_catalog_path()
        text, source = ref.read_text(encoding="utf-8"), "builtin"
    else:
        text, source = Path(path).read_text(encoding="utf-8"), str(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"catalog {source} is not valid JSON: {exc}") from exc
    return parse_catalog(doc, source, validate)
