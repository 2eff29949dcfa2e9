"""Instance files: representation, orbit closure, named characters and tasks."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .exactpoly import Poly, PolyIdeal, to_fraction, toric_ideal
from .repdata import (
    DataInconsistencyError,
    RepData,
    character_from_json,
    quadric_cone_rep,
    repdata_from_json,
    repdata_to_json,
    segre_rep,
    torus_rep,
)
from .tautsys import OrbitClosureData, segre_ideal, veronese_ideal

BUNDLED = ("quadric-cone", "segre-cone", "gkz-twisted-cubic-plane", "gkz-identity", "lfd-synthetic")


class ValidationError(ValueError):
    """Instance data failed schema validation."""


@dataclass
class Instance:
    name: str
    rep: RepData | None = None
    orbit: OrbitClosureData | None = None
    characters: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)
    gkz_A: list | None = None
    lfd: dict | None = None
    input_hash: str = ""

    def character(self, name: str | None = None) -> tuple:
        if not self.characters:
            raise ValidationError(f"instance {self.name!r} defines no characters")
        if name is None:
            name = next(iter(self.characters))
        if name not in self.characters:
            raise ValidationError(f"unknown character {name!r}; known: {sorted(self.characters)}")
        return name, self.characters[name]


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ValidationError(f"{where}: missing key {key!r}")
    return obj[key]


def instance_from_json(obj: dict, input_hash: str = "") -> Instance:
    if not isinstance(obj, dict):
        raise ValidationError("instance must be a JSON object")
    name = str(obj.get("name", "unnamed"))
    inst = Instance(name=name, tasks=list(obj.get("tasks", [])), input_hash=input_hash)
    if "lfd" in obj:
        lfd = obj["lfd"]
        try:
            inst.lfd = {
                "n": int(_require(lfd, "n", "lfd")),
                "roots_bD": [to_fraction(r) for r in _require(lfd, "roots_bD", "lfd")],
                "beta_e": [to_fraction(b) for b in lfd.get("beta_e", [])],
            }
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"lfd: {exc}") from exc
    if "gkz" in obj:
        A = _require(obj["gkz"], "A", "gkz")
        try:
            inst.gkz_A = [[int(v) for v in row] for row in A]
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"gkz.A: {exc}") from exc
        if "lie" not in obj:
            scaling = next((i for i, row in enumerate(inst.gkz_A) if all(v == 1 for v in row)), None)
            inst.rep = torus_rep(inst.gkz_A, scaling_row=scaling)
            ideal = toric_ideal(inst.gkz_A)
            inst.orbit = OrbitClosureData(ideal, int(obj.get("dim_Y", len(inst.gkz_A))))
    if "lie" in obj:
        try:
            inst.rep = repdata_from_json({"lie": obj["lie"], "rep": _require(obj, "rep", "instance")})
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"representation data: {exc}") from exc
        N = inst.rep.N
        try:
            gens = [Poly.parse(s, N) for s in obj.get("ideal", [])]
        except ValueError as exc:
            raise ValidationError(f"ideal: {exc}") from exc
        gamma = None
        if obj.get("gamma") is not None:
            gamma = character_from_json(inst.rep.lie, obj["gamma"])
        inst.orbit = OrbitClosureData(PolyIdeal(gens, N), int(_require(obj, "dim_Y", "instance")),
                                      gamma, obj.get("ci_degrees"))
    if inst.rep is not None:
        for cname, values in obj.get("characters", {}).items():
            try:
                inst.characters[cname] = character_from_json(inst.rep.lie, values)
            except (DataInconsistencyError, ValueError, TypeError) as exc:
                raise ValidationError(f"character {cname!r}: {exc}") from exc
    if inst.rep is None and inst.lfd is None:
        raise ValidationError("instance needs representation data, a gkz block or an lfd block")
    return inst


def load_instance(source: str | Path) -> Instance:
    """Load from a path, or from the bundled corpus by name."""
    path = Path(source)
    if path.exists():
        raw = path.read_bytes()
    elif str(source) in BUNDLED:
        raw = resources.files("tautdual.instances").joinpath(f"{source}.json").read_bytes()
    else:
        raise ValidationError(f"no instance file or bundled instance named {source!r}")
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return instance_from_json(obj, hashlib.sha256(raw).hexdigest())


# --------------------------------------------------------------------------
# generators for the bundled corpus
# --------------------------------------------------------------------------


def _with_orbit(name, rep, ideal, dim_Y, ci_degrees, characters, tasks):
    out = {"name": name}
    out.update(repdata_to_json(rep))
    out["ideal"] = [str(g) for g in ideal.generators]
    out["dim_Y"] = dim_Y
    if ci_degrees is not None:
        out["ci_degrees"] = list(ci_degrees)
    out["characters"] = characters
    out["tasks"] = tasks
    return out


def bundled_instance_json(name: str) -> dict:
    """The canonical JSON content of a bundled instance."""
    if name == "quadric-cone":
        chars = {f"beta_e={v}": [v, "0", "0", "0"] for v in ("0", "1", "1/2")}
        return _with_orbit(name, quadric_cone_rep(), veronese_ideal(2, 2), 2, [2], chars,
                           ["build", "bfun", "dual", "profile"])
    if name == "segre-cone":
        chars = {f"beta_e={v}": [v] + ["0"] * 6 for v in ("0", "2", "1")}
        return _with_orbit(name, segre_rep(), segre_ideal(2, 2), 3, [2], chars, ["build", "bfun", "dual"])
    if name == "gkz-twisted-cubic-plane":
        return {"name": name, "gkz": {"A": [[1, 1, 1], [0, 1, 2]]}, "dim_Y": 2,
                "characters": {"beta=(0,0)": ["0", "0"], "beta=(1/2,1/3)": ["1/2", "1/3"]},
                "tasks": ["build", "dual"]}
    if name == "gkz-identity":
        return {"name": name, "gkz": {"A": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}, "dim_Y": 3,
                "characters": {"beta=(0,0,0)": ["0", "0", "0"], "beta=(1,1/2,-1)": ["1", "1/2", "-1"]},
                "tasks": ["build", "dual"]}
    if name == "lfd-synthetic":
        return {"name": name, "lfd": {"n": 3, "roots_bD": ["-1", "-2/3"],
                                      "beta_e": ["-2", "1/3", "1/2", "1", "2"]},
                "tasks": ["lfd"]}
    raise KeyError(name)


__all__ = ["BUNDLED", "Instance", "ValidationError", "bundled_instance_json", "instance_from_json", "load_instance"]
