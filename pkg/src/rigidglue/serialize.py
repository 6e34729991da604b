"""JSON framework and certificate files.

Framework file::

    {"format": 1, "dimension": 2,
     "vertices": [[0.0, 0.0], [1.0, 0.0]],
     "members": [{"i": 0, "j": 1, "kind": "bar", "stress": 1.0}]}

``stress`` is optional per member; a stress is attached only when every
member carries one.  Floats are written with ``repr`` precision so files
round-trip exactly.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .certify import Certificate, Check, Verdict, Witness
from .generators import RNG_ALGORITHM
from .linalg import NumericTolerance
from .model import Configuration, Framework, InputError, Member, MemberKind, Stress, TensegrityGraph

FORMAT_VERSION = 1


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: expected an integer, got {value!r}")
    return value


def _float(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise InputError(f"{where}: expected a finite number, got {value!r}")
    return float(value)


def _check_format(obj: dict, where: str = "format") -> None:
    fmt = obj.get("format", FORMAT_VERSION)
    if fmt != FORMAT_VERSION:
        raise InputError(f"{where}: unsupported format version {fmt!r}")


def graph_members_from_list(raw: Any, n: int, where: str = "members") -> tuple[list[Member], dict, bool]:
    if not isinstance(raw, list):
        raise InputError(f"{where}: expected a list")
    members, stresses, all_stressed = [], {}, True
    for k, rec in enumerate(raw):
        at = f"{where}[{k}]"
        if not isinstance(rec, dict):
            raise InputError(f"{at}: expected an object")
        for key in ("i", "j"):
            if key not in rec:
                raise InputError(f"{at}.{key}: missing")
        i, j = _int(rec["i"], f"{at}.i"), _int(rec["j"], f"{at}.j")
        for key, v in (("i", i), ("j", j)):
            if not 0 <= v < n:
                raise InputError(f"{at}.{key}: vertex index {v} out of range 0..{n - 1}")
        if i == j:
            raise InputError(f"{at}: member joins vertex {i} to itself")
        kind = rec.get("kind", "bar")
        try:
            kind = MemberKind(kind)
        except ValueError:
            raise InputError(f"{at}.kind: unknown kind {kind!r} (expected bar, cable or strut)") from None
        members.append(Member(i, j, kind))
        if "stress" in rec and rec["stress"] is not None:
            stresses[(i, j)] = _float(rec["stress"], f"{at}.stress")
        else:
            all_stressed = False
    return members, stresses, all_stressed


def framework_from_dict(obj: Any) -> tuple[Framework, Stress | None]:
    if not isinstance(obj, dict):
        raise InputError("top level: expected an object")
    _check_format(obj)
    if "dimension" not in obj:
        raise InputError("dimension: missing")
    d = _int(obj["dimension"], "dimension")
    if d < 1:
        raise InputError("dimension: must be positive")
    verts = obj.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise InputError("vertices: expected a non-empty list of coordinate lists")
    pts = []
    for k, v in enumerate(verts):
        if not isinstance(v, list) or len(v) != d:
            raise InputError(f"vertices[{k}]: expected {d} coordinates (dimension mismatch)")
        pts.append([_float(c, f"vertices[{k}][{c_i}]") for c_i, c in enumerate(v)])
    members, stresses, all_stressed = graph_members_from_list(obj.get("members", []), len(pts))
    try:
        graph = TensegrityGraph(len(pts), members)
    except InputError as e:
        raise InputError(f"members: {e}") from None
    f = Framework(graph, Configuration(pts, d))
    stress = Stress(stresses) if members and all_stressed else None
    return f, stress


def parse_framework(text: str) -> tuple[Framework, Stress | None]:
    return framework_from_dict(_loads(text))


def framework_to_dict(f: Framework, stress: Stress | None = None) -> dict[str, Any]:
    members = []
    for m in f.graph:
        rec: dict[str, Any] = {"i": m.i, "j": m.j, "kind": m.kind.value}
        if stress is not None:
            rec["stress"] = stress.get(m.i, m.j)
        members.append(rec)
    return {
        "format": FORMAT_VERSION,
        "dimension": f.d,
        "vertices": f.configuration.points.tolist(),
        "members": members,
    }


def write_framework(f: Framework, stress: Stress | None = None) -> str:
    return json.dumps(framework_to_dict(f, stress), indent=1) + "\n"


def _graph_to_dict(g: TensegrityGraph) -> dict[str, Any]:
    return {"vertex_count": g.vertex_count,
            "members": [{"i": m.i, "j": m.j, "kind": m.kind.value} for m in g]}


def certificate_to_dict(cert: Certificate) -> dict[str, Any]:
    out: dict[str, Any] = {
        "format": FORMAT_VERSION,
        "check": cert.check.value,
        "verdict": cert.verdict.value,
        "dimension": cert.dimension,
        "fingerprint": cert.fingerprint,
        "graph": _graph_to_dict(cert.graph),
        "tolerances": {
            "rank_threshold_factor": cert.tolerance.rank_threshold_factor,
            "psd_slack": cert.tolerance.psd_slack,
        },
        "seed": cert.seed,
        "trials": cert.trials,
        "stress_trials": cert.stress_trials,
        "rng": RNG_ALGORITHM,
        "reason": cert.reason,
        "details": cert.details,
        "witness": None,
    }
    if cert.witness is not None:
        w = cert.witness
        out["witness"] = {
            "vertices": w.configuration.points.tolist(),
            "stress": [{"i": i, "j": j, "value": v} for (i, j), v in sorted(w.stress.values.items())],
            "rigidity_rank": w.rigidity_rank,
            "stress_rank": w.stress_rank,
        }
    return out


def certificate_from_dict(obj: Any) -> Certificate:
    if not isinstance(obj, dict):
        raise InputError("top level: expected an object")
    _check_format(obj)
    try:
        check = Check(obj["check"])
        verdict = Verdict(obj["verdict"])
        d = _int(obj["dimension"], "dimension")
        graph_raw = obj["graph"]
        n = _int(graph_raw["vertex_count"], "graph.vertex_count")
        members, _, _ = graph_members_from_list(graph_raw["members"], n, "graph.members")
        graph = TensegrityGraph(n, members)
        tols = obj["tolerances"]
        tol = NumericTolerance(_float(tols["rank_threshold_factor"], "tolerances.rank_threshold_factor"),
                               _float(tols["psd_slack"], "tolerances.psd_slack"))
    except KeyError as e:
        raise InputError(f"{e.args[0]}: missing") from None
    except ValueError as e:
        raise InputError(str(e)) from None
    witness = None
    if obj.get("witness"):
        w = obj["witness"]
        stress = Stress({(_int(r["i"], "witness.stress.i"), _int(r["j"], "witness.stress.j")):
                         _float(r["value"], "witness.stress.value") for r in w["stress"]})
        witness = Witness(Configuration(w["vertices"], d), stress, w.get("rigidity_rank"), w.get("stress_rank"))
    cert = Certificate(
        check=check, verdict=verdict, dimension=d, graph=graph, reason=obj.get("reason", ""),
        witness=witness, tolerance=tol, seed=obj.get("seed"), trials=obj.get("trials"),
        stress_trials=obj.get("stress_trials"), details=obj.get("details") or {},
    )
    if "fingerprint" in obj and obj["fingerprint"] != cert.fingerprint:
        raise InputError("fingerprint: does not match the embedded graph")
    return cert


def write_certificate(cert: Certificate) -> str:
    return json.dumps(certificate_to_dict(cert), indent=1) + "\n"


def parse_certificate(text: str) -> Certificate:
    return certificate_from_dict(_loads(text))
