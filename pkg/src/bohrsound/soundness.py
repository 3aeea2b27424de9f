"""Soundness verdicts for families of embeddings of a common group.

A family descriptor asks whether the pushout of the family embeds into its
compact counterpart.  Each decided verdict names exactly one criterion from
a fixed whitelist; certificates are plain JSON-ready dictionaries so the
CLI can print them verbatim in either format.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import config
from .amalgam import split_family_verdict
from .characters import fin_check
from .descriptors import (
    _optional,
    _require,
    check_schema,
    group_from_descriptor,
    hom_from_descriptor,
    _int_rows,
)
from .errors import SchemaError
from .zmat import MatrixGroupResult, torus_soundness

CRITERIA = frozenset({
    "torus-joint-action-finite",
    "torus-joint-action-infinite",
    "compact-automorphism-group",
    "split-family",
})

SOUND = "Sound"
UNSOUND = "Unsound"
UNKNOWN = "UnknownPrefixOnly"


@dataclass(frozen=True)
class SoundnessVerdict:
    verdict: str
    criterion: str | None
    certificate: dict

    def __post_init__(self):
        if self.verdict in (SOUND, UNSOUND):
            assert self.criterion in CRITERIA
        else:
            assert self.criterion is None

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict in (SOUND, UNSOUND) else 2

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "criterion": self.criterion,
            "certificate": self.certificate,
        }


def serialize_matrix_group(res: MatrixGroupResult) -> dict:
    out: dict = {"finite": res.finite, "rank": res.rank}
    if res.finite:
        out["order"] = res.order
        if res.order is not None and res.order <= config.SERIALIZE_ELEMENTS_MAX:
            out["elements"] = sorted(
                [list(map(list, m)) for m in res.elements])
    else:
        out["witness_count"] = res.witness_count
    return out


def _torus_verdict(d: dict, where: str) -> SoundnessVerdict:
    rank = _require(d, "rank", int, where)
    raw = _require(d, "factor_generators", list, where)
    factor_gens = []
    for i, gens in enumerate(raw):
        if not isinstance(gens, list):
            raise SchemaError(f"{where}.factor_generators[{i}] must be an array")
        factor_gens.append([
            _int_rows(g, f"{where}.factor_generators[{i}][{j}]")
            for j, g in enumerate(gens)])
    result = torus_soundness(rank, factor_gens)
    certificate = {
        "rank": result.rank,
        "factor_orders": list(result.factor_orders),
        "joint": serialize_matrix_group(result.joint),
    }
    if result.sound:
        return SoundnessVerdict(SOUND, "torus-joint-action-finite", certificate)
    return SoundnessVerdict(UNSOUND, "torus-joint-action-infinite", certificate)


def _build_normal_family(d: dict, where: str):
    kernel = group_from_descriptor(_require(d, "kernel", dict, where),
                                   f"{where}.kernel")
    embs = []
    for i, entry in enumerate(_require(d, "embeddings", list, where)):
        embs.append(hom_from_descriptor(kernel, entry,
                                        f"{where}.embeddings[{i}]"))
    return kernel, embs


def _serialize_reports(reports) -> list[dict]:
    return [{
        "rho": r.rho,
        "degree": r.rho_degree,
        "class_members": list(r.class_members),
        "class_size": r.class_size,
        "per_member": {str(i): int(v) for i, v in sorted(r.per_member.items())},
        "sup_multiplicity": r.sup_multiplicity,
    } for r in reports]


def _finite_normal_verdict(d: dict, where: str) -> SoundnessVerdict:
    kernel, embs = _build_normal_family(d, where)
    reports = fin_check(embs, source=kernel)
    certificate = {
        "kernel_order": kernel.order,
        "member_orders": [e.target.order for e in embs],
        "reports": _serialize_reports(reports),
    }
    return SoundnessVerdict(SOUND, "compact-automorphism-group", certificate)


def _prefix_verdict(d: dict, where: str) -> SoundnessVerdict:
    kernel, embs = _build_normal_family(d, where)
    if not embs:
        raise SchemaError(f"{where}: a prefix declaration needs members")
    reports = fin_check(embs, source=kernel)
    n = len(embs)
    sequences = {}
    growing = []
    for r in reports:
        seq = [int(r.per_member[i]) for i in range(n)]
        sequences[str(r.rho)] = seq
        if n >= 2 and all(a < b for a, b in zip(seq, seq[1:])):
            growing.append(r.rho)
    certificate = {
        "kernel_order": kernel.order,
        "member_orders": [e.target.order for e in embs],
        "reports": _serialize_reports(reports),
        "multiplicity_sequences": sequences,
        "growing_classes": growing,
        "growth_flag": bool(growing),
        "note": "verdict covers only the materialized prefix of a family "
                "declared infinite",
    }
    return SoundnessVerdict(UNKNOWN, None, certificate)


def _split_verdict(d: dict, where: str, seed: int,
                   samples: int) -> SoundnessVerdict:
    kernel = group_from_descriptor(_require(d, "kernel", dict, where),
                                   f"{where}.kernel")
    members = []
    for i, entry in enumerate(_require(d, "members", list, where)):
        sub = f"{where}.members[{i}]"
        grp = group_from_descriptor(_require(entry, "normal", dict, sub),
                                    f"{sub}.normal")
        action = _int_rows(_require(entry, "action", list, sub), sub)
        members.append((grp, action))
    samples = _optional(d, "samples", int, where, samples)
    seed = _optional(d, "seed", int, where, seed)
    result = split_family_verdict(kernel, members, sample_count=samples,
                                  seed=seed)
    certificate = {
        "kernel_order": kernel.order,
        "member_orders": [grp.order for grp, _ in members],
        "kind": result.kind,
        "decomposition_passed": result.decomposition_passed,
        "samples": result.samples,
    }
    return SoundnessVerdict(SOUND, "split-family", certificate)


def _family_verdict(d: dict, where: str, seed: int,
                    samples: int) -> SoundnessVerdict:
    kind = _require(d, "kind", str, where)
    if kind == "torus-family":
        return _torus_verdict(d, where)
    if kind == "finite-normal-family":
        return _finite_normal_verdict(d, where)
    if kind == "normal-family-prefix":
        return _prefix_verdict(d, where)
    if kind == "split-family":
        return _split_verdict(d, where, seed, samples)
    if kind == "mixed-family":
        return _mixed_verdict(d, where, seed, samples)
    raise SchemaError(f"{where}: unknown family kind {kind!r}")


def _mixed_verdict(d: dict, where: str, seed: int,
                   samples: int) -> SoundnessVerdict:
    raw = _require(d, "members", list, where)
    if not raw:
        raise SchemaError(f"{where}: a mixed family needs members")
    inner = [_family_verdict(m, f"{where}.members[{i}]", seed, samples)
             for i, m in enumerate(raw)]
    for i, v in enumerate(inner):
        # a subfamily of a sound family is sound, so one bad member settles it
        if v.verdict == UNSOUND:
            return SoundnessVerdict(UNSOUND, v.criterion, {
                "deciding_member": i,
                "member_certificate": v.certificate,
            })
    kinds = {m.get("kind") for m in raw}
    if kinds == {"torus-family"}:
        ranks = {m.get("rank") for m in raw}
        if len(ranks) == 1:
            merged = {
                "kind": "torus-family",
                "rank": raw[0]["rank"],
                "factor_generators": [gens for m in raw
                                      for gens in m["factor_generators"]],
            }
            joint = _torus_verdict(merged, where)
            joint.certificate["joint_decision_over_members"] = len(raw)
            return joint
    return SoundnessVerdict(UNKNOWN, None, {
        "members": [{"verdict": v.verdict, "criterion": v.criterion}
                    for v in inner],
        "note": "members are individually sound but no joint criterion "
                "applies to the mixture",
    })


def soundness_verdict(request: dict, seed: int = 0,
                      samples: int = 200) -> SoundnessVerdict:
    """Decide a family request parsed from JSON."""
    check_schema(request, "request")
    return _family_verdict(request, "request", seed, samples)
