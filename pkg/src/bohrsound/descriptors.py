"""JSON descriptors for groups, embeddings, amalgams, targets, and requests.

Every file the CLI consumes is a JSON object with a top-level "schema"
version and a "kind" tag.  Parsing here only checks shape and resolves
labels; mathematical validation stays in the constructors it calls.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SchemaError
from .amalgam import (
    AmalgamSpec,
    FiniteTarget,
    MatrixTarget,
    TorusSemidirectTarget,
)
from .groups import (
    FiniteGroup,
    GroupHom,
    TorusPoint,
    cyclic,
    group_from_table,
    heisenberg,
    semidirect,
    symmetric,
)
from .lie import LieDatum, simple_type

SCHEMA_VERSION = 1

GROUP_KINDS = ("table", "cyclic", "symmetric", "heisenberg", "semidirect")


def _require(d, field, types, where):
    if not isinstance(d, dict):
        raise SchemaError(f"{where}: expected an object, got {type(d).__name__}")
    if field not in d:
        raise SchemaError(f"{where}: missing field {field!r}")
    value = d[field]
    if not isinstance(value, types):
        raise SchemaError(f"{where}: field {field!r} has the wrong type")
    return value


def _optional(d, field, types, where, default=None):
    if field not in d:
        return default
    value = d[field]
    if not isinstance(value, types):
        raise SchemaError(f"{where}: field {field!r} has the wrong type")
    return value


def check_schema(d: dict, where: str = "document") -> None:
    version = _require(d, "schema", int, where)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"{where}: unsupported schema version {version}")


def _int_rows(value, where) -> list[list[int]]:
    if not isinstance(value, list) or not value:
        raise SchemaError(f"{where}: expected a nonempty array of rows")
    rows = []
    for row in value:
        if not isinstance(row, list) or \
                not all(isinstance(x, int) for x in row):
            raise SchemaError(f"{where}: rows must be arrays of integers")
        rows.append(list(row))
    return rows


def group_from_descriptor(d: dict, where: str = "group") -> FiniteGroup:
    """Build a finite group from {"kind": ..., ...parameters}.

    Kinds: cyclic {n}, symmetric {n}, heisenberg {level},
    table {table, labels?}, semidirect {normal, acting, action}.
    All kinds accept an optional "name"; cyclic and table accept "labels".
    """
    kind = _require(d, "kind", str, where)
    name = _optional(d, "name", str, where)
    if kind == "cyclic":
        n = _require(d, "n", int, where)
        labels = _optional(d, "labels", list, where)
        return cyclic(n, labels=labels, name=name)
    if kind == "symmetric":
        return symmetric(_require(d, "n", int, where))
    if kind == "heisenberg":
        return heisenberg(_require(d, "level", int, where))
    if kind == "table":
        table = _int_rows(_require(d, "table", list, where), where)
        labels = _optional(d, "labels", list, where)
        return group_from_table(table, labels=labels, name=name)
    if kind == "semidirect":
        normal = group_from_descriptor(
            _require(d, "normal", dict, where), f"{where}.normal")
        acting = group_from_descriptor(
            _require(d, "acting", dict, where), f"{where}.acting")
        action = _int_rows(_require(d, "action", list, where), where)
        grp, _, _ = semidirect(normal, acting, action, name=name)
        return grp
    raise SchemaError(f"{where}: unknown group kind {kind!r}; "
                      f"expected one of {GROUP_KINDS}")


def resolve_element(group: FiniteGroup, token, where: str = "element") -> int:
    """Element given as an index or a label string."""
    if isinstance(token, bool) or not isinstance(token, (int, str)):
        raise SchemaError(f"{where}: element must be an integer or a label")
    try:
        return group.label_index(str(token))
    except Exception:
        raise SchemaError(
            f"{where}: {token!r} is not an element of {group.name}") from None


def hom_from_descriptor(source: FiniteGroup, d: dict,
                        where: str = "embedding") -> GroupHom:
    """{"group": <descriptor>, "mapping": [element tokens]} -> GroupHom."""
    target = group_from_descriptor(_require(d, "group", dict, where),
                                   f"{where}.group")
    mapping = _require(d, "mapping", list, where)
    resolved = [resolve_element(target, tok, f"{where}.mapping[{i}]")
                for i, tok in enumerate(mapping)]
    return GroupHom(source, target, resolved)


def amalgam_from_descriptor(d: dict, where: str = "amalgam") -> AmalgamSpec:
    """{"kind": "amalgam", "amalgam": <group>, "factors": [{group, injection}]}"""
    check_schema(d, where)
    if _require(d, "kind", str, where) != "amalgam":
        raise SchemaError(f"{where}: expected kind 'amalgam'")
    h = group_from_descriptor(_require(d, "amalgam", dict, where),
                              f"{where}.amalgam")
    factors = []
    injections = []
    for i, entry in enumerate(_require(d, "factors", list, where)):
        sub = f"{where}.factors[{i}]"
        grp = group_from_descriptor(_require(entry, "group", dict, sub), sub)
        inj = _require(entry, "injection", list, sub)
        resolved = [resolve_element(grp, tok, f"{sub}.injection[{j}]")
                    for j, tok in enumerate(inj)]
        factors.append(grp)
        injections.append(GroupHom(h, grp, resolved))
    return AmalgamSpec(h, factors, injections)


def parse_word(spec: AmalgamSpec, text: str,
               where: str = "word") -> tuple[tuple[int, int], ...]:
    """Whitespace-separated factor:element tokens; empty text is the identity.

    Elements resolve by label first, then as integer indices.
    """
    letters = []
    for pos, token in enumerate(text.split()):
        head, sep, tail = token.partition(":")
        if not sep or not head.isdigit():
            raise SchemaError(
                f"{where}: token {pos} ({token!r}) is not factor:element")
        i = int(head)
        if not 0 <= i < len(spec.factors):
            raise SchemaError(f"{where}: factor index {i} out of range")
        letters.append((i, resolve_element(spec.factors[i], tail,
                                           f"{where} token {pos}")))
    return tuple(letters)


def target_from_descriptor(spec: AmalgamSpec, d: dict,
                           where: str = "targets"):
    """Evaluation targets: matrix, finite-group, or torus-semidirect maps."""
    check_schema(d, where)
    kind = _require(d, "kind", str, where)
    if kind == "matrix-targets":
        dim = _require(d, "dimension", int, where)
        modulus = _optional(d, "modulus", int, where)
        maps = []
        for i, factor_maps in enumerate(_require(d, "factors", list, where)):
            if not isinstance(factor_maps, list):
                raise SchemaError(f"{where}.factors[{i}] must be an array")
            maps.append([_int_rows(m, f"{where}.factors[{i}][{j}]")
                         for j, m in enumerate(factor_maps)])
        return MatrixTarget(dim, maps, modulus=modulus)
    if kind == "finite-targets":
        grp = group_from_descriptor(_require(d, "group", dict, where),
                                    f"{where}.group")
        maps = []
        for i, factor_maps in enumerate(_require(d, "factors", list, where)):
            if not isinstance(factor_maps, list):
                raise SchemaError(f"{where}.factors[{i}] must be an array")
            maps.append([resolve_element(grp, tok, f"{where}.factors[{i}][{j}]")
                         for j, tok in enumerate(factor_maps)])
        return FiniteTarget(grp, maps)
    if kind == "torus-semidirect-targets":
        rank = _require(d, "rank", int, where)
        maps = []
        for i, factor_maps in enumerate(_require(d, "factors", list, where)):
            entries = []
            for j, entry in enumerate(factor_maps):
                sub = f"{where}.factors[{i}][{j}]"
                coords = _require(entry, "torus", list, sub)
                point = TorusPoint(
                    Fraction(int(num), int(den)) for num, den in coords)
                matrix = _int_rows(_require(entry, "matrix", list, sub), sub)
                entries.append((point, tuple(tuple(r) for r in matrix)))
            maps.append(entries)
        return TorusSemidirectTarget(rank, maps)
    raise SchemaError(f"{where}: unknown target kind {kind!r}")


def lie_datum_from_descriptor(d: dict, where: str = "lie-datum") -> LieDatum:
    """{"z", "factors": ["A26", ...], "delta": {generators and images}}."""
    check_schema(d, where)
    z = _require(d, "z", int, where)
    factors = [simple_type(tok) for tok in _require(d, "factors", list, where)]
    delta = _optional(d, "delta", dict, where)
    generators = []
    if delta is not None:
        simple_gens = _require(delta, "simple_part_generators", list, where)
        images = _require(delta, "phi_images", list, where)
        if len(simple_gens) != len(images):
            raise SchemaError(
                f"{where}: generator and image counts differ")
        for i, (s, t) in enumerate(zip(simple_gens, images)):
            if not isinstance(s, list) or \
                    not all(isinstance(x, int) for x in s):
                raise SchemaError(f"{where}: generator {i} must be integers")
            coords = []
            for pair in t:
                if not (isinstance(pair, list) and len(pair) == 2
                        and all(isinstance(x, int) for x in pair)):
                    raise SchemaError(
                        f"{where}: image {i} entries must be [num, den]")
                coords.append(Fraction(pair[0], pair[1]))
            generators.append((tuple(s), tuple(coords)))
    return LieDatum(z, factors, generators)
