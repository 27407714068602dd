"""Deterministic instance generators and parameter sweeps.

An instance is a JSON-style dict {"group": {...}, "set": {...}} whose set
fragment names one of the generators below.  Generation is a pure function
of that dict: the random and perturbed generators draw from the
counter-based PRNG in ``prng`` with the seed given in the instance, so
the same instance yields the same set in any run or implementation.
"""

from __future__ import annotations

import copy
import itertools
from typing import Iterable

from .budget import charge_pairs
from .errors import EmptySetError, ParameterError
from .groups import Element, Group, group_from_spec
from .gset import DoublingStats, GSet, doubling_stats
from .prng import splitmix64

SET_TYPES = (
    "explicit",
    "subgroup",
    "coset_union",
    "interval",
    "ball",
    "random",
    "perturbed_subgroup",
)


def _coerce_all(group: Group, raw, what: str) -> list[Element]:
    if not isinstance(raw, list) or not raw:
        raise ParameterError(f"{what} must be a nonempty list of element encodings")
    return [group.coerce(x) for x in raw]


def _nat(spec: dict, key: str, *, minimum: int = 0) -> int:
    value = spec.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ParameterError(f"set spec field {key!r} must be an integer >= {minimum}, got {value!r}")
    return value


def closure(group: Group, generators: Iterable[Element]) -> GSet:
    """The subgroup generated by ``generators`` (finite, so products suffice)."""
    gens = [group.coerce(g) for g in generators]
    members = {group.identity}
    frontier = [group.identity]
    while frontier:
        charge_pairs(len(frontier) * len(gens))
        new = []
        for x in frontier:
            for g in gens:
                y = group.multiply(x, g)
                if y not in members:
                    members.add(y)
                    new.append(y)
        frontier = new
    return GSet(group, members, validate=False)


def ball(group: Group, generators: Iterable[Element], radius: int) -> GSet:
    """Words of length at most ``radius`` in the generators (identity at 0).

    The generating set is used exactly as given: inverses participate only
    if listed, so the ball is the breadth-first expansion of {identity}
    under right multiplication.
    """
    gens = [group.coerce(g) for g in generators]
    members = {group.identity}
    frontier = [group.identity]
    for _ in range(radius):
        charge_pairs(len(frontier) * len(gens))
        new = []
        for x in frontier:
            for g in gens:
                y = group.multiply(x, g)
                if y not in members:
                    members.add(y)
                    new.append(y)
        if not new:
            break
        frontier = new
    return GSet(group, members, validate=False)


def random_set(group: Group, size: int, seed: int) -> GSet:
    """``size`` distinct elements drawn by counter-based index sampling."""
    if size < 1:
        raise EmptySetError("random set size must be at least 1")
    if size > group.order:
        raise ParameterError(f"random set size {size} exceeds the group order {group.order}")
    chosen: set[Element] = set()
    counter = 0
    while len(chosen) < size:
        index = splitmix64(seed, counter) % group.order
        chosen.add(group.element_at(index))
        counter += 1
    return GSet(group, chosen, validate=False)


def perturbed_subgroup(group: Group, generators: Iterable[Element], swaps: int, seed: int) -> GSet:
    """A subgroup with ``swaps`` elements exchanged for outside elements.

    Each swap removes one current member and admits one element from the
    complement (never the one just removed), both picked by the counter
    PRNG, so the size stays |H| while the structure degrades gradually.
    """
    base = closure(group, generators)
    charge_pairs(group.order * max(swaps, 1))
    cur = list(base.elements)
    for j in range(swaps):
        rm_index = splitmix64(seed, 2 * j) % len(cur)
        removed = cur.pop(rm_index)
        complement = [x for x in group.elements() if x not in cur and x != removed]
        if not complement:
            cur.append(removed)
            continue
        cur.append(complement[splitmix64(seed, 2 * j + 1) % len(complement)])
        cur.sort()
    return GSet(group, cur, validate=False)


def generate(spec: dict) -> GSet:
    """Realize an instance spec {"group": {...}, "set": {...}} as a GSet."""
    if not isinstance(spec, dict):
        raise ParameterError("instance spec must be a JSON object")
    group = group_from_spec(spec.get("group"))
    set_spec = spec.get("set")
    if not isinstance(set_spec, dict) or "type" not in set_spec:
        raise ParameterError("instance spec needs a 'set' object with a 'type'")
    kind = set_spec["type"]

    if kind == "explicit":
        return GSet(group, _coerce_all(group, set_spec.get("elements"), "explicit elements"))
    if kind == "subgroup":
        return closure(group, _coerce_all(group, set_spec.get("generators"), "subgroup generators"))
    if kind == "coset_union":
        sub = closure(group, _coerce_all(group, set_spec.get("generators"), "subgroup generators"))
        reps = _coerce_all(group, set_spec.get("reps"), "coset representatives")
        members = set()
        charge_pairs(len(reps) * len(sub))
        for rep in reps:
            for h in sub:
                members.add(group.multiply(rep, h))
        return GSet(group, members, validate=False)
    if kind == "interval":
        if group.kind != "cyclic":
            raise ParameterError(f"interval sets require a cyclic group, got {group.kind}")
        start = set_spec.get("start")
        if not isinstance(start, int) or isinstance(start, bool):
            raise ParameterError(f"interval start must be an integer, got {start!r}")
        length = _nat(set_spec, "length", minimum=1)
        if length > group.order:
            raise ParameterError(f"interval length {length} exceeds the group order {group.order}")
        return GSet(group, (((start + i) % group.order,) for i in range(length)), validate=False)
    if kind == "ball":
        return ball(
            group,
            _coerce_all(group, set_spec.get("generators"), "ball generators"),
            _nat(set_spec, "radius"),
        )
    if kind == "random":
        return random_set(group, _nat(set_spec, "size", minimum=1), _nat(set_spec, "seed"))
    if kind == "perturbed_subgroup":
        return perturbed_subgroup(
            group,
            _coerce_all(group, set_spec.get("generators"), "subgroup generators"),
            _nat(set_spec, "swaps"),
            _nat(set_spec, "seed"),
        )
    raise ParameterError(f"unknown set type {kind!r}; expected one of {', '.join(SET_TYPES)}")


def _apply_dotted(spec: dict, path: str, value) -> None:
    parts = path.split(".")
    node = spec
    for part in parts[:-1]:
        nxt = node.setdefault(part, {})
        if not isinstance(nxt, dict):
            raise ParameterError(f"sweep path {path!r} walks through a non-object")
        node = nxt
    node[parts[-1]] = value


def family_sweep(base: dict, grid: dict) -> list[tuple[dict, DoublingStats]]:
    """Instantiate ``base`` at every grid point and compute doubling stats.

    ``grid`` maps dotted paths into the instance spec (e.g. "set.length")
    to finite value lists.  Points are visited in row-major order over the
    lists with keys in their given order, so output order is deterministic.
    """
    if not isinstance(base, dict):
        raise ParameterError("sweep base must be an instance spec object")
    if not isinstance(grid, dict) or not grid:
        raise ParameterError("sweep grid must be a non-empty object of value lists")
    keys = list(grid)
    for key in keys:
        if not isinstance(grid[key], list) or not grid[key]:
            raise ParameterError(f"sweep grid entry {key!r} must be a non-empty list")
    out = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        spec = copy.deepcopy(base)
        for key, value in zip(keys, combo):
            _apply_dotted(spec, key, value)
        out.append((spec, doubling_stats(generate(spec))))
    return out
