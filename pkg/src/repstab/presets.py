"""Named group and graph-of-groups presets.

Groups are built from explicit element sets with a composition rule and
validated like any user table. Graph presets cover a free product of
cyclic groups, the infinite dihedral group, and an HNN extension of a
cyclic group over its index-two subgroup.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from .errors import ValidationError
from .graphs import GraphOfGroups, graph_of_groups, serre_graph
from .groups import FiniteGroup, validate_group


def group_from_elements(elements, compose, name: str) -> FiniteGroup:
    """Multiplication table from hashable elements and a composition rule."""
    elements = list(elements)
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[compose(a, b)] for b in elements] for a in elements]
    return validate_group(table, name=name)


def cyclic_group(n: int, name: str | None = None) -> FiniteGroup:
    if n <= 0:
        raise ValidationError("cyclic order must be positive")
    return group_from_elements(range(n), lambda a, b: (a + b) % n, name or f"Z{n}")


def klein_four_group() -> FiniteGroup:
    pairs = [(a, b) for a in range(2) for b in range(2)]
    return group_from_elements(pairs, lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2), "V4")


def symmetric_group(n: int) -> FiniteGroup:
    if not 1 <= n <= 4:
        raise ValidationError("symmetric groups are provided up to S4")
    elems = sorted(permutations(range(n)))
    return group_from_elements(elems, lambda a, b: tuple(a[b[i]] for i in range(n)), f"S{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; elements (rotation, flip)."""
    if n < 1:
        raise ValidationError("dihedral parameter must be positive")
    elems = [(r, f) for f in range(2) for r in range(n)]

    def compose(x, y):
        r1, f1 = x
        r2, f2 = y
        # (r1, f1) * (r2, f2): flips conjugate rotations
        r = (r1 + (r2 if f1 == 0 else -r2)) % n
        return (r, (f1 + f2) % 2)

    return group_from_elements(elems, compose, f"D{n}")


def quaternion_group() -> FiniteGroup:
    units = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
            ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
            ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j"}

    def split(x):
        return (-1, x[1:]) if x.startswith("-") else (1, x)

    def compose(x, y):
        sx, ux = split(x)
        sy, uy = split(y)
        if ux == "1":
            prod, s = uy, sx * sy
        elif uy == "1":
            prod, s = ux, sx * sy
        else:
            sp, prod = split(base[(ux, uy)])
            s = sx * sy * sp
        return prod if s == 1 else "-" + prod

    return group_from_elements(units, compose, "Q8")


def alternating_group_4() -> FiniteGroup:
    def parity(p):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
        return inv % 2

    elems = sorted(p for p in permutations(range(4)) if parity(p) == 0)
    return group_from_elements(elems, lambda a, b: tuple(a[b[i]] for i in range(4)), "A4")


_GROUP_BUILDERS = {
    **{f"Z{n}": (lambda n=n: cyclic_group(n)) for n in range(1, 13)},
    "V4": klein_four_group,
    "S3": lambda: symmetric_group(3),
    "S4": lambda: symmetric_group(4),
    "D4": lambda: dihedral_group(4),
    "Q8": quaternion_group,
    "A4": alternating_group_4,
}


def group_preset_names() -> tuple[str, ...]:
    return tuple(sorted(_GROUP_BUILDERS))


@lru_cache(maxsize=None)
def group_preset(name: str) -> FiniteGroup:
    try:
        builder = _GROUP_BUILDERS[name]
    except KeyError:
        raise ValidationError(
            f"unknown group preset {name!r}; available: {', '.join(group_preset_names())}") from None
    return builder()


def _free_product_graph(name: str, left: FiniteGroup, right: FiniteGroup) -> GraphOfGroups:
    graph = serre_graph(2, [(0, 1)])
    trivial = group_preset("Z1")
    return graph_of_groups(graph, [left, right], [trivial],
                           injection_maps=[[right.identity], [left.identity]],
                           name=name)


def _z2_free_z3() -> GraphOfGroups:
    return _free_product_graph("Z2_free_Z3", group_preset("Z2"), group_preset("Z3"))


def _infinite_dihedral() -> GraphOfGroups:
    return _free_product_graph("infinite_dihedral", group_preset("Z2"), group_preset("Z2"))


def _hnn_z4_over_z2() -> GraphOfGroups:
    graph = serre_graph(1, [(0, 0)])
    z4 = group_preset("Z4")
    z2 = group_preset("Z2")
    onto_index_two = [0, 2]  # 1 in Z2 lands on the order-two element of Z4
    return graph_of_groups(graph, [z4], [z2],
                           injection_maps=[onto_index_two, onto_index_two],
                           name="hnn_Z4_over_Z2")


_GRAPH_BUILDERS = {
    "Z2_free_Z3": _z2_free_z3,
    "infinite_dihedral": _infinite_dihedral,
    "hnn_Z4_over_Z2": _hnn_z4_over_z2,
}


def graph_preset_names() -> tuple[str, ...]:
    return tuple(sorted(_GRAPH_BUILDERS))


@lru_cache(maxsize=None)
def graph_preset(name: str) -> GraphOfGroups:
    try:
        builder = _GRAPH_BUILDERS[name]
    except KeyError:
        raise ValidationError(
            f"unknown graph preset {name!r}; available: {', '.join(graph_preset_names())}") from None
    return builder()
