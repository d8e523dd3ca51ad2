from ._orbitlab import (
    OrbitlabError,
    box_count,
    cassels,
    classes,
    construct,
    group_order,
    group_order_formula,
    invariants,
    local_image,
    orbit_census,
    pencil,
    selfdual,
    sweep,
)

__all__ = [
    "OrbitlabError",
    "box_count",
    "cassels",
    "classes",
    "construct",
    "group_order",
    "group_order_formula",
    "invariants",
    "local_image",
    "orbit_census",
    "pencil",
    "selfdual",
    "sweep",
]
