"""Connected components, shell containment and assembly of the final d-cells."""

from .assembly import (
    Assembly,
    PeeledComponent,
    arrange_skeleton,
    assemble,
    find_container_cell,
    locate,
    peel,
    peel_component,
)
from .components import Component, ComponentSet, facet_components, split_components
from .containment import ContainmentTree, containment, point_in_shell, ray_directions

__all__ = [
    "Assembly",
    "Component",
    "ComponentSet",
    "ContainmentTree",
    "PeeledComponent",
    "arrange_skeleton",
    "assemble",
    "containment",
    "facet_components",
    "find_container_cell",
    "locate",
    "peel",
    "peel_component",
    "point_in_shell",
    "ray_directions",
    "split_components",
]
