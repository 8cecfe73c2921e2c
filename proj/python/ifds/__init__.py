"""Same-context IFDS reachability queries backed by a tree-decomposition index."""

from ._core import (
    Index,
    IndexFormatError,
    Instance,
    InstanceError,
    QueryError,
    RelationError,
    gen_analysis,
    gen_random,
    load_instance,
    nopp_pair,
    parse_instance,
    pointer_example,
)

__all__ = [
    "Index",
    "IndexFormatError",
    "Instance",
    "InstanceError",
    "QueryError",
    "RelationError",
    "gen_analysis",
    "gen_random",
    "load_instance",
    "nopp_pair",
    "parse_instance",
    "pointer_example",
]
