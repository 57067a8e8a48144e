"""Numerical charts, bundles and isotopies for spaces of closed curves.

Closed oriented curves in flat space, on the round sphere or on implicit
level-set surfaces are handled through tubular charts (normal sections).
Embeddings of a reference curve form a bundle over those curves with the
orientation-preserving circle diffeomorphisms as structure group, and paths
of curves are realised by flows of compactly supported vector fields.
"""

from .ambient import AmbientManifold
from .atlas import ChartPoint, NormalSection, chart_apply, chart_contains, correspondence, transition
from .bundle import (
    CircleDiffeo,
    DiscreteEmbedding,
    EmbeddingFamily,
    act,
    is_embedding,
    local_section,
    project_p,
    project_p_differential,
    reparametrize_to_section,
    trivialization_gauge,
    trivialize,
    trivialize_inverse,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .isotopy import (
    AmbientFlow,
    EmbeddingPath,
    GrassmannPath,
    concat_paths,
    extend_to_diffeotopy,
    lift_path,
    smooth_family_from_path,
    transport,
)
from .submanifold import (
    OrientedSubmanifold,
    build_submanifold,
    hausdorff_distance,
    orientation_sign,
    reverse_orientation,
)
from .tubular import TubularChart, tubular_radius

__all__ = [
    "act",
    "AmbientFlow",
    "AmbientManifold",
    "build_submanifold",
    "chart_apply",
    "chart_contains",
    "ChartPoint",
    "CircleDiffeo",
    "concat_paths",
    "correspondence",
    "DEFAULT_TOLERANCES",
    "DiscreteEmbedding",
    "EmbeddingFamily",
    "EmbeddingPath",
    "extend_to_diffeotopy",
    "GrassmannPath",
    "hausdorff_distance",
    "is_embedding",
    "lift_path",
    "local_section",
    "NormalSection",
    "orientation_sign",
    "OrientedSubmanifold",
    "project_p",
    "project_p_differential",
    "reparametrize_to_section",
    "reverse_orientation",
    "smooth_family_from_path",
    "Tolerances",
    "transition",
    "transport",
    "trivialization_gauge",
    "trivialize",
    "trivialize_inverse",
    "tubular_radius",
    "TubularChart",
]

__version__ = "0.1.0"
