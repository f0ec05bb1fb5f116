"""Coincidence theory on finite graphs, made executable.

Exact piecewise-linear maps between graphs, coincidence detection with
rational arithmetic, constructive removal of coincidences by homotopy,
and an independent certifier on free fundamental groups.
"""
from .certify import (
    InducedHom,
    brute_force_conjugator,
    circle_degree,
    grid_oracle,
    induced_hom,
    maps_homotopic,
    nielsen_circle,
    render_certificate,
    simultaneously_conjugate,
)
from .graphs import (
    Dart,
    EdgeRec,
    ForkRoute,
    ForkRouteError,
    Graph,
    GraphClass,
    classify,
    fork_route,
    path_distance,
    spanning_tree,
    subdivide,
    validate,
)
from .homotopy import HomotopyStep, LocalWindow, StepKind, TrackFragment
from .plmap import (
    CoincidencePoint,
    DegenerateOverlapError,
    EdgeTrack,
    PLMap,
    TrackSegment,
    Transversality,
    coincidences,
    compose,
    evaluate,
    general_position,
    is_coincidence_free,
    track_from_points,
    validate_map,
)
from .points import GraphPoint, InteriorPoint, VertexPoint
from .removal import (
    CircleObstruction,
    CoincidenceFree,
    RemovalError,
    RemovalReport,
    UnsupportedCodomainError,
    deform_to_constants,
    fork_maneuver,
    normal_form,
    push_off,
    remove_all,
)
from .textio import (
    Document,
    ParseError,
    parse_document,
    parse_map_file,
    parse_point,
    serialize_graph,
    serialize_map,
    serialize_map_file,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
