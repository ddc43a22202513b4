"""Finite relational dynamics over small categories.

Motors (finite categories), non-deterministic dynamics with exhaustive
property checkers, clocks and realization enumeration, open dynamics with
datations, interacting dynamic families, and the dynamics they generate.
"""

from .category import (
    Arrow,
    Category,
    Functor,
    Graph,
    compose_functors,
    identity_functor,
    underlying_graph,
    validate_category,
    validate_functor,
)
from .dynamics import (
    Dynamics,
    PropertyReport,
    Transition,
    Violation,
    check_categorical,
    check_deterministic,
    check_proper,
    check_quasi_deterministic,
    check_subcategorical,
    clean,
    compose_transitions,
    empty_dynamics,
    intersect_dynamics,
    is_subdynamics,
    largest_subcategorical,
    make_dynamics,
    out_of_play_states,
    union_dynamics,
)
from .family import (
    ClockSync,
    DynamicFamily,
    Interaction,
    build_family,
    build_interaction,
    rb,
    rb_image,
    rb_inverse,
)
from .generation import (
    GeneratedDynamics,
    StabilityReport,
    mono_engender,
    naive_primo_engender,
    primo_engender,
    quotient_engender,
    stability_report,
)
from .open_dynamics import (
    DynamorphismReport,
    MultiDynamics,
    OpenDynamics,
    check_dynamorphism,
    check_multi_dynamorphism,
    check_open_dynamorphism,
    clean_dynamorphism,
    make_multi_dynamics,
    mono_open_dynamics,
    parametric_quotient,
    semi_proper_clean,
    validate_open_dynamics,
)
from .temporal import (
    Clock,
    Realization,
    RealizationSet,
    SizeGuard,
    enumerate_h_realizations,
    enumerate_realizations,
    is_realization,
    oracle_h_realizations,
    passes_then,
    passes_through,
    succession,
    validate_clock,
)

__all__ = [name for name in dir() if not name.startswith("_")]
