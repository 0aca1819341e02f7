"""Unambiguous comparison of unknown unitary channels via process POVMs."""

from .comparator import (
    ComparisonReport,
    NoErrorReport,
    Strategy,
    UniquenessProbe,
    average_success,
    average_success_mc,
    make_strategy,
    overall_success,
    random_unambiguous_ppovm,
    run_pair,
    sequential_witness,
    success_bound,
    twirl_choi,
    uniqueness_probe,
    verify_no_error,
)
from .haar import McEstimate, average_channel_exact, average_channel_mc, haar_sample, twirl_exact, twirl_mc
from .qobj import (
    ChoiOp,
    Ppovm,
    QState,
    UnitaryOp,
    choi_of_unitary,
    choi_of_unitary_pair,
    max_entangled,
    max_entangled_vec,
    outcome_probability,
    ppovm_from_experiment,
)
from .symmetry import (
    SymmetrySplit,
    build_split,
    random_antisymmetric_state,
    random_symmetric_state,
    uniform_antisymmetric_state,
    uniform_symmetric_state,
)

__version__ = "0.1.0"

__all__ = [
    "ChoiOp",
    "ComparisonReport",
    "McEstimate",
    "NoErrorReport",
    "Ppovm",
    "QState",
    "Strategy",
    "SymmetrySplit",
    "UnitaryOp",
    "UniquenessProbe",
    "average_channel_exact",
    "average_channel_mc",
    "average_success",
    "average_success_mc",
    "build_split",
    "choi_of_unitary",
    "choi_of_unitary_pair",
    "haar_sample",
    "make_strategy",
    "max_entangled",
    "max_entangled_vec",
    "outcome_probability",
    "overall_success",
    "ppovm_from_experiment",
    "random_antisymmetric_state",
    "random_symmetric_state",
    "random_unambiguous_ppovm",
    "run_pair",
    "sequential_witness",
    "success_bound",
    "twirl_choi",
    "twirl_exact",
    "twirl_mc",
    "uniform_antisymmetric_state",
    "uniform_symmetric_state",
    "uniqueness_probe",
    "verify_no_error",
    "__version__",
]
