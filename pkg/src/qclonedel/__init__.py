"""Simulation of qubit cloning and deleting machines.

Machines are transformation tables whose ancilla states are known only
through their Gram matrix; scenarios push the input ``sqrt(x)|0> +
sqrt(1-x)|1>`` through cloners, deleters or both and score the outputs.
"""

from .errors import ConstraintError, DegenerateStateError, DomainError, UsageError
from .machines import (
    GeneralDeleterParams,
    ImperfectDeleterParams,
    MachineSpec,
    ValidationReport,
    bh_machine,
    catalog,
    general_delete_machine,
    imperfect_delete_machine,
    pb_delete_machine,
    qiu_machine,
    sigma_from_theta,
    validate_machine,
    wz_machine,
)
from .metrics import (
    AveragingRule,
    average_over_alpha2,
    fidelity_against_pure,
    hs_distance,
    universality_deviation,
)
from .qlin import (
    AncillaSpace,
    DensityOperator,
    LabeledKet,
    PureQubitState,
    inner_product,
    make_pure_state,
    normalize_density,
    reduce_density,
)
from .scenarios import (
    GramConvention,
    ScenarioReport,
    clone_delete_scenario,
    clone_report,
    clone_scenario,
    delete_report,
    delete_scenario,
    perturbation_table,
    pipeline_report,
    reproduce_paper,
)

__version__ = "0.1.0"
