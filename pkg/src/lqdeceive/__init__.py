"""Deception-gain synthesis against data-driven linear-quadratic adversaries.

A defender who knows the plant injects state feedback ``u = Lambda x`` while
an adversary gathers data to learn a maximizing linear-quadratic attack.  The
library predicts the gain the adversary will learn on the spoofed plant,
optimizes ``Lambda`` so that prediction lands near a chosen target gain, and
validates the result by simulating adversary learners on the spoofed loop.
"""

from .matsolve import (
    SolveCertificate,
    solve_are_max,
    solve_are_min,
    solve_lyapunov,
    spectral_abscissa,
)
from .deception import (
    AdversaryObjective,
    BsorConfig,
    DeceptionIterate,
    DeceptionProblem,
    DeceptionResult,
    DeepStabilize,
    ExistenceCertificate,
    Plant,
    SolveStatus,
    Zero,
    adjoint_pi,
    bsor_solve,
    check_existence_condition,
    closed_loop_energy,
    deception_cost,
    deception_gradient,
    init_gain,
    nominal_attack,
    spoofed_attack,
    spoofed_value,
)
from .dual import (
    DualProblem,
    dual_bsor_solve,
    dual_cost,
    dual_gradient,
    nominal_controller,
    poisoned_controller,
    range_condition,
)
from .robustness import (
    MismatchSpec,
    mismatched_cost,
    robustness_report,
    suppression_ratios,
)
from .adversary import (
    LearnerTrace,
    TrajectorySpec,
    datadriven_pi,
    kleinman_pi_max,
    simulate_trajectory,
)

__version__ = "0.1.0"
