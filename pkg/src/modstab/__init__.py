"""modstab: stability verification for a radical functional equation in modular spaces.

Given a perturbed solution of

    phi(x) + phi(y) + phi(z) = q * phi(((x**s + y**s + z**s) / q) ** (1/s))

with the perturbation controlled by a function alpha, the package constructs
the nearby exact solution by dual scaling limits and by fixed-point iteration
of a contraction operator, evaluates certified error bounds for the
reconstruction, and verifies the bounds and the equation numerically on
sample grids.
"""

from .direct import (
    LimitResult,
    Mode,
    SeriesBound,
    approximant_contract,
    approximant_expand,
    construct_limit,
    contract_bound_closed_form,
    contract_regime_threshold,
    limit_function,
    series_bound_contract,
    series_bound_expand,
)
from .equation import (
    ControlFunction,
    EquationParams,
    control_eval,
    defect,
    pair_additivity_defect,
    parse_control,
    radical_combine,
    radical_root,
)
from .errors import (
    ArgumentError,
    ConfigError,
    ContractViolation,
    DefectHypothesisError,
    EvaluationError,
    ModstabError,
    RangeError,
    RegimeError,
    TailUnknownError,
)
from .fixedpoint import (
    ContractionCertificate,
    FixedPointResult,
    audit_defect_hypothesis,
    estimate_contraction,
    fixed_point_solve,
    lambda_apply,
    rho_hat_distance,
)
from .functions import FunctionHandle, envelope_noise, monomial, parse_expression, sine
from .modular import (
    AxiomCheck,
    AxiomReport,
    ModularSpec,
    check_modular_axioms,
    estimate_delta2,
    parse_modular,
    rho_eval,
)
from .sampling import Grid, corner_triples, seeded_triples, standard_ladder
from .verify import (
    CheckOutcome,
    cross_check,
    verify_oddness,
    verify_radical_additivity,
    verify_stability_bound,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # modular
    "ModularSpec", "rho_eval", "estimate_delta2", "check_modular_axioms",
    "AxiomCheck", "AxiomReport", "parse_modular",
    # functions
    "FunctionHandle", "monomial", "sine", "envelope_noise", "parse_expression",
    # equation
    "EquationParams", "ControlFunction", "radical_root", "radical_combine",
    "defect", "pair_additivity_defect", "control_eval", "parse_control",
    # direct method
    "Mode", "LimitResult", "SeriesBound", "approximant_contract",
    "approximant_expand", "limit_function", "construct_limit",
    "series_bound_contract", "series_bound_expand",
    "contract_bound_closed_form", "contract_regime_threshold",
    # fixed point
    "ContractionCertificate", "FixedPointResult", "lambda_apply",
    "estimate_contraction", "rho_hat_distance", "audit_defect_hypothesis",
    "fixed_point_solve",
    # verification
    "CheckOutcome", "verify_radical_additivity", "verify_oddness",
    "verify_stability_bound", "cross_check",
    # sampling
    "Grid", "standard_ladder", "seeded_triples", "corner_triples",
    # errors
    "ModstabError", "EvaluationError", "ArgumentError", "RangeError",
    "RegimeError", "ContractViolation", "DefectHypothesisError",
    "TailUnknownError", "ConfigError",
]
