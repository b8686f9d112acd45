"""
Modular functionals and their numerically certified axioms
===========================================================

A modular rho generalizes a norm: it vanishes only at zero, ignores sign,
and respects convex combinations.  The two built-in kinds behave very
differently under doubling, and that difference decides which stability
constructions are available later:

* rho(u) = |u|**p doubles by exactly 2**p,
* rho(u) = exp(|u|) - 1 has no finite doubling constant at all.
"""

from modstab import (
    ModularSpec,
    check_modular_axioms,
    estimate_delta2,
    rho_eval,
    standard_ladder,
)

# Evaluate a few modulars pointwise.
for spec in (ModularSpec.power(1), ModularSpec.power(2), ModularSpec.exp()):
    vals = ", ".join(f"rho({u:g}) = {rho_eval(spec, u):.6g}" for u in (0.5, 1.0, 2.0))
    print(f"{spec.spec_string():<12} {vals}")

# Certify the axioms on the standard magnitude ladder 2^-3 .. 2^10.
ladder = standard_ladder()
print("\naxiom certification on the standard ladder:")
for spec in (ModularSpec.power(1), ModularSpec.power(3), ModularSpec.exp()):
    report = check_modular_axioms(spec, ladder)
    verdicts = "  ".join(f"{e.name}={'ok' if e.passed else 'FAIL'}"
                         for e in report.entries)
    print(f"  {spec.spec_string():<12} {verdicts}")

# Estimate the doubling constant: the power kind pins it to 2**p, while the
# exponential kind blows up across the ladder and gets flagged.
print("\ndoubling-constant estimation:")
for spec in (ModularSpec.power(1), ModularSpec.power(2), ModularSpec.power(3),
             ModularSpec.exp()):
    tau_hat, diverged = estimate_delta2(spec, ladder)
    label = "diverges" if diverged else f"tau_hat = {tau_hat:.6g}"
    print(f"  {spec.spec_string():<12} {label}")
