"""Default numerical tolerances and detector thresholds.

Every knob here is overridable: the polynomial and geometry operations accept
explicit tolerance arguments, and the CLI exposes the common ones as flags.
"""

from dataclasses import dataclass

# Polynomial arithmetic.
TAU_COEFF = 1e-12   # trailing-coefficient trim, relative to max coefficient modulus
TAU_ROOT = 1e-6     # root matching across polynomials (GCD, deflation)
TAU_CLUSTER = 1e-6  # root clustering into multiplicities
TAU_RES = 1e-8      # relative residual bound for accepted roots

# Projective geometry.
TAU_PROJ = 1e-8     # projective equality threshold on the Fubini-Study distance

# General position.
TAU_GP = 1e-10      # positivity threshold for determinant products

# Zero-set matching: the default is this factor times the region diameter.
TAU_MATCH_REL = 1e-6


@dataclass(frozen=True)
class MartyThresholds:
    """Empirical verdict thresholds for the derivative-sup boundedness detector.

    A finite family can only ever suggest normality or its failure; these
    declared cutoffs make the suggestion reproducible.
    """

    cap: float = 1e3           # family sup below this (and no growth) => "bounded"
    growth_factor: float = 2.0  # total growth that counts as blow-up
    window: int = 3             # trailing members that must grow monotonically


DEFAULT_MARTY = MartyThresholds()
