"""Physical constants in the MeV/fm unit system used throughout the package."""

HBARC_MEV_FM = 197.327       # hbar * c
NUCLEON_MASS_MEV = 938.919   # average nucleon rest energy M c^2
E2_MEV_FM = 1.44             # e^2 = alpha * hbar * c
FM2_TO_MB = 10.0             # 1 fm^2 = 10 mb
OSC_COEFF_MEV = 41.0         # hbar*omega = 41 * A^(-1/3) MeV
