"""Physical constants pinned to CODATA-2018 so results are bit-reproducible."""

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J/K (exact since 2019 SI)
C_LIGHT = 299792458.0  # m/s (exact)

CODATA_VERSION = "2018"
