"""Physical constants and unit conversions (SI).

All internal computation uses seconds, meters, kilograms. The year is the
Julian year and the megaparsec is pinned to the 5-digit value used for the
published rate conversions, so reports are reproducible to the digit.
"""

C_M_PER_S = 299_792_458.0          # speed of light
G_M3_KG_S2 = 6.674e-11             # Newton's gravitational constant
YEAR_S = 3.1557e7                  # Julian year, seconds
MPC_KM = 3.0857e19                 # megaparsec in kilometers
MPC_M = MPC_KM * 1e3
GYR_S = 1e9 * YEAR_S
AU_M = 1.495978707e11
AU_LIGHT_TIME_S = AU_M / C_M_PER_S # ~499 s

CONSTANTS_TABLE = (
    ("c_m_per_s", C_M_PER_S),
    ("G_m3_kg_s2", G_M3_KG_S2),
    ("year_s", YEAR_S),
    ("mpc_km", MPC_KM),
    ("mpc_m", MPC_M),
    ("gyr_s", GYR_S),
    ("au_m", AU_M),
    ("au_light_time_s", AU_LIGHT_TIME_S),
)
