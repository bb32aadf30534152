"""Physical constants (SI, exact 2019 definitions where applicable)."""

K_B = 1.380649e-23  # J/K
HBAR = 1.054571817e-34  # J s
ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg
BOHR_MAGNETON = 9.2740100783e-24  # J/T

#: Atomic masses in kg. ``K`` is the natural-abundance average.
MASSES = {
    "K": 39.0983 * ATOMIC_MASS_UNIT,
    "K-39": 38.96370649 * ATOMIC_MASS_UNIT,
    "K-41": 40.96182526 * ATOMIC_MASS_UNIT,
    "Na-23": 22.98976928 * ATOMIC_MASS_UNIT,
    "Rb-87": 86.90918053 * ATOMIC_MASS_UNIT,
    "Cs-133": 132.90545196 * ATOMIC_MASS_UNIT,
    "Ag-107": 106.905091 * ATOMIC_MASS_UNIT,
}
