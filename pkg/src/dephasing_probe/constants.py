"""Physical constants and atomic species data (SI units, CODATA 2018)."""

HBAR = 1.054571817e-34  # reduced Planck constant, J s
ATOMIC_MASS_KG = 1.66053906660e-27  # unified atomic mass unit, kg

# Atomic masses in u. Values overridable per model via explicit *_kg keys.
SPECIES_MASS_U = {
    "Na23": 22.990,
    "Rb87": 86.909,
}


def species_mass_kg(name: str) -> float:
    """Mass of a named species in kg."""
    try:
        return SPECIES_MASS_U[name] * ATOMIC_MASS_KG
    except KeyError:
        known = ", ".join(sorted(SPECIES_MASS_U))
        raise ValueError(f"unknown species {name!r}; known species: {known}") from None
