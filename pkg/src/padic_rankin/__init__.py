"""p-adic modular forms and half-ordinary Rankin-Selberg p-adic L-values at level 1."""
