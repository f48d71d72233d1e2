"""Normal symmetric and asymmetric binary covering codes: exact norms and
radii, ADS/ASDS constructions, randomised norm-patched codes and the density
bound calculus."""

__version__ = "0.1.0"
