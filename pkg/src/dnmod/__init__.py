"""Determinantal differential equations D2/D3: exact Frobenius, mirror maps, spectral curves."""
