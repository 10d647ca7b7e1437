"""Scalar diffraction as a single-scale 2D wavelet transform with optical chirplets."""
