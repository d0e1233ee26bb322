"""Sigma functions of cyclic trigonal curves y_r^3 = k_r^2 k_s, y_s^3 = k_s^2 k_r."""

__version__ = "0.1.0"
