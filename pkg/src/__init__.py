"""
Gaussian process free energy, predictive losses and their random-matrix limits
"""
