"""
Adaptive BvM Simulation
=======================

Simulação de coleta adaptativa de dados, posteriores bayesianas exatas e
estimativas Monte Carlo da distância TV até a normal representativa.
"""

__version__ = "1.0.0"
__author__ = "Leandro Afonso"
