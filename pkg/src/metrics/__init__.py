"""
Metrics Module
==============

Distância TV, cobertura e diagnósticos de estabilidade.
"""
