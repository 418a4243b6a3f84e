"""
Core Module
===========

Tipos fundamentais: trajetórias, acumuladores de Gram e fontes aleatórias.
"""
