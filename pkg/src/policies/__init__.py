"""
Policies Module
===============

Regras adaptativas de amostragem.
"""
