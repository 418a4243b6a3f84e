"""
Config Module
=============

Configurações da biblioteca de simulação.
"""
