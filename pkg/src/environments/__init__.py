"""
Environments Module
===================

Processos geradores de dados dos experimentos.
"""
