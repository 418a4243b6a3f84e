"""
Utils Module
============

Grades de checkpoints e utilitários auxiliares.
"""
