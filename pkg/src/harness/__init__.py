"""
Harness Module
==============

Orquestração de experimentos, persistência e replay.
"""
