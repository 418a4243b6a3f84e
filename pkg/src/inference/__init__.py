"""
Inference Module
================

Estimadores frequentistas e posteriores bayesianas.
"""
