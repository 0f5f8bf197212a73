"""
skelmap
~~~~~~~

Skeleton decompositions of random planar triangulations: exact generating
functions, bijective codecs, exact samplers and geodesic experiments.
"""
