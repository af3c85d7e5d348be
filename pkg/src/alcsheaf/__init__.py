"""Exact computations with sheaves of structure-algebra modules on alcoves.

Subpackages follow the pipeline: root systems and pairings (`rootsys`),
alcove combinatorics and the generic order (`alcoves`), exact graded
linear algebra over the symmetric algebra of the coweight lattice
(`gralg`), the structure algebra and its module operations (`zmod`),
finitely supported flabby sheaves on alcove posets (`sheaves`), wall
crossing functors and the projective-sheaf algorithm (`wallcross`), and
a batch CLI (`cli`).
"""

__version__ = "0.1.0"
