"""cocycle-lab: exact finite-group cohomology plus numerical loop-group cocycles.

Two engines under one roof:

* an exact engine for cochain complexes of finite groups over Z/m
  (cohomology groups, the filtration spectral sequence of an extension,
  five- and seven-term exact sequences, the extension <-> 2-cocycle
  dictionary), everything certified by enumeration or exact linear
  algebra, never by floating point;

* a numerical engine for SU(2)-valued map families on the disk and the
  solid cylinder (Kac-Moody / Mickelsson 2-cocycle, WZW action, their
  mod-Z compatibility identities, current-algebra and Bott-Virasoro
  cocycles, the Diff+(S^1) covering-class cocycle), with quadrature
  residuals and observed convergence orders reported for every check.
"""

__version__ = "0.1.0"
