"""Toolkit for the transitive-graph analysis of the evasiveness conjecture on 10 vertices.

Submodules:
  perm    -- permutations, explicit small groups, quotients, cyclic homomorphisms
  graphs  -- labelled graphs, circulants, Petersen pair, catalog and inclusion poset
  forms   -- integer linear forms over class indicators and their text grammar
  orbits  -- edge orbits of a group action and Euler-characteristic expansions
  chains  -- fixed-point subgroup chains: verification and bounded search
  solve   -- the indicator constraint system and exhaustive 0/1 enumeration
  lemmas  -- bundled end-to-end verification cases T1..T24
  cli     -- command-line front end
"""

__version__ = "0.1.0"
