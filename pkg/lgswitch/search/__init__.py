"""
The `search` app looks for quasiprobability negativity and inequality violations in the
family of precessing-qubit scenarios spanned by a `space.SearchSpace`.

A search minimizes one of the named objectives in `objectives`. `optimize.grid_sweep`
scans a deterministic grid and `optimize.refine` polishes the best grid point with a
derivative-free pattern search. `survey.implication_survey` samples random scenarios
and tests the claims that link the different inequality families.
"""
