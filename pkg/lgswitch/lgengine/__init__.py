"""
The `lgengine` app computes every Leggett-Garg quantity of a three-time scenario:

1.  The domain types in `observables`: a `QuantumState`, a `DichotomicObservable`
    with its projectors and eigenbasis, and the `LGScenario` that generates the
    Heisenberg-picture observables M₁, M₂, M₃ from a base observable and a
    Hamiltonian.

2.  Sequential measurement statistics in `sequential`: unsharp POVM effects, the joint
    probability of a (possibly unsharp) measurement followed by a sharp one, and the
    sequential correlation, which is computed in two independent ways and checked.

3.  Quasiprobabilities in `quasiprob`: the two-time Margenau-Hill distribution (and
    the complex Kirkwood values underneath), its moment expansion, the weak-value
    link, the doubly Kirkwood three-time distribution and all marginal
    (no-signalling-in-time) identities.

4.  The inequality families in `inequalities`: the two-time G2, the three-time K₃,
    the three-time G₃ and the combination of two three-time quasiprobabilities.

Everything is a pure function of immutable inputs.
"""
