"""
This is the module at the heart of `lgswitch`.

It defines the `settings` that `Django`_ uses for the command-line tools and ties
together the functionality of the apps:

1.  `linalg` provides the small dense complex linear algebra everything else is
    built on.
2.  `lgengine` computes sequential measurement statistics, two- and three-time
    quasiprobabilities and the Leggett-Garg inequality families.
3.  `switch` simulates the quantum-switch interferometer that reads the two-time
    quasiprobability off a post-selected amplitude.
4.  `search` scans and refines scenario parameters in search of negativity and
    inequality violations.
5.  `harness` holds the run configuration forms, the file output and the management
    commands ``quasiprob``, ``lgi``, ``switch``, ``sweep`` and ``verify``.

.. _Django: https://djangoproject.com
"""
