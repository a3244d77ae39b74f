from factories import (
    DichotomicObservableFactory,
    LGScenarioFactory,
    QuantumStateFactory,
)
from pytest_factoryboy import register

register(QuantumStateFactory)
register(DichotomicObservableFactory)
register(LGScenarioFactory, "lg_scenario")
