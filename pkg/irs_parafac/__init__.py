from irs_parafac import (
    estimators,
    harness,
    kit,
    registry,
    system_model,
    utils,
)
from irs_parafac.version import __version__
