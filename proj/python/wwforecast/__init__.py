"""Python interface to the wastewater viral activity forecasting engine."""

try:
    from . import _wwforecast as _core  # installed layout
except ImportError:  # pragma: no cover - build-tree layout
    import _wwforecast as _core

MODEL_NAMES = _core.MODEL_NAMES
EngineError = _core.EngineError
__version__ = _core.__version__
aicc = _core.aicc
akaike_weights = _core.akaike_weights
backtest = _core.backtest
default_alphas = _core.default_alphas
epiweek_ending = _core.epiweek_ending
fit_subepidemic = _core.fit_subepidemic
forecast = _core.forecast
ingest = _core.ingest
simulate = _core.simulate
wis = _core.wis
wval_from_sd = _core.wval_from_sd

__all__ = [
    "MODEL_NAMES",
    "EngineError",
    "__version__",
    "aicc",
    "akaike_weights",
    "backtest",
    "default_alphas",
    "epiweek_ending",
    "fit_subepidemic",
    "forecast",
    "ingest",
    "simulate",
    "wis",
    "wval_from_sd",
]
