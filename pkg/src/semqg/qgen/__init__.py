from .config import TrainConfig
from .bleu import bleu
from .model import DecoderState, QGModel, StepOutput
from .data import QGExample, load_directory, prepare_examples
from .train import Adam, train
from .analyze import analyze_attention

__all__ = [
    "TrainConfig",
    "bleu",
    "DecoderState",
    "QGModel",
    "StepOutput",
    "QGExample",
    "load_directory",
    "prepare_examples",
    "Adam",
    "train",
    "analyze_attention",
]
