"""Spiking voice activity detection with bin encoding and max-margin tempotrons."""
from ._backend import BACKEND
from .encoder import EncoderConfig, SpikePattern, bin_index, encode_frame, spike_time
from .features import AudioClip, FeatureConfig, FrameSet, Label, NormStats, fit_norm, normalize
from .metrics import Metrics, score
from .neuron import NeuronParams, NeuronTrace, kernel, kernel_peak, simulate
from .pipeline import classify, decide_frame, smooth
from .trainer import TempotronModel, TrainConfig, train, train_step

__version__ = "0.1.0"
