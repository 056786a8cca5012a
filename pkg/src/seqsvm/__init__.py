"""seqsvm: one-vs-one linear SVMs compiled onto a single-MAC sequential
classifier, with fixed-point quantization, cycle-accurate simulation, Verilog
emission, and printed-electronics cost estimation."""

from .archsim import (
    ArchConfig,
    BatchResult,
    EngineState,
    FsmState,
    SimTrace,
    StorageUnit,
    compile_storage,
    engine_step,
    fsm_step,
    register_census,
    simulate,
    simulate_batch,
)
from .cost import CostReport, TechConfig, calibrate_power, compare_parallel, compare_storage, estimate
from .dataset import Dataset, SplitSpec, load_csv, split
from .ddag import Ddag, build_ddag, ddag_infer, ddag_predict_float, ddag_predict_quant, ovo_vote_infer
from .fxp import U4_4, FxpFormat, FxpValue, MacOverflow, mac_accumulate, truncate_to_format, width_for_range
from .hdlgen import HdlBundle, emit_golden_vectors, generate, parse_storage_constants
from .quant import (
    QuantizedModel,
    QuantReport,
    profile_accumulator,
    quantize_inputs,
    quantize_model,
    scale_vector,
    search_param_bits,
)
from .trainer import FloatSvmModel, Hyper, accuracy, random_search, train_binary, train_ova, train_ovo

__version__ = "0.1.0"
