from titan.arith_entanglement.exceptions import (
    ArithEntanglementException,
    DimensionMismatchException,
    GenerationException,
    InstanceParseException,
    InstanceValidationException,
    InvalidArgumentException,
    InvariantViolationException,
    NumericException,
    ResourceCapException,
    UnsupportedComputationException
)
from titan.arith_entanglement.config import (
    ComputationSettings,
    DEFAULT_SETTINGS
)
from titan.arith_entanglement.fp_linalg import (
    FpMatrix,
    Subspace
)
from titan.arith_entanglement.symplectic import (
    LocalFactor,
    SymplecticSpace
)
from titan.arith_entanglement.cyclotomic import CyclotomicAmplitude
from titan.arith_entanglement.instance import (
    DerivedStats,
    Instance,
    InstanceFactory,
    InstanceValidator,
    PhaseKind,
    PhaseSpec
)
from titan.arith_entanglement.instance_file import InstanceFile
from titan.arith_entanglement.state import (
    AmplitudeState,
    AmplitudeStateFile,
    StateBuilder,
    StateOperations
)
from titan.arith_entanglement.entropy import (
    AmplitudeBlocks,
    EntropyCalculator,
    EntropyMethod,
    EntropyResult,
    ReducedDensityMatrix,
    SchmidtDecomposition,
    SchmidtSpectrum
)
from titan.arith_entanglement.glueing import (
    ContractionWeights,
    Glueing,
    GlueingResult,
    InflatedInstance,
    InflatedInstanceFile
)
from titan.arith_entanglement.run_report import RunReport
